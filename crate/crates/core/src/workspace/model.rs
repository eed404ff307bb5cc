use crate::error::{Error, Result};
use crate::exact::gf::Gf;
use crate::exact::int_mat::IntMat;
use crate::gamma::group::FiniteGroup;
use crate::modcat::module::PresentedModule;
use crate::modcat::morphism::Morphism;
use crate::modcat::ring::{BaseRing, RingKind};
use crate::serre::predicate::SerrePredicate;
use num_bigint::BigInt;
use serde_json::Value;
use std::collections::BTreeMap;

/// A parsed and validated workspace: named declarations plus a task list,
/// in declaration order.
pub struct Workspace {
    pub version: u32,
    pub fields: BTreeMap<String, Gf>,
    pub groups: BTreeMap<String, FiniteGroup>,
    pub objects: BTreeMap<String, PresentedModule>,
    pub morphisms: BTreeMap<String, Morphism>,
    pub predicates: BTreeMap<String, SerrePredicate>,
    pub tasks: Vec<Task>,
    /// every declared name with its line, for diagnostics
    pub declaration_order: Vec<(String, usize)>,
    /// raw declarations in order (kind, name, payload), for canonical
    /// re-emission by `fmt`
    pub raw_declarations: Vec<(String, String, Value)>,
}

#[derive(Clone, Debug)]
pub struct Task {
    pub name: String,
    pub line: usize,
    pub payload: Value,
}

impl Workspace {
    pub fn empty() -> Workspace {
        Workspace {
            version: 1,
            fields: BTreeMap::new(),
            groups: BTreeMap::new(),
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            predicates: BTreeMap::new(),
            tasks: Vec::new(),
            declaration_order: Vec::new(),
            raw_declarations: Vec::new(),
        }
    }

    pub fn object(&self, name: &str) -> Result<&PresentedModule> {
        self.objects
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unknown object '{name}'")))
    }

    pub fn predicate(&self, name: &str) -> Result<&SerrePredicate> {
        self.predicates
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unknown predicate '{name}'")))
    }

    pub fn group(&self, name: &str) -> Result<&FiniteGroup> {
        self.groups
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unknown group '{name}'")))
    }

    pub fn field(&self, name: &str) -> Result<&Gf> {
        self.fields
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unknown field '{name}'")))
    }
}

/// Parse a predicate expression in the CLI syntax:
/// "s_torsion:{2,3}", "etale_like", or "span:{Name1,Name2}".
pub fn parse_predicate_expr(expr: &str, ws: &Workspace) -> Result<SerrePredicate> {
    let expr = expr.trim();
    if expr == "etale_like" {
        return Ok(SerrePredicate::EtaleLike);
    }
    if let Some(rest) = expr.strip_prefix("s_torsion:") {
        let inner = rest
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("malformed s_torsion set in '{expr}'")))?;
        let mut primes = Vec::new();
        for part in inner.split(',').filter(|s| !s.trim().is_empty()) {
            let p: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad prime '{part}' in '{expr}'")))?;
            if !is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not prime in '{expr}'")));
            }
            primes.push(p);
        }
        return Ok(SerrePredicate::s_torsion(&primes));
    }
    if let Some(rest) = expr.strip_prefix("span:") {
        let inner = rest
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("malformed span set in '{expr}'")))?;
        let mut seeds = Vec::new();
        for part in inner.split(',').filter(|s| !s.trim().is_empty()) {
            seeds.push(ws.object(part.trim())?.clone());
        }
        return Ok(SerrePredicate::span(seeds));
    }
    Err(Error::Invalid(format!("unrecognized predicate expression '{expr}'")))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Interpret a JSON matrix of ring elements (integers for rank-one rings,
/// arrays of coordinates otherwise) as a generator matrix.
pub fn parse_ring_matrix(
    ring: &BaseRing,
    value: &Value,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<crate::modcat::ring::RingElem>>> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Invalid("matrix must be an array of rows".into()))?;
    if arr.len() != rows {
        return Err(Error::DimMismatch(format!("matrix must have {rows} rows")));
    }
    let mut out = Vec::with_capacity(rows);
    for row in arr {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?;
        if row.len() != cols {
            return Err(Error::DimMismatch(format!("matrix rows must have {cols} entries")));
        }
        let mut out_row = Vec::with_capacity(cols);
        for entry in row {
            out_row.push(parse_ring_elem(ring, entry)?);
        }
        out.push(out_row);
    }
    Ok(out)
}

pub fn parse_ring_elem(ring: &BaseRing, value: &Value) -> Result<crate::modcat::ring::RingElem> {
    match value {
        Value::Number(n) => {
            let c = n
                .as_i64()
                .ok_or_else(|| Error::Invalid(format!("bad integer coefficient {n}")))?;
            Ok(ring.int_elem(c))
        }
        Value::Array(coords) => {
            if coords.len() != ring.rank() {
                return Err(Error::DimMismatch(format!(
                    "ring element needs {} coordinates",
                    ring.rank()
                )));
            }
            let mut elem = ring.zero_elem();
            for (i, c) in coords.iter().enumerate() {
                let v = c
                    .as_i64()
                    .ok_or_else(|| Error::Invalid("ring coordinates must be integers".into()))?;
                elem[i] = BigInt::from(v);
            }
            Ok(ring.reduce_elem(elem))
        }
        _ => Err(Error::Invalid("ring element must be an integer or coordinate array".into())),
    }
}

/// Parse an integer matrix from JSON (used for group actions).
pub fn parse_int_matrix(value: &Value) -> Result<IntMat> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Invalid("matrix must be an array".into()))?;
    let nrows = rows.len();
    let ncols = rows
        .first()
        .and_then(|r| r.as_array())
        .map(|r| r.len())
        .unwrap_or(0);
    let mut out = IntMat::zero(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?;
        if row.len() != ncols {
            return Err(Error::DimMismatch("ragged matrix".into()));
        }
        for (j, v) in row.iter().enumerate() {
            let v = v
                .as_i64()
                .ok_or_else(|| Error::Invalid("matrix entries must be integers".into()))?;
            out.set(i, j, BigInt::from(v));
        }
    }
    Ok(out)
}

/// Ring lookup/construction for an object payload.
pub fn ring_for_object(ws: &Workspace, payload: &Value) -> Result<BaseRing> {
    if payload.get("finab").is_some() {
        return Ok(BaseRing::integers());
    }
    if let Some(gamma) = payload.get("gamma") {
        let gname = gamma
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("gamma object needs a group name".into()))?;
        return BaseRing::group_ring(ws.group(gname)?.clone());
    }
    if let Some(q) = payload.get("quiver") {
        let fname = q
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("quiver object needs a field name".into()))?;
        return BaseRing::path_algebra_a2(ws.field(fname)?.clone());
    }
    Err(Error::Invalid("object payload must be finab, gamma or quiver".into()))
}

/// Base rings are deduplicated per workspace so that objects over the same
/// declared ring compare equal.
pub struct RingTable {
    pub integers: BaseRing,
    pub group_rings: BTreeMap<String, BaseRing>,
    pub path_algebras: BTreeMap<String, BaseRing>,
}

impl RingTable {
    pub fn new() -> RingTable {
        RingTable {
            integers: BaseRing::integers(),
            group_rings: BTreeMap::new(),
            path_algebras: BTreeMap::new(),
        }
    }
}

impl Default for RingTable {
    fn default() -> Self {
        Self::new()
    }
}

pub fn ring_kind_name(ring: &BaseRing) -> &'static str {
    match ring.kind() {
        RingKind::Integers => "integers",
        RingKind::GroupRing(_) => "group_ring",
        RingKind::PathAlgebraA2(_) => "path_algebra_a2",
    }
}
