use super::model::{
    parse_int_matrix, parse_predicate_expr, parse_ring_matrix, ring_for_object, Task, Workspace,
};
use crate::error::{Error, Result};
use crate::exact::gf::{FiniteFieldMatrix, Gf};
use crate::gamma::group::FiniteGroup;
use crate::modcat::module::{make_finab, make_gamma_module, make_quiver_rep};
use crate::modcat::morphism::Morphism;
use serde_json::Value;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn verr(line: usize, msg: impl Into<String>) -> Error {
    Error::Validation { line, msg: msg.into() }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Parse and validate a workspace file. Line-oriented declarations with
/// JSON payloads; every referenced name must be declared earlier.
pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let mut ws = Workspace::empty();
    let mut seen_version = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_version {
            let Some(v) = line.strip_prefix("version") else {
                return Err(perr(line_no, "the first declaration must be `version 1`"));
            };
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| perr(line_no, "malformed version number"))?;
            if v != 1 {
                return Err(verr(line_no, format!("unsupported format version {v}")));
            }
            ws.version = v;
            seen_version = true;
            continue;
        }
        let mut parts = line.splitn(3, char::is_whitespace);
        let kind = parts.next().unwrap_or_default();
        let name = parts.next().unwrap_or_default();
        let payload_text = parts.next().unwrap_or_default().trim();
        if name.is_empty() || payload_text.is_empty() {
            return Err(perr(line_no, format!("expected `{kind} <name> <json>`")));
        }
        if !valid_name(name) {
            return Err(perr(line_no, format!("invalid name '{name}'")));
        }
        if ws.declaration_order.iter().any(|(n, _)| n == name) {
            return Err(verr(line_no, format!("duplicate name '{name}'")));
        }
        let payload: Value = serde_json::from_str(payload_text)
            .map_err(|e| perr(line_no, format!("bad JSON payload: {e} (column {})", e.column())))?;
        match kind {
            "field" => {
                let p = payload
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| verr(line_no, "field needs a prime p"))?;
                let d = payload.get("d").and_then(Value::as_u64).unwrap_or(1) as u32;
                let gf = Gf::new(p, d).map_err(|e| verr(line_no, e.to_string()))?;
                ws.fields.insert(name.to_string(), gf);
            }
            "group" => {
                let group = parse_group(&payload, line_no)?;
                ws.groups.insert(name.to_string(), group);
            }
            "object" => {
                let module = parse_object(&ws, &payload, line_no)?;
                ws.objects.insert(name.to_string(), module);
            }
            "morphism" => {
                let m = parse_morphism(&ws, &payload, line_no)?;
                ws.morphisms.insert(name.to_string(), m);
            }
            "predicate" => {
                let expr = payload
                    .get("expr")
                    .and_then(Value::as_str)
                    .ok_or_else(|| verr(line_no, "predicate needs an `expr` string"))?;
                let pred =
                    parse_predicate_expr(expr, &ws).map_err(|e| verr(line_no, e.to_string()))?;
                ws.predicates.insert(name.to_string(), pred);
            }
            "task" => {
                ws.tasks.push(Task { name: name.to_string(), line: line_no, payload: payload.clone() });
            }
            other => {
                return Err(perr(line_no, format!("unknown declaration kind '{other}'")));
            }
        }
        ws.declaration_order.push((name.to_string(), line_no));
        ws.raw_declarations.push((kind.to_string(), name.to_string(), payload));
    }
    if !seen_version {
        return Err(perr(1, "empty workspace: missing `version 1`"));
    }
    Ok(ws)
}

fn parse_group(payload: &Value, line: usize) -> Result<FiniteGroup> {
    if let Some(n) = payload.get("cyclic").and_then(Value::as_u64) {
        return Ok(FiniteGroup::cyclic(n as usize));
    }
    if payload.get("symmetric").and_then(Value::as_u64) == Some(3) {
        return Ok(FiniteGroup::symmetric_3());
    }
    if let Some(parts) = payload.get("product").and_then(Value::as_array) {
        let mut acc: Option<FiniteGroup> = None;
        for part in parts {
            let n = part
                .get("cyclic")
                .and_then(Value::as_u64)
                .ok_or_else(|| verr(line, "product parts must be {\"cyclic\": n}"))?;
            let g = FiniteGroup::cyclic(n as usize);
            acc = Some(match acc {
                None => g,
                Some(a) => a.product(&g).map_err(|e| verr(line, e.to_string()))?,
            });
        }
        return acc.ok_or_else(|| verr(line, "empty product"));
    }
    if let Some(table) = payload.get("table").and_then(Value::as_array) {
        let mut rows = Vec::new();
        for row in table {
            let row = row
                .as_array()
                .ok_or_else(|| verr(line, "group table rows must be arrays"))?;
            let mut out = Vec::new();
            for v in row {
                out.push(
                    v.as_u64().ok_or_else(|| verr(line, "group table entries must be indices"))?
                        as usize,
                );
            }
            rows.push(out);
        }
        return FiniteGroup::from_table(rows, "G").map_err(|e| verr(line, e.to_string()));
    }
    Err(verr(line, "group payload needs `table`, `cyclic`, `symmetric` or `product`"))
}

fn parse_object(
    ws: &Workspace,
    payload: &Value,
    line: usize,
) -> Result<crate::modcat::module::PresentedModule> {
    if let Some(finab) = payload.get("finab") {
        let invariants = parse_i64_list(finab.get("invariants"), line)?;
        return make_finab(&invariants).map_err(|e| verr(line, e.to_string()));
    }
    if let Some(gamma) = payload.get("gamma") {
        let gname = gamma
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| verr(line, "gamma object needs a group"))?;
        let group = ws.group(gname).map_err(|e| verr(line, e.to_string()))?;
        let invariants = parse_i64_list(gamma.get("invariants"), line)?;
        let action = gamma
            .get("action")
            .and_then(Value::as_array)
            .ok_or_else(|| verr(line, "gamma object needs an action (one matrix per element)"))?;
        let mats: Result<Vec<_>> = action.iter().map(parse_int_matrix).collect();
        let mats = mats.map_err(|e| verr(line, e.to_string()))?;
        return make_gamma_module(group, &invariants, &mats).map_err(|e| verr(line, e.to_string()));
    }
    if let Some(q) = payload.get("quiver") {
        let ring = ring_for_object(ws, payload).map_err(|e| verr(line, e.to_string()))?;
        let fname = q.get("field").and_then(Value::as_str).unwrap();
        let field = ws.field(fname).map_err(|e| verr(line, e.to_string()))?;
        let v1 = q.get("v1").and_then(Value::as_u64).unwrap_or(0) as usize;
        let v2 = q.get("v2").and_then(Value::as_u64).unwrap_or(0) as usize;
        let edge_rows = q
            .get("edge")
            .and_then(Value::as_array)
            .ok_or_else(|| verr(line, "quiver object needs an edge matrix (may be empty)"))?;
        if edge_rows.len() != v2 {
            return Err(verr(line, format!("edge matrix must have v2 = {v2} rows")));
        }
        let mut edge = FiniteFieldMatrix::zero(field.clone(), v2, v1);
        for (i, row) in edge_rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| verr(line, "edge matrix rows must be arrays"))?;
            if row.len() != v1 {
                return Err(verr(line, format!("edge matrix rows must have v1 = {v1} entries")));
            }
            for (j, v) in row.iter().enumerate() {
                let x = v
                    .as_u64()
                    .ok_or_else(|| verr(line, "edge entries are field element encodings"))?;
                if x >= field.size() {
                    return Err(verr(line, format!("field element {x} out of range")));
                }
                edge.set(i, j, x);
            }
        }
        return make_quiver_rep(&ring, v1, v2, &edge).map_err(|e| verr(line, e.to_string()));
    }
    Err(verr(line, "object payload must be finab, gamma or quiver"))
}

fn parse_morphism(ws: &Workspace, payload: &Value, line: usize) -> Result<Morphism> {
    let source = payload
        .get("source")
        .and_then(Value::as_str)
        .ok_or_else(|| verr(line, "morphism needs a source"))?;
    let target = payload
        .get("target")
        .and_then(Value::as_str)
        .ok_or_else(|| verr(line, "morphism needs a target"))?;
    let x = ws.object(source).map_err(|e| verr(line, e.to_string()))?;
    let y = ws.object(target).map_err(|e| verr(line, e.to_string()))?;
    let matrix = payload
        .get("matrix")
        .ok_or_else(|| verr(line, "morphism needs a matrix"))?;
    let entries = parse_ring_matrix(x.ring(), matrix, y.generators(), x.generators())
        .map_err(|e| verr(line, e.to_string()))?;
    Morphism::from_generator_matrix(x.clone(), y.clone(), &entries)
        .map_err(|e| verr(line, e.to_string()))
}

fn parse_i64_list(value: Option<&Value>, line: usize) -> Result<Vec<i64>> {
    let arr = value
        .and_then(Value::as_array)
        .ok_or_else(|| verr(line, "expected an integer list"))?;
    arr.iter()
        .map(|v| v.as_i64().ok_or_else(|| verr(line, "list entries must be integers")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_workspace() {
        let ws = parse_workspace("version 1\nobject M {\"finab\":{\"invariants\":[12]}}\n").unwrap();
        assert_eq!(ws.objects.len(), 1);
        assert_eq!(ws.object("M").unwrap().order(), 12.into());
    }

    #[test]
    fn duplicate_name_rejected() {
        let text = "version 1\nobject M {\"finab\":{\"invariants\":[2]}}\nobject M {\"finab\":{\"invariants\":[3]}}\n";
        match parse_workspace(text) {
            Err(Error::Validation { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains('M'));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn forward_reference_rejected() {
        let text = "version 1\npredicate B {\"expr\":\"span:{X}\"}\nobject X {\"finab\":{\"invariants\":[2]}}\n";
        assert!(matches!(parse_workspace(text), Err(Error::Validation { line: 2, .. })));
    }

    #[test]
    fn parse_error_has_position() {
        let text = "version 1\nobject M {broken json}\n";
        assert!(matches!(parse_workspace(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn full_featured_workspace() {
        let text = r#"version 1
field F2 {"p": 2, "d": 1}
group C2 {"cyclic": 2}
object M {"finab": {"invariants": [4, 3]}}
object N {"gamma": {"group": "C2", "invariants": [3], "action": [[[1]], [[-1]]]}}
object S1 {"quiver": {"field": "F2", "v1": 1, "v2": 0, "edge": []}}
morphism dbl {"source": "M", "target": "M", "matrix": [[2]]}
predicate B2 {"expr": "s_torsion:{2}"}
predicate SP {"expr": "span:{S1}"}
task t1 {"compute": "hom", "x": "M", "y": "M"}
"#;
        let ws = parse_workspace(text).unwrap();
        assert_eq!(ws.tasks.len(), 1);
        assert_eq!(ws.object("M").unwrap().moduli(), &[num_bigint::BigInt::from(12)]);
        assert!(ws.morphisms.contains_key("dbl"));
    }
}
