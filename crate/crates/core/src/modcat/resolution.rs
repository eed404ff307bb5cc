use super::module::PresentedModule;
use super::ring::{BaseRing, RingElem};
use crate::error::{Error, Result};
use crate::exact::int_mat::IntMat;
use crate::exact::smith::kernel_lattice;
use crate::exact::subquot::{col_span_basis, LatticeSolver};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A resolution of a module by free modules F_i = R^{ranks[i]}, with
/// differentials stored as matrices of ring elements. Exact at every step
/// by construction: the generators of F_{i+1} span ker(d_i), pruned to a
/// smaller generating set for tractable higher degrees.
pub struct FreeResolution {
    module: PresentedModule,
    ranks: Vec<usize>,
    /// maps[i] is d_{i+1}: F_{i+1} -> F_i; maps[i][col][slot] in R.
    maps: Vec<Vec<Vec<RingElem>>>,
    scalars: Vec<IntMat>,
}

impl FreeResolution {
    pub fn module(&self) -> &PresentedModule {
        &self.module
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks.get(i).copied().unwrap_or(0)
    }

    /// Differential d_{i+1}: F_{i+1} -> F_i, columns of ring elements.
    pub fn map(&self, i: usize) -> Option<&Vec<Vec<RingElem>>> {
        self.maps.get(i)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Verify d_i ∘ d_{i+1} = 0 and ker(d_i) = im(d_{i+1}) as lattices at
    /// every interior node.
    pub fn audit_exactness(&self) -> Result<()> {
        let ring = self.module.ring();
        let ch = ring.characteristic();
        for i in 1..self.maps.len() {
            if self.ranks[i + 1] == 0 {
                continue;
            }
            let comp = self.scalars[i - 1].mul(&self.scalars[i]);
            let reduced = if ch == 0 {
                comp.clone()
            } else {
                let p = BigInt::from(ch);
                let mut m = comp.clone();
                for r in 0..m.rows() {
                    m.reduce_row_mod(r, &p);
                }
                m
            };
            if !reduced.is_zero() {
                return Err(Error::Invalid(format!("d_{} ∘ d_{} is nonzero", i, i + 1)));
            }
            let ker = kernel_with_char(&self.scalars[i - 1], ch);
            let im = span_with_char(&self.scalars[i], ch);
            lattices_equal(&ker, &im)
                .then_some(())
                .ok_or_else(|| Error::Invalid(format!("resolution not exact at F_{i}")))?;
        }
        Ok(())
    }
}

fn kernel_with_char(s: &IntMat, ch: u64) -> IntMat {
    if ch == 0 {
        let k = kernel_lattice(s);
        col_span_basis(&k)
    } else {
        let p = BigInt::from(ch);
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        let aug = s.hstack(&IntMat::diagonal(&vec![p; s.rows()]));
        let null = kernel_lattice(&aug);
        for j in 0..null.cols() {
            cols.push(null.col(j)[..s.cols()].to_vec());
        }
        // elements of the free module are mod p
        let pbig = BigInt::from(ch);
        for a in 0..s.cols() {
            let mut col = vec![BigInt::zero(); s.cols()];
            col[a] = pbig.clone();
            cols.push(col);
        }
        col_span_basis(&IntMat::from_cols(s.cols(), &cols))
    }
}

fn span_with_char(s: &IntMat, ch: u64) -> IntMat {
    if ch == 0 {
        col_span_basis(s)
    } else {
        let p = BigInt::from(ch);
        let aug = s.hstack(&IntMat::diagonal(&vec![p; s.rows()]));
        col_span_basis(&aug)
    }
}

fn lattices_equal(a: &IntMat, b: &IntMat) -> bool {
    if a.rows() != b.rows() {
        return false;
    }
    let sa = LatticeSolver::new(a.clone());
    let sb = LatticeSolver::new(b.clone());
    (0..b.cols()).all(|j| sa.contains(&b.col(j)))
        && (0..a.cols()).all(|j| sb.contains(&a.col(j)))
}

/// Scalar matrix of a map between free modules given by ring-element
/// columns: source rank = cols.len(), target rank = slots per column.
pub(crate) fn scalar_of_free_map(
    ring: &BaseRing,
    target_rank: usize,
    cols: &[Vec<RingElem>],
) -> IntMat {
    let n = ring.rank();
    let mut s = IntMat::zero(target_rank * n, cols.len() * n);
    for (t, col) in cols.iter().enumerate() {
        for b in 0..n {
            for (slot, elem) in col.iter().enumerate() {
                let coords = ring.left_reg(b).mul_vec(elem);
                for (r, v) in coords.into_iter().enumerate() {
                    s.set(slot * n + r, t * n + b, v);
                }
            }
        }
    }
    s
}

/// The R-span of a set of scalar vectors (plus the characteristic lattice)
/// as a lattice solver.
fn r_span_solver(ring: &BaseRing, ambient: usize, vectors: &[Vec<BigInt>]) -> LatticeSolver {
    let n = ring.rank();
    let slots = ambient / n;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for v in vectors {
        for b in 0..n {
            let mut col = Vec::with_capacity(ambient);
            for t in 0..slots {
                let slice: Vec<BigInt> = v[t * n..(t + 1) * n].to_vec();
                col.extend(ring.left_reg(b).mul_vec(&slice));
            }
            cols.push(col);
        }
    }
    if ring.characteristic() > 0 {
        let p = BigInt::from(ring.characteristic());
        for a in 0..ambient {
            let mut col = vec![BigInt::zero(); ambient];
            col[a] = p.clone();
            cols.push(col);
        }
    }
    LatticeSolver::new(col_span_basis(&IntMat::from_cols(ambient, &cols)))
}

/// Greedily prune a generating set of a kernel to a smaller R-generating
/// set; the span is preserved (asserted).
fn prune_generators(ring: &BaseRing, ambient: usize, candidates: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ch = ring.characteristic();
    let mut active: Vec<Vec<BigInt>> = candidates
        .into_iter()
        .filter(|v| {
            if ch == 0 {
                v.iter().any(|x| !x.is_zero())
            } else {
                let p = BigInt::from(ch);
                v.iter().any(|x| !num_integer::Integer::mod_floor(x, &p).is_zero())
            }
        })
        .collect();
    let mut idx = 0;
    while idx < active.len() {
        let mut rest: Vec<Vec<BigInt>> = active.clone();
        let v = rest.remove(idx);
        let solver = r_span_solver(ring, ambient, &rest);
        if solver.contains(&v) {
            active.remove(idx);
        } else {
            idx += 1;
        }
    }
    active
}

/// Build a free resolution of the module to the given length (so that
/// differentials d_1 .. d_length exist, some possibly of rank 0).
pub fn resolve(module: &PresentedModule, length: usize) -> Result<FreeResolution> {
    let ring = module.ring().clone();
    let n = ring.rank();
    let ch = ring.characteristic();
    let g = module.generators();
    let mut ranks = vec![g];
    let mut maps: Vec<Vec<Vec<RingElem>>> = Vec::new();
    let mut scalars: Vec<IntMat> = Vec::new();
    // kernel of the augmentation F_0 -> X is spanned by the scalar relations
    let mut kernel_basis: Vec<Vec<BigInt>> = {
        let ambient = g * n;
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for rel in module.relations() {
            for b in 0..n {
                let mut col = Vec::with_capacity(ambient);
                for elem in rel {
                    col.extend(ring.left_reg(b).mul_vec(elem));
                }
                cols.push(col);
            }
        }
        if ch > 0 {
            let p = BigInt::from(ch);
            for a in 0..ambient {
                let mut col = vec![BigInt::zero(); ambient];
                col[a] = p.clone();
                cols.push(col);
            }
        }
        let basis = col_span_basis(&IntMat::from_cols(ambient, &cols));
        (0..basis.cols()).map(|j| basis.col(j)).collect()
    };
    for step in 0..length {
        let prev_rank = ranks[step];
        let ambient = prev_rank * n;
        let gens = prune_generators(&ring, ambient.max(n), kernel_basis.clone());
        // audit: pruned set still spans the kernel
        if !gens.is_empty() || !kernel_basis.is_empty() {
            let solver = r_span_solver(&ring, ambient.max(1), &gens);
            for v in &kernel_basis {
                if !solver.contains(v) {
                    return Err(Error::Invalid(
                        "pruned generating set lost part of the kernel".into(),
                    ));
                }
            }
        }
        let rank = gens.len();
        ranks.push(rank);
        // d_{step+1}: columns are the chosen generators, as ring elements
        let cols: Vec<Vec<RingElem>> = gens
            .iter()
            .map(|v| {
                (0..prev_rank)
                    .map(|t| ring.reduce_elem(v[t * n..(t + 1) * n].to_vec()))
                    .collect()
            })
            .collect();
        let scalar = scalar_of_free_map(&ring, prev_rank, &cols);
        maps.push(cols);
        scalars.push(scalar.clone());
        if rank == 0 {
            // resolution has terminated; pad with zero modules
            for _ in (step + 1)..length {
                ranks.push(0);
                maps.push(Vec::new());
                scalars.push(IntMat::zero(0, 0));
            }
            break;
        }
        // next kernel: vectors v with scalar * v = 0 (mod char)
        kernel_basis = {
            let basis = kernel_with_char(&scalar, ch);
            (0..basis.cols()).map(|j| basis.col(j)).collect()
        };
    }
    Ok(FreeResolution { module: module.clone(), ranks, maps, scalars })
}

/// A guarded memo cache of resolutions keyed by canonical form.
#[derive(Default)]
pub struct ResolutionCache {
    map: Mutex<HashMap<String, Arc<FreeResolution>>>,
}

fn module_key(module: &PresentedModule) -> String {
    use std::fmt::Write;
    let mut key = String::new();
    write!(key, "{}|", module.ring().label()).ok();
    for d in module.moduli() {
        write!(key, "{d},").ok();
    }
    key.push('|');
    for act in &module.scalar().actions {
        for i in 0..act.rows() {
            for j in 0..act.cols() {
                write!(key, "{};", act.at(i, j)).ok();
            }
        }
        key.push('/');
    }
    key
}

impl ResolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn resolve(&self, module: &PresentedModule, length: usize) -> Result<Arc<FreeResolution>> {
        let key = module_key(module);
        {
            let map = self.map.lock().expect("resolution cache poisoned");
            if let Some(res) = map.get(&key) {
                if res.len() >= length {
                    return Ok(Arc::clone(res));
                }
            }
        }
        let res = Arc::new(resolve(module, length)?);
        let mut map = self.map.lock().expect("resolution cache poisoned");
        map.insert(key, Arc::clone(&res));
        Ok(res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::group::FiniteGroup;
    use crate::modcat::module::{make_finab, make_gamma_module};

    #[test]
    fn resolution_of_z4_over_z() {
        // 0 -> Z --4--> Z -> Z/4: terminates at length 1
        let z4 = make_finab(&[4]).unwrap();
        let res = resolve(&z4, 3).unwrap();
        assert_eq!(res.ranks(), &[1, 1, 0, 0]);
        let d1 = &res.map(0).unwrap()[0];
        assert_eq!(d1[0], vec![BigInt::from(4)]);
        res.audit_exactness().unwrap();
    }

    #[test]
    fn resolution_of_zero_object() {
        let zero = make_finab(&[]).unwrap();
        let res = resolve(&zero, 2).unwrap();
        assert_eq!(res.ranks(), &[0, 0, 0]);
    }

    #[test]
    fn periodic_resolution_over_group_ring() {
        // F_2 as a trivial module over Z[C2]: ranks stay small and the
        // resolution is exact to length 4
        let c2 = FiniteGroup::cyclic(2);
        let m = make_gamma_module(&c2, &[2], &[IntMat::identity(1), IntMat::identity(1)]).unwrap();
        let res = resolve(&m, 4).unwrap();
        for i in 1..=4 {
            assert!(res.rank(i) >= 1, "resolution must continue (cd is infinite)");
            assert!(res.rank(i) <= 3, "pruning keeps ranks small, got {:?}", res.ranks());
        }
        res.audit_exactness().unwrap();
    }
}
