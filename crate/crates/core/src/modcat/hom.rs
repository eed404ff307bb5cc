use super::module::PresentedModule;
use super::morphism::Morphism;
use crate::error::{Error, Result};
use crate::exact::int_mat::IntMat;
use crate::exact::subquot::{self, FinMap};
use num_bigint::BigInt;
use num_traits::Zero;

/// The group of module homomorphisms X -> Y: invariant factors plus a
/// generating set of actual morphisms (one per invariant factor).
#[derive(Clone)]
pub struct HomGroup {
    pub invariants: Vec<BigInt>,
    pub basis: Vec<Morphism>,
    source: PresentedModule,
    target: PresentedModule,
    var_moduli: Vec<BigInt>,
    sub: std::sync::Arc<subquot::Subgroup>,
}

impl std::fmt::Debug for HomGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "HomGroup(inv {:?})",
            self.invariants.iter().map(|d| d.to_string()).collect::<Vec<_>>()
        )
    }
}

impl HomGroup {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    /// The morphism with the given coordinates w.r.t. the basis.
    pub fn element(&self, coords: &[BigInt]) -> Morphism {
        assert_eq!(coords.len(), self.basis.len());
        let mut mat = IntMat::zero(self.target.rank(), self.source.rank());
        for (c, g) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for i in 0..mat.rows() {
                for j in 0..mat.cols() {
                    let v = mat.at(i, j) + c * g.matrix().at(i, j);
                    mat.set(i, j, v);
                }
            }
        }
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), mat)
    }

    /// Coordinates of a morphism w.r.t. the basis (errors if the map is not
    /// in the group, which cannot happen for well-defined morphisms).
    pub fn coords_of(&self, f: &Morphism) -> Result<Vec<BigInt>> {
        let mut flat = Vec::with_capacity(self.var_moduli.len());
        for j in 0..self.target.rank() {
            for i in 0..self.source.rank() {
                flat.push(f.matrix().at(j, i).clone());
            }
        }
        self.sub.coords(&flat)
    }

    /// Iterate over every element of the group (coordinates), capped.
    pub fn all_elements(&self, cap: u64) -> Result<Vec<Vec<BigInt>>> {
        let order = self.order();
        if order > BigInt::from(cap) {
            return Err(Error::SearchExhausted(format!(
                "hom group of order {order} exceeds enumeration cap {cap}"
            )));
        }
        let mut out = vec![vec![]];
        for d in &self.invariants {
            let d64 = u64::try_from(d).expect("desk scale");
            let mut next = Vec::with_capacity(out.len() * d64 as usize);
            for prefix in out {
                for c in 0..d64 {
                    let mut v = prefix.clone();
                    v.push(BigInt::from(c));
                    next.push(v);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// Compute Hom_R(X, Y) as a finite abelian group with explicit generating
/// morphisms. Solves the linear system expressing well-definedness and
/// commutation with every ring basis action.
pub fn hom_group(x: &PresentedModule, y: &PresentedModule) -> Result<HomGroup> {
    if x.ring() != y.ring() {
        return Err(Error::BaseMismatch);
    }
    let (mx, my) = (x.rank(), y.rank());
    let n = x.ring().rank();
    let var = |j: usize, i: usize| j * mx + i;
    let nvars = mx * my;
    let var_moduli: Vec<BigInt> =
        (0..my).flat_map(|j| std::iter::repeat(y.moduli()[j].clone()).take(mx)).collect();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut row_moduli: Vec<BigInt> = Vec::new();
    // divisibility: F[j][i] * d^X_i = 0 mod d^Y_j
    for j in 0..my {
        for i in 0..mx {
            let mut row = vec![BigInt::zero(); nvars];
            row[var(j, i)] = x.moduli()[i].clone();
            rows.push(row);
            row_moduli.push(y.moduli()[j].clone());
        }
    }
    // commutation with each ring basis action
    for b in 0..n {
        let ay = &y.scalar().actions[b];
        let ax = &x.scalar().actions[b];
        for j in 0..my {
            for i in 0..mx {
                let mut row = vec![BigInt::zero(); nvars];
                for k in 0..my {
                    row[var(k, i)] += ay.at(j, k);
                }
                for k in 0..mx {
                    row[var(j, k)] -= ax.at(k, i);
                }
                if row.iter().all(|v| v.is_zero()) {
                    continue;
                }
                rows.push(row);
                row_moduli.push(y.moduli()[j].clone());
            }
        }
    }
    let mat = IntMat::from_fn(rows.len(), nvars, |r, c| rows[r][c].clone());
    let constraint = FinMap::new(var_moduli.clone(), row_moduli, mat);
    let sub = subquot::kernel(&constraint)?;
    let invariants = sub.moduli().to_vec();
    let gens = sub.gens();
    let mut basis = Vec::with_capacity(gens.cols());
    for c in 0..gens.cols() {
        let col = gens.col(c);
        let mut m = IntMat::zero(my, mx);
        for j in 0..my {
            for i in 0..mx {
                m.set(j, i, col[var(j, i)].clone());
            }
        }
        basis.push(Morphism::new_unchecked(x.clone(), y.clone(), m));
    }
    Ok(HomGroup {
        invariants,
        basis,
        source: x.clone(),
        target: y.clone(),
        var_moduli,
        sub: std::sync::Arc::new(sub),
    })
}

/// Isomorphism testing by searching the hom group for an invertible map.
/// Exhaustive below the cap; errors beyond it.
pub fn is_isomorphic(x: &PresentedModule, y: &PresentedModule, cap: u64) -> Result<bool> {
    if x.ring() != y.ring() {
        return Err(Error::BaseMismatch);
    }
    if x.moduli() != y.moduli() {
        return Ok(false);
    }
    if x.is_zero_object() {
        return Ok(true);
    }
    let hom = hom_group(x, y)?;
    for coords in hom.all_elements(cap)? {
        let f = hom.element(&coords);
        if f.is_isomorphism()? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gf::{FiniteFieldMatrix, Gf};
    use crate::modcat::module::{make_finab, make_quiver_rep};
    use crate::modcat::ring::BaseRing;
    use num_integer::Integer;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Exhaustive oracle: additive maps X -> Y between finite abelian
    /// groups in canonical coordinates, counted by brute force over all
    /// generator images.
    fn count_additive_maps(xm: &[i64], ym: &[i64]) -> u64 {
        fn enumerate(moduli: &[i64]) -> Vec<Vec<i64>> {
            let mut out = vec![vec![]];
            for &d in moduli {
                let mut next = Vec::new();
                for p in &out {
                    for c in 0..d {
                        let mut v = p.clone();
                        v.push(c);
                        next.push(v);
                    }
                }
                out = next;
            }
            out
        }
        // a tuple of images (one per generator) defines a map iff each image
        // is killed by the generator's order
        let targets = enumerate(ym);
        let mut count = 1u64;
        for &d in xm {
            let valid = targets
                .iter()
                .filter(|img| img.iter().zip(ym).all(|(&v, &m)| (v * d) % m == 0))
                .count() as u64;
            count *= valid;
        }
        count
    }

    #[test]
    fn hom_z4_z6_is_z2() {
        let x = make_finab(&[4]).unwrap();
        let y = make_finab(&[6]).unwrap();
        let h = hom_group(&x, &y).unwrap();
        assert_eq!(h.invariants, vec![big(2)]);
        assert_eq!(h.order(), big(count_additive_maps(&[4], &[6]) as i64));
    }

    #[test]
    fn hom_to_zero_is_trivial() {
        let x = make_finab(&[4]).unwrap();
        let zero = make_finab(&[]).unwrap();
        let h = hom_group(&x, &zero).unwrap();
        assert!(h.is_trivial());
    }

    #[test]
    fn hom_counts_match_enumeration_oracle() {
        let samples: &[&[i64]] = &[&[], &[2], &[3], &[4], &[2, 2], &[6], &[2, 4], &[8], &[12]];
        for xm in samples {
            for ym in samples {
                let x = make_finab(xm).unwrap();
                let y = make_finab(ym).unwrap();
                let h = hom_group(&x, &y).unwrap();
                let expect = count_additive_maps(xm, ym);
                assert_eq!(
                    h.order(),
                    big(expect as i64),
                    "hom({xm:?},{ym:?}) order mismatch"
                );
                // basis morphisms have the right orders and are independent
                for (g, d) in h.basis.iter().zip(&h.invariants) {
                    let scaled = g.scale(d);
                    assert!(scaled.is_zero(), "basis morphism order must divide invariant");
                }
            }
        }
    }

    #[test]
    fn quiver_hom_s1_s2_vanishes() {
        let field = Gf::new(2, 1).unwrap();
        let ring = BaseRing::path_algebra_a2(field.clone()).unwrap();
        let s1 = make_quiver_rep(&ring, 1, 0, &FiniteFieldMatrix::zero(field.clone(), 0, 1)).unwrap();
        let s2 = make_quiver_rep(&ring, 0, 1, &FiniteFieldMatrix::zero(field.clone(), 1, 0)).unwrap();
        let h = hom_group(&s1, &s2).unwrap();
        assert!(h.is_trivial(), "hom(S1,S2) must vanish, got {h:?}");
        // but hom(S2, P1) is 1-dimensional
        let p1 = make_quiver_rep(&ring, 1, 1, &FiniteFieldMatrix::identity(field.clone(), 1)).unwrap();
        let h = hom_group(&s2, &p1).unwrap();
        assert_eq!(h.order(), big(2));
    }

    #[test]
    fn hom_respects_direct_sums() {
        // |hom(X ⊕ Y, Z)| = |hom(X, Z)| * |hom(Y, Z)|
        let x = make_finab(&[4]).unwrap();
        let y = make_finab(&[6]).unwrap();
        let z = make_finab(&[12]).unwrap();
        let (sum, _, _) = crate::modcat::morphism::direct_sum(&x, &y).unwrap();
        let lhs = hom_group(&sum, &z).unwrap().order();
        let rhs = hom_group(&x, &z).unwrap().order() * hom_group(&y, &z).unwrap().order();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coords_of_basis_elements() {
        let x = make_finab(&[4, 2]).unwrap();
        let h = hom_group(&x, &x).unwrap();
        for (idx, g) in h.basis.iter().enumerate() {
            let coords = h.coords_of(g).unwrap();
            for (k, c) in coords.iter().enumerate() {
                let expect = if k == idx { big(1) } else { big(0) };
                assert_eq!(c.mod_floor(&h.invariants[k]), expect.mod_floor(&h.invariants[k]));
            }
        }
    }
}
