use crate::error::{Error, Result};
use crate::exact::gf::Gf;
use crate::exact::int_mat::IntMat;
use crate::gamma::group::FiniteGroup;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::Arc;

/// Element of a base ring: integer coordinates on the ring's scalar basis.
pub type RingElem = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// The integers; modules are finite abelian groups.
    Integers,
    /// Integral group ring of a finite group; modules are finite abelian
    /// groups with an action.
    GroupRing(FiniteGroup),
    /// Path algebra of the quiver 1 -> 2 over a finite field; modules are
    /// finite-dimensional representations.
    PathAlgebraA2(Gf),
}

struct RingInner {
    kind: RingKind,
    rank: usize,
    characteristic: u64,
    /// Left regular representation of each basis element: `left_reg[b]`
    /// has column j equal to the coordinates of `basis_b * basis_j`.
    left_reg: Vec<IntMat>,
    one: RingElem,
    label: String,
}

/// A base ring free of finite rank over the integers (or killed by a prime
/// for the finite-field realizations), with structure constants validated
/// on construction. Cheap to clone.
#[derive(Clone)]
pub struct BaseRing(Arc<RingInner>);

impl PartialEq for BaseRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for BaseRing {}

impl std::fmt::Debug for BaseRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BaseRing({})", self.0.label)
    }
}

impl BaseRing {
    pub fn integers() -> BaseRing {
        let inner = RingInner {
            kind: RingKind::Integers,
            rank: 1,
            characteristic: 0,
            left_reg: vec![IntMat::identity(1)],
            one: vec![BigInt::one()],
            label: "Z".into(),
        };
        let ring = BaseRing(Arc::new(inner));
        ring.validate().expect("integer ring is valid");
        ring
    }

    pub fn group_ring(group: FiniteGroup) -> Result<BaseRing> {
        let n = group.order();
        let left_reg = group
            .elements()
            .map(|g| {
                IntMat::from_fn(n, n, |i, j| {
                    if group.mul(g, j) == i {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
            })
            .collect();
        let mut one = vec![BigInt::zero(); n];
        one[group.identity()] = BigInt::one();
        let label = format!("Z[{}]", group.label());
        let inner = RingInner {
            kind: RingKind::GroupRing(group),
            rank: n,
            characteristic: 0,
            left_reg,
            one,
            label,
        };
        let ring = BaseRing(Arc::new(inner));
        ring.validate()?;
        Ok(ring)
    }

    /// Basis of the path algebra: index `3*t + s` where `t < d` is the power
    /// of the field generator and `s` is 0 (vertex idempotent e1),
    /// 1 (vertex idempotent e2) or 2 (the arrow a, with a = e2 a e1).
    pub fn path_algebra_a2(field: Gf) -> Result<BaseRing> {
        let d = field.degree() as usize;
        let p = field.p();
        let rank = 3 * d;
        let g = field.generator();
        // product of the symbol parts: s * s'
        let sym_mul = |s: usize, s2: usize| -> Option<usize> {
            match (s, s2) {
                (0, 0) => Some(0), // e1 e1 = e1
                (1, 1) => Some(1), // e2 e2 = e2
                (2, 0) => Some(2), // a e1 = a
                (1, 2) => Some(2), // e2 a = a
                _ => None,
            }
        };
        let mut left_reg = Vec::with_capacity(rank);
        for t in 0..d {
            for s in 0..3 {
                let mut m = IntMat::zero(rank, rank);
                for u in 0..d {
                    for s2 in 0..3 {
                        let j = 3 * u + s2;
                        let Some(sym) = sym_mul(s, s2) else { continue };
                        // coefficient field element g^{t+u}
                        let x = field.mul(field.pow(g, t as u128), field.pow(g, u as u128));
                        for (m_idx, c) in field.digits(x).into_iter().enumerate() {
                            if c != 0 {
                                let i = 3 * m_idx + sym;
                                let v = m.at(i, j) + BigInt::from(c);
                                m.set(i, j, v);
                            }
                        }
                    }
                }
                left_reg.push(m);
            }
        }
        let mut one = vec![BigInt::zero(); rank];
        one[0] = BigInt::one(); // e1
        one[1] = BigInt::one(); // e2
        let label = format!("A2(F{})", field.size());
        let inner = RingInner {
            kind: RingKind::PathAlgebraA2(field),
            rank,
            characteristic: p,
            left_reg,
            one,
            label,
        };
        let ring = BaseRing(Arc::new(inner));
        ring.validate()?;
        Ok(ring)
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn one(&self) -> &RingElem {
        &self.0.one
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn left_reg(&self, b: usize) -> &IntMat {
        &self.0.left_reg[b]
    }

    pub fn basis_elem(&self, b: usize) -> RingElem {
        let mut e = vec![BigInt::zero(); self.0.rank];
        e[b] = BigInt::one();
        e
    }

    pub fn zero_elem(&self) -> RingElem {
        vec![BigInt::zero(); self.0.rank]
    }

    pub fn int_elem(&self, c: i64) -> RingElem {
        self.scale_elem(&BigInt::from(c), &self.0.one)
    }

    pub fn scale_elem(&self, c: &BigInt, x: &RingElem) -> RingElem {
        self.reduce_elem(x.iter().map(|v| c * v).collect())
    }

    pub fn add_elem(&self, x: &RingElem, y: &RingElem) -> RingElem {
        self.reduce_elem(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    pub fn neg_elem(&self, x: &RingElem) -> RingElem {
        self.reduce_elem(x.iter().map(|a| -a).collect())
    }

    pub fn mul_elem(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let mut acc = vec![BigInt::zero(); self.0.rank];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let contrib = self.0.left_reg[i].mul_vec(y);
            for (a, v) in acc.iter_mut().zip(contrib) {
                *a += c * v;
            }
        }
        self.reduce_elem(acc)
    }

    pub fn reduce_elem(&self, x: RingElem) -> RingElem {
        if self.0.characteristic == 0 {
            return x;
        }
        let p = BigInt::from(self.0.characteristic);
        x.into_iter().map(|v| v.mod_floor(&p)).collect()
    }

    pub fn elem_is_zero(&self, x: &RingElem) -> bool {
        self.reduce_elem(x.clone()).iter().all(|v| v.is_zero())
    }

    /// The regular-representation matrix of an arbitrary element.
    pub fn reg_matrix(&self, x: &RingElem) -> IntMat {
        let mut m = IntMat::zero(self.0.rank, self.0.rank);
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..self.0.rank {
                for s in 0..self.0.rank {
                    let v = m.at(r, s) + c * self.0.left_reg[i].at(r, s);
                    m.set(r, s, v);
                }
            }
        }
        m
    }

    /// For the finite-field realization: the ring element realizing
    /// multiplication by a field scalar.
    pub fn field_scalar_elem(&self, x: u64) -> Result<RingElem> {
        let RingKind::PathAlgebraA2(field) = &self.0.kind else {
            return Err(Error::Invalid("field scalars only exist over the path algebra".into()));
        };
        let mut e = vec![BigInt::zero(); self.0.rank];
        for (m, c) in field.digits(x).into_iter().enumerate() {
            if c != 0 {
                e[3 * m] = BigInt::from(c); // c * g^m * e1
                e[3 * m + 1] = BigInt::from(c); // c * g^m * e2
            }
        }
        Ok(e)
    }

    fn validate(&self) -> Result<()> {
        let n = self.0.rank;
        // unital
        let one_reg = self.reg_matrix(&self.0.one);
        let id = IntMat::identity(n);
        if self.reduce_mat(one_reg) != self.reduce_mat(id.clone()) {
            return Err(Error::Invalid(format!("ring {} is not left-unital", self.0.label)));
        }
        for j in 0..n {
            let bj = self.basis_elem(j);
            let r = self.mul_elem(&bj, &self.0.one);
            if !self.elem_eq(&r, &bj) {
                return Err(Error::Invalid(format!("ring {} is not right-unital", self.0.label)));
            }
        }
        // associativity on basis triples
        for i in 0..n {
            for j in 0..n {
                let bij = self.mul_elem(&self.basis_elem(i), &self.basis_elem(j));
                for k in 0..n {
                    let lhs = self.mul_elem(&bij, &self.basis_elem(k));
                    let bjk = self.mul_elem(&self.basis_elem(j), &self.basis_elem(k));
                    let rhs = self.mul_elem(&self.basis_elem(i), &bjk);
                    if !self.elem_eq(&lhs, &rhs) {
                        return Err(Error::Invalid(format!(
                            "ring {} is not associative at basis ({i},{j},{k})",
                            self.0.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn reduce_mat(&self, m: IntMat) -> IntMat {
        if self.0.characteristic == 0 {
            return m;
        }
        let p = BigInt::from(self.0.characteristic);
        let mut out = m;
        for i in 0..out.rows() {
            out.reduce_row_mod(i, &p);
        }
        out
    }

    pub fn elem_eq(&self, x: &RingElem, y: &RingElem) -> bool {
        let d = self.add_elem(x, &self.neg_elem(y));
        d.iter().all(|v| v.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_ring_of_c2() {
        let r = BaseRing::group_ring(FiniteGroup::cyclic(2)).unwrap();
        assert_eq!(r.rank(), 2);
        let sigma = r.basis_elem(1);
        let sq = r.mul_elem(&sigma, &sigma);
        assert!(r.elem_eq(&sq, r.one()));
    }

    #[test]
    fn path_algebra_relations() {
        let f = Gf::new(2, 1).unwrap();
        let r = BaseRing::path_algebra_a2(f).unwrap();
        let e1 = r.basis_elem(0);
        let e2 = r.basis_elem(1);
        let a = r.basis_elem(2);
        assert!(r.elem_eq(&r.mul_elem(&e1, &e1), &e1));
        assert!(r.elem_is_zero(&r.mul_elem(&e1, &e2)));
        assert!(r.elem_eq(&r.mul_elem(&a, &e1), &a));
        assert!(r.elem_eq(&r.mul_elem(&e2, &a), &a));
        assert!(r.elem_is_zero(&r.mul_elem(&a, &a)));
        assert!(r.elem_is_zero(&r.mul_elem(&e1, &a)));
    }

    #[test]
    fn path_algebra_over_f4_twists() {
        let f = Gf::new(2, 2).unwrap();
        let r = BaseRing::path_algebra_a2(f.clone()).unwrap();
        // (g e1)(g e1) = g^2 e1, and g^2 = g + 1 in F4
        let ge1 = r.basis_elem(3);
        let sq = r.mul_elem(&ge1, &ge1);
        let mut expect = r.zero_elem();
        expect[0] = BigInt::one(); // 1*e1
        expect[3] = BigInt::one(); // g*e1
        assert!(r.elem_eq(&sq, &expect));
    }
}
