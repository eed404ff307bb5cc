//! Subquotient calculus for finite abelian groups.
//!
//! A finite abelian group is carried around in canonical coordinates
//! `⊕ Z/d_i` (invariant factors `d_i >= 2`). Maps between such groups are
//! integer matrices reduced per target row; kernels, images, cokernels and
//! homology all reduce to lattice computations through the Smith form.

use super::int_mat::{vec_mod, IntMat};
use super::smith::{kernel_lattice, smith_normal_form};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Canonical form of `Z^ambient / colspan(rel)`: coordinates with moduli
/// (0 marks a free coordinate), plus base change in both directions.
#[derive(Clone, Debug)]
pub struct CanonGroup {
    pub moduli: Vec<BigInt>,
    /// m x ambient, rows reduced mod the row modulus.
    pub to_canon: IntMat,
    /// ambient x m.
    pub from_canon: IntMat,
}

impl CanonGroup {
    pub fn order(&self) -> Option<BigInt> {
        if self.moduli.iter().any(|d| d.is_zero()) {
            None
        } else {
            Some(self.moduli.iter().product())
        }
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        vec_mod(&self.to_canon.mul_vec(x), &self.moduli)
    }

    pub fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.from_canon.mul_vec(y)
    }
}

/// Canonicalize `Z^ambient / colspan(rel)`.
pub fn canonicalize(ambient: usize, rel: &IntMat) -> CanonGroup {
    assert_eq!(rel.rows(), ambient, "relation matrix must have `ambient` rows");
    let snf = smith_normal_form(rel);
    let mut kept = Vec::new();
    for i in 0..ambient {
        let d = if i < snf.diag.len() { snf.diag[i].clone() } else { BigInt::zero() };
        if !d.is_one() {
            kept.push((i, d));
        }
    }
    let mut to_canon = IntMat::from_fn(kept.len(), ambient, |r, j| snf.left.at(kept[r].0, j).clone());
    for (r, (_, d)) in kept.iter().enumerate() {
        to_canon.reduce_row_mod(r, d);
    }
    let from_canon = IntMat::from_fn(ambient, kept.len(), |i, c| snf.left_inv.at(i, kept[c].0).clone());
    CanonGroup { moduli: kept.into_iter().map(|(_, d)| d).collect(), to_canon, from_canon }
}

/// Homomorphism `⊕ Z/src_i -> ⊕ Z/dst_j` given by an integer matrix.
#[derive(Clone, Debug)]
pub struct FinMap {
    pub src: Vec<BigInt>,
    pub dst: Vec<BigInt>,
    pub mat: IntMat,
}

impl FinMap {
    pub fn new(src: Vec<BigInt>, dst: Vec<BigInt>, mat: IntMat) -> Self {
        assert_eq!(mat.rows(), dst.len());
        assert_eq!(mat.cols(), src.len());
        FinMap { src, dst, mat }
    }

    pub fn zero(src: Vec<BigInt>, dst: Vec<BigInt>) -> Self {
        let mat = IntMat::zero(dst.len(), src.len());
        FinMap { src, dst, mat }
    }

    pub fn identity(moduli: Vec<BigInt>) -> Self {
        let mat = IntMat::identity(moduli.len());
        FinMap { src: moduli.clone(), dst: moduli, mat }
    }

    /// `mat[j][i] * src_i ≡ 0 (mod dst_j)` for every entry.
    pub fn is_well_defined(&self) -> bool {
        for j in 0..self.dst.len() {
            for i in 0..self.src.len() {
                let v = self.mat.at(j, i) * &self.src[i];
                if !self.dst[j].is_zero() && !v.mod_floor(&self.dst[j]).is_zero() {
                    return false;
                }
                if self.dst[j].is_zero() && !self.src[i].is_zero() && !self.mat.at(j, i).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        vec_mod(&self.mat.mul_vec(x), &self.dst)
    }

    /// self ∘ other
    pub fn compose(&self, other: &FinMap) -> FinMap {
        assert_eq!(self.src, other.dst, "composition moduli mismatch");
        let mut mat = self.mat.mul(&other.mat);
        for (j, d) in self.dst.iter().enumerate() {
            mat.reduce_row_mod(j, d);
        }
        FinMap { src: other.src.clone(), dst: self.dst.clone(), mat }
    }

    pub fn is_zero_map(&self) -> bool {
        for j in 0..self.dst.len() {
            for i in 0..self.src.len() {
                let v = if self.dst[j].is_zero() {
                    self.mat.at(j, i).clone()
                } else {
                    self.mat.at(j, i).mod_floor(&self.dst[j])
                };
                if !v.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact solver against a fixed lattice basis, caching the Smith form.
pub struct LatticeSolver {
    basis: IntMat,
    snf: super::smith::SmithDecomposition,
}

impl LatticeSolver {
    pub fn new(basis: IntMat) -> Self {
        let snf = smith_normal_form(&basis);
        LatticeSolver { basis, snf }
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    /// Coordinates of x in the lattice, or Unsolvable if x is outside.
    pub fn solve(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self.snf.left.mul_vec(x);
        let mut w = vec![BigInt::zero(); self.basis.cols()];
        for i in 0..self.basis.rows() {
            let d = if i < self.snf.diag.len() { self.snf.diag[i].clone() } else { BigInt::zero() };
            if d.is_zero() {
                if !y[i].is_zero() {
                    return Err(Error::Unsolvable);
                }
            } else {
                let (q, r) = y[i].div_mod_floor(&d);
                if !r.is_zero() {
                    return Err(Error::Unsolvable);
                }
                w[i] = q;
            }
        }
        Ok(self.snf.right.mul_vec(&w))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.solve(x).is_ok()
    }

    pub fn solve_cols(&self, m: &IntMat) -> Result<IntMat> {
        let mut cols = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            cols.push(self.solve(&m.col(j))?);
        }
        Ok(IntMat::from_cols(self.basis.cols(), &cols))
    }
}

/// Basis (columns) of the column span of `m`.
pub fn col_span_basis(m: &IntMat) -> IntMat {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let cols: Vec<Vec<BigInt>> = (0..rank)
        .map(|i| {
            let mut c = snf.left_inv.col(i);
            for v in c.iter_mut() {
                *v *= &snf.diag[i];
            }
            c
        })
        .collect();
    IntMat::from_cols(m.rows(), &cols)
}

pub fn diag_cols(moduli: &[BigInt]) -> IntMat {
    let nonzero: Vec<Vec<BigInt>> = moduli
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, m)| {
            let mut col = vec![BigInt::zero(); moduli.len()];
            col[i] = m.clone();
            col
        })
        .collect();
    IntMat::from_cols(moduli.len(), &nonzero)
}

/// A subgroup of `⊕ Z/ambient_i`, presented by a full-rank lattice
/// containing `diag(ambient)`, with its own canonical coordinates.
pub struct Subgroup {
    pub ambient_moduli: Vec<BigInt>,
    pub solver: LatticeSolver,
    pub canon: CanonGroup,
}

impl Subgroup {
    pub fn from_lattice(ambient_moduli: &[BigInt], lattice_gens: &IntMat) -> Result<Subgroup> {
        assert!(ambient_moduli.iter().all(|d| !d.is_zero()), "finite ambient required");
        let full = lattice_gens.hstack(&diag_cols(ambient_moduli));
        let basis = col_span_basis(&full);
        assert_eq!(basis.cols(), ambient_moduli.len(), "subgroup lattice must be full rank");
        let solver = LatticeSolver::new(basis);
        let rel = solver.solve_cols(&diag_cols(ambient_moduli))?;
        let canon = canonicalize(ambient_moduli.len(), &rel);
        Ok(Subgroup { ambient_moduli: ambient_moduli.to_vec(), solver, canon })
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.canon.moduli
    }

    pub fn order(&self) -> BigInt {
        self.canon.moduli.iter().product()
    }

    /// Generators as vectors in the ambient group (columns).
    pub fn gens(&self) -> IntMat {
        let mut g = self.solver.basis().mul(&self.canon.from_canon);
        for i in 0..g.rows() {
            let m = self.ambient_moduli[i].clone();
            g.reduce_row_mod(i, &m);
        }
        g
    }

    /// The inclusion as a map of canonical groups.
    pub fn inclusion(&self) -> FinMap {
        FinMap::new(self.canon.moduli.clone(), self.ambient_moduli.clone(), self.gens())
    }

    /// Subgroup coordinates of an ambient vector known to lie in the subgroup.
    pub fn coords(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let z = self.solver.solve(x)?;
        Ok(self.canon.coords(&z))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.solver.contains(x)
    }
}

/// Kernel of a map between finite groups, as a subgroup of the source.
pub fn kernel(f: &FinMap) -> Result<Subgroup> {
    let aug = f.mat.hstack(&diag_cols(&f.dst));
    let null = kernel_lattice(&aug);
    let x_block = null.submatrix(0..f.src.len(), 0..null.cols());
    Subgroup::from_lattice(&f.src, &x_block)
}

/// Image of a map, as a subgroup of the target.
pub fn image(f: &FinMap) -> Result<Subgroup> {
    Subgroup::from_lattice(&f.dst, &f.mat)
}

/// Quotient of `⊕ Z/ambient_i` by extra relation columns.
pub struct Quotient {
    pub ambient_moduli: Vec<BigInt>,
    pub canon: CanonGroup,
}

impl Quotient {
    pub fn moduli(&self) -> &[BigInt] {
        &self.canon.moduli
    }

    /// Projection as a map of canonical groups.
    pub fn projection(&self) -> FinMap {
        let mut mat = self.canon.to_canon.clone();
        for (i, d) in self.canon.moduli.iter().enumerate() {
            mat.reduce_row_mod(i, d);
        }
        FinMap::new(self.ambient_moduli.clone(), self.canon.moduli.clone(), mat)
    }

    /// A set-theoretic section (not a homomorphism in general).
    pub fn section(&self) -> IntMat {
        self.canon.from_canon.clone()
    }
}

pub fn quotient(ambient_moduli: &[BigInt], extra_rel: &IntMat) -> Quotient {
    let rel = extra_rel.hstack(&diag_cols(ambient_moduli));
    let canon = canonicalize(ambient_moduli.len(), &rel);
    Quotient { ambient_moduli: ambient_moduli.to_vec(), canon }
}

pub fn cokernel(f: &FinMap) -> Quotient {
    quotient(&f.dst, &f.mat)
}

/// Homology `ker(g)/im(f)` of a two-step complex `A --f--> B --g--> C`.
pub struct Homology {
    pub kernel: Subgroup,
    pub moduli: Vec<BigInt>,
    /// Representative cocycles, columns in the ambient of B.
    pub class_gens: IntMat,
    canon: CanonGroup,
}

impl Homology {
    /// Coordinates of a cocycle's class; errors if v is not in ker(g).
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let z = self.kernel.solver.solve(v)?;
        Ok(self.canon.coords(&z))
    }

    pub fn is_boundary(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.class_of(v)?.iter().all(|c| c.is_zero()))
    }

    pub fn order(&self) -> BigInt {
        self.moduli.iter().product()
    }
}

pub fn homology(f: &FinMap, g: &FinMap) -> Result<Homology> {
    assert_eq!(f.dst, g.src, "complex moduli mismatch");
    if !g.compose(f).is_zero_map() {
        return Err(Error::Invalid("not a complex: g∘f != 0".into()));
    }
    let ker = kernel(g)?;
    let rel_sources = f.mat.hstack(&diag_cols(&f.dst));
    let rel = ker.solver.solve_cols(&rel_sources)?;
    let canon = canonicalize(f.dst.len(), &rel);
    let mut class_gens = ker.solver.basis().mul(&canon.from_canon);
    for i in 0..class_gens.rows() {
        let m = f.dst[i].clone();
        class_gens.reduce_row_mod(i, &m);
    }
    Ok(Homology { moduli: canon.moduli.clone(), class_gens, canon, kernel: ker })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_mat::big;

    #[test]
    fn canonical_form_of_diag() {
        // Z^2 / <(2,0),(0,3)> is cyclic of order 6
        let g = canonicalize(2, &IntMat::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(g.moduli, vec![big(6)]);
        // round trip: coords(lift(y)) = y
        let y = vec![big(5)];
        assert_eq!(g.coords(&g.lift(&y)), y);
    }

    #[test]
    fn kernel_of_multiplication() {
        // x -> 2x on Z/4 has kernel Z/2
        let f = FinMap::new(vec![big(4)], vec![big(4)], IntMat::from_i64(&[&[2]]));
        let k = kernel(&f).unwrap();
        assert_eq!(k.moduli(), &[big(2)]);
        let gens = k.gens();
        assert_eq!(gens.at(0, 0).mod_floor(&big(4)), big(2));
    }

    #[test]
    fn image_and_cokernel() {
        // 1 -> 3 : Z/4 -> Z/6, image Z/2, cokernel Z/3
        let f = FinMap::new(vec![big(4)], vec![big(6)], IntMat::from_i64(&[&[3]]));
        assert!(f.is_well_defined());
        let im = image(&f).unwrap();
        assert_eq!(im.moduli(), &[big(2)]);
        let coker = cokernel(&f);
        assert_eq!(coker.moduli(), &[big(3)]);
    }

    #[test]
    fn homology_of_z4_complex() {
        // Z/4 --2--> Z/4 --2--> Z/4 : homology = <2>/<2> = 0...
        // actually ker(2)=<2> (order 2), im(2)=<2> (order 2), so H = 0
        let f = FinMap::new(vec![big(4)], vec![big(4)], IntMat::from_i64(&[&[2]]));
        let h = homology(&f, &f).unwrap();
        assert!(h.moduli.is_empty());
        // Z/4 --0--> Z/4 --2--> Z/4 : H = ker(2) = Z/2
        let z = FinMap::zero(vec![big(4)], vec![big(4)]);
        let h = homology(&z, &f).unwrap();
        assert_eq!(h.moduli, vec![big(2)]);
        let rep = h.class_gens.col(0);
        assert!(!h.is_boundary(&rep).unwrap());
    }
}
