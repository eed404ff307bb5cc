//! Finite fields F_{p^d} with canonical element encoding.
//!
//! Elements are indices below p^d whose base-p digits are the coefficients
//! of the residue polynomial in the generator g. The reduction polynomial is
//! fixed once per (p, d): the first monic irreducible polynomial, in
//! ascending order of its coefficient encoding, whose root generates the
//! multiplicative group. It is recorded in output metadata so encodings are
//! stable across runs.

use crate::error::{Error, Result};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GfParams {
    pub p: u64,
    pub d: u32,
    /// Monic reduction polynomial, constant coefficient first, length d+1.
    pub poly: Vec<u64>,
}

struct GfInner {
    params: GfParams,
    q: u64,
    /// x^d reduced: coefficients of -(poly tail), length d.
    reduction: Vec<u64>,
    /// Frobenius table: index -> index^p (when q is small enough to tabulate).
    frob: Vec<u64>,
}

/// A finite field with precomputed Frobenius tables. Cheap to clone.
#[derive(Clone)]
pub struct Gf(Arc<GfInner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.0.params == other.0.params
    }
}
impl Eq for Gf {}

impl std::fmt::Debug for Gf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{})", self.0.params.p, self.0.params.d)
    }
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

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial arithmetic mod (f, p); coefficient vectors constant-first.
mod poly {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&mut prod, f, p);
        prod
    }

    /// prod mod f, f monic
    pub fn rem(v: &mut Vec<u64>, f: &[u64], p: u64) {
        let d = f.len() - 1;
        while v.len() > d {
            let lead = *v.last().unwrap();
            let shift = v.len() - 1 - d;
            if lead != 0 {
                for i in 0..=d {
                    let idx = shift + i;
                    v[idx] = (v[idx] + (p - f[i] % p) % p * lead) % p;
                }
            }
            v.pop();
        }
        trim(v);
    }

    pub fn pow_mod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = base.to_vec();
        rem(&mut b, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        while !r1.is_empty() {
            // r0 mod r1 via synthetic division (r1 need not be monic)
            let lead_inv = inv_mod_p(*r1.last().unwrap(), p);
            while r0.len() >= r1.len() && !r0.is_empty() {
                let c = (*r0.last().unwrap() * lead_inv) % p;
                let shift = r0.len() - r1.len();
                for i in 0..r1.len() {
                    r0[shift + i] = (r0[shift + i] + (p - (c * r1[i]) % p)) % p;
                }
                trim(&mut r0);
            }
            std::mem::swap(&mut r0, &mut r1);
        }
        r0
    }

    pub fn inv_mod_p(a: u64, p: u64) -> u64 {
        // p prime, a != 0
        let mut result = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    }
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = (f.len() - 1) as u32;
    let x = vec![0, 1];
    // x^{p^d} == x mod f
    let xq = poly::pow_mod(&x, (p as u128).pow(d), f, p);
    let mut xv = x.clone();
    poly::rem(&mut xv, f, p);
    if xq != xv {
        return false;
    }
    for ell in prime_factors(d as u64) {
        let e = (p as u128).pow(d / ell as u32);
        let mut diff = poly::pow_mod(&x, e, f, p);
        // diff -= x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly::trim(&mut diff);
        let g = poly::gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn is_primitive_root(f: &[u64], p: u64) -> bool {
    let d = (f.len() - 1) as u32;
    let q = (p as u128).pow(d);
    let order = q - 1;
    let x = vec![0, 1];
    if order == 0 {
        return poly::pow_mod(&x, 1, f, p) == vec![1];
    }
    // x must be a unit of full multiplicative order
    if poly::pow_mod(&x, order, f, p) != vec![1] {
        return false;
    }
    for ell in prime_factors(order as u64) {
        let e = order / ell as u128;
        let r = poly::pow_mod(&x, e, f, p);
        if r == vec![1] {
            return false;
        }
    }
    true
}

/// The canonical reduction polynomial for F_{p^d}.
pub fn canonical_params(p: u64, d: u32) -> Result<GfParams> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if d == 0 || (p as u128).pow(d) > 1 << 20 {
        return Err(Error::Invalid(format!("field size p^d out of supported range: {p}^{d}")));
    }
    let q = p.pow(d);
    // candidates ordered by encoded value of the non-leading coefficients
    for enc in 0..q {
        let mut poly_vec: Vec<u64> = Vec::with_capacity(d as usize + 1);
        let mut e = enc;
        for _ in 0..d {
            poly_vec.push(e % p);
            e /= p;
        }
        poly_vec.push(1);
        if is_irreducible(&poly_vec, p) && is_primitive_root(&poly_vec, p) {
            return Ok(GfParams { p, d, poly: poly_vec });
        }
    }
    Err(Error::Invalid(format!("no primitive polynomial found for {p}^{d}")))
}

impl Gf {
    pub fn new(p: u64, d: u32) -> Result<Gf> {
        let params = canonical_params(p, d)?;
        Ok(Gf::from_params(params))
    }

    pub fn from_params(params: GfParams) -> Gf {
        let p = params.p;
        let d = params.d;
        let q = p.pow(d);
        let reduction: Vec<u64> = params.poly[..d as usize].iter().map(|&c| (p - c % p) % p).collect();
        let mut inner = GfInner { params, q, reduction, frob: vec![] };
        let mut frob = Vec::with_capacity(q as usize);
        for x in 0..q {
            frob.push(pow_raw(&inner, x, p as u128));
        }
        inner.frob = frob;
        Gf(Arc::new(inner))
    }

    pub fn params(&self) -> &GfParams {
        &self.0.params
    }

    pub fn p(&self) -> u64 {
        self.0.params.p
    }

    pub fn degree(&self) -> u32 {
        self.0.params.d
    }

    pub fn size(&self) -> u64 {
        self.0.q
    }

    /// The generator g (the class of x); equals the canonical primitive
    /// element for d > 1, and the residue 1 for prime fields of degree 1
    /// only in F_2.
    pub fn generator(&self) -> u64 {
        if self.degree() == 1 {
            // root of x + c0: -c0
            (self.p() - self.0.params.poly[0] % self.p()) % self.p()
        } else {
            self.p() // digits (0,1,0,..) = x
        }
    }

    pub fn digits(&self, x: u64) -> Vec<u64> {
        let p = self.p();
        let mut v = Vec::with_capacity(self.degree() as usize);
        let mut e = x;
        for _ in 0..self.degree() {
            v.push(e % p);
            e /= p;
        }
        v
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        let p = self.p();
        let mut x = 0u64;
        for &c in digits.iter().rev() {
            x = x * p + c % p;
        }
        x
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.p();
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
        self.from_digits(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.p();
        let d: Vec<u64> = self.digits(a).iter().map(|&x| (p - x) % p).collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_raw(&self.0, a, b)
    }

    pub fn pow(&self, a: u64, e: u128) -> u64 {
        pow_raw(&self.0, a, e)
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, (self.size() - 2) as u128)
    }

    /// x -> x^p
    pub fn frobenius(&self, a: u64) -> u64 {
        self.0.frob[a as usize]
    }

    /// x -> x^{1/p} (inverse of Frobenius; Frobenius iterated d-1 times)
    pub fn frobenius_inv(&self, a: u64) -> u64 {
        let mut x = a;
        for _ in 0..self.degree().saturating_sub(1) {
            x = self.frobenius(x);
        }
        x
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }
}

fn mul_raw(f: &GfInner, a: u64, b: u64) -> u64 {
    let p = f.params.p;
    let d = f.params.d as usize;
    let mut da = vec![0u64; d];
    let mut db = vec![0u64; d];
    let (mut ea, mut eb) = (a, b);
    for i in 0..d {
        da[i] = ea % p;
        ea /= p;
        db[i] = eb % p;
        eb /= p;
    }
    let mut prod = vec![0u64; 2 * d - 1];
    for i in 0..d {
        if da[i] == 0 {
            continue;
        }
        for j in 0..d {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    // reduce degrees >= d using x^d = reduction
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &r) in f.reduction.iter().enumerate() {
            prod[k - d + i] = (prod[k - d + i] + c * r) % p;
        }
    }
    let mut x = 0u64;
    for i in (0..d).rev() {
        x = x * p + prod[i];
    }
    x
}

fn pow_raw(f: &GfInner, a: u64, mut e: u128) -> u64 {
    let one = 1u64;
    let mut acc = one;
    let mut base = a;
    if e == 0 {
        return one;
    }
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_raw(f, acc, base);
        }
        base = mul_raw(f, base, base);
        e >>= 1;
    }
    acc
}

/// Dense matrix over F_{p^d}; entries are canonical field representatives.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFieldMatrix {
    pub field: Gf,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FiniteFieldMatrix {
    pub fn zero(field: Gf, rows: usize, cols: usize) -> Self {
        FiniteFieldMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_fn(field: Gf, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.size());
            }
        }
        FiniteFieldMatrix { field, rows, cols, data }
    }

    pub fn identity(field: Gf, k: usize) -> Self {
        let mut m = FiniteFieldMatrix::zero(field, k, k);
        for i in 0..k {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &FiniteFieldMatrix) -> FiniteFieldMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.field, other.field);
        let f = &self.field;
        let mut out = FiniteFieldMatrix::zero(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.at(i, j), f.mul(a, other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.at(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    /// Row echelon reduction; returns rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Reduce in place to reduced row echelon form; returns pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| self.at(i, c) != 0) else { continue };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = f.inv(self.at(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.at(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.at(i, c) != 0 {
                    let factor = self.at(i, c);
                    for j in 0..self.cols {
                        let v = f.sub(self.at(i, j), f.mul(factor, self.at(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// Basis (columns) of the right kernel.
    pub fn kernel_basis(&self) -> FiniteFieldMatrix {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FiniteFieldMatrix::zero(f.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(m.at(r, fc)));
            }
        }
        out
    }
}

impl std::fmt::Debug for FiniteFieldMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:?} {}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_polys() {
        assert_eq!(canonical_params(2, 1).unwrap().poly, vec![1, 1]); // x + 1
        assert_eq!(canonical_params(2, 2).unwrap().poly, vec![1, 1, 1]); // x^2 + x + 1
        assert_eq!(canonical_params(3, 2).unwrap().poly, vec![2, 1, 1]); // x^2 + x + 2
    }

    #[test]
    fn f4_arithmetic() {
        let f = Gf::new(2, 2).unwrap();
        let g = f.generator();
        assert_eq!(g, 2);
        // g^2 = g + 1 (encoding 3)
        assert_eq!(f.mul(g, g), 3);
        assert_eq!(f.pow(g, 3), 1);
        assert_eq!(f.frobenius(g), f.mul(g, g));
        assert_eq!(f.frobenius_inv(f.frobenius(g)), g);
        for x in f.elements() {
            if x != 0 {
                assert_eq!(f.mul(x, f.inv(x)), 1);
            }
        }
    }

    #[test]
    fn f9_field_laws() {
        let f = Gf::new(3, 2).unwrap();
        assert_eq!(f.size(), 9);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn matrix_rank_and_kernel() {
        let f = Gf::new(2, 1).unwrap();
        let m = FiniteFieldMatrix::from_fn(f.clone(), 2, 3, |i, j| ((i + j) % 2) as u64);
        let r = m.rank();
        assert_eq!(r, 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).data.iter().all(|&x| x == 0));
    }
}
