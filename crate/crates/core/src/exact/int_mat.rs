use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix with arbitrary-precision entries, row major.
///
/// Intermediate Smith reduction blows up fixed-width words even on small
/// inputs, so entries are `BigInt` throughout.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    /// Convenience constructor from machine integers (tests, fixtures).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        IntMat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMat::zero(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        IntMat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        IntMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows, "hstack shape mismatch");
        IntMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols, "vstack shape mismatch");
        IntMat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> IntMat {
        IntMat::from_fn(row_range.len(), col_range.len(), |i, j| {
            self.at(row_range.start + i, col_range.start + j).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_mul_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + c * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_mul_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, dst) + c * self.at(i, src);
            self.set(i, dst, v);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// Reduce every entry of row `i` into `[0, m)` for a positive modulus.
    pub fn reduce_row_mod(&mut self, i: usize, m: &BigInt) {
        if m.is_zero() {
            return;
        }
        let m = m.abs();
        for j in 0..self.cols {
            let v = num_integer::Integer::mod_floor(self.at(i, j), &m);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[allow(dead_code)]
pub(crate) fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub(crate) fn vec_mod(v: &[BigInt], moduli: &[BigInt]) -> Vec<BigInt> {
    v.iter()
        .zip(moduli)
        .map(|(x, m)| {
            if m.is_zero() {
                x.clone()
            } else {
                num_integer::Integer::mod_floor(x, m)
            }
        })
        .collect()
}
