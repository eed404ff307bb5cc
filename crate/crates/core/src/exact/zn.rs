//! Dense linear algebra over Z/n with machine words.
//!
//! The bar cochain complexes get large enough that arbitrary-precision Smith
//! reduction is wasteful; every group in sight is killed by the coefficient
//! exponent n, so all computations can run mod n. Z/n is a principal ideal
//! ring and admits a Smith-like diagonalization using unit stabilization.

use num_integer::Integer;

#[derive(Clone, PartialEq, Eq)]
pub struct ZnMat {
    pub n: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn inv_mod(a: u64, n: u64) -> u64 {
    // extended euclid; a must be a unit mod n
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not a unit mod n");
    s0.rem_euclid(n as i128) as u64
}

/// Unit u with u * gcd(x, n) ≡ x (mod n).
fn stabilizing_unit(x: u64, n: u64) -> u64 {
    let g = x.gcd(&n);
    let xp = x / g;
    let step = n / g;
    let mut u = xp % n;
    let mut t = 0u64;
    while u.gcd(&n) != 1 {
        t += 1;
        u = (xp + t * step) % n;
        debug_assert!(t <= n, "stabilization must terminate");
    }
    u
}

impl ZnMat {
    pub fn zero(n: u64, rows: usize, cols: usize) -> Self {
        assert!(n >= 1);
        ZnMat { n, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: u64, k: usize) -> Self {
        let mut m = ZnMat::zero(n, k, k);
        for i in 0..k {
            m.set(i, i, 1 % n);
        }
        m
    }

    pub fn from_fn(n: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % n);
            }
        }
        ZnMat { n, rows, cols, data }
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
        self.data[i * self.cols + j] = v % self.n;
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn from_cols(n: u64, rows: usize, cols: &[Vec<u64>]) -> Self {
        ZnMat::from_fn(n, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn hstack(&self, other: &ZnMat) -> ZnMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.n, other.n);
        ZnMat::from_fn(self.n, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j)
            } else {
                other.at(i, j - self.cols)
            }
        })
    }

    pub fn mul(&self, other: &ZnMat) -> ZnMat {
        assert_eq!(self.cols, other.rows);
        let n = self.n;
        let mut out = ZnMat::zero(n, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = (out.at(i, j) + mul_mod(a, b, n)) % n;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = (acc + mul_mod(self.at(i, j), v[j], self.n)) % self.n;
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_mul_row(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = (self.at(dst, j) + mul_mod(c, self.at(src, j), self.n)) % self.n;
            self.set(dst, j, v);
        }
    }

    fn add_mul_col(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = (self.at(i, dst) + mul_mod(c, self.at(i, src), self.n)) % self.n;
            self.set(i, dst, v);
        }
    }

    fn scale_row(&mut self, i: usize, u: u64) {
        for j in 0..self.cols {
            let v = mul_mod(self.at(i, j), u, self.n);
            self.set(i, j, v);
        }
    }
}

impl std::fmt::Debug for ZnMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ZnMat(mod {}) {}x{} [", self.n, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub struct ZnSmith {
    pub left: ZnMat,
    pub left_inv: ZnMat,
    /// Diagonal entries normalized to divisors of n (each divides the next,
    /// where "divides" is on the gcd with n; trailing entries may be 0,
    /// meaning an unconstrained coordinate).
    pub diag: Vec<u64>,
    pub right: ZnMat,
    pub right_inv: ZnMat,
}

struct ZnReduction {
    m: ZnMat,
    left: ZnMat,
    left_inv: ZnMat,
    right: ZnMat,
    right_inv: ZnMat,
}

impl ZnReduction {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.left.swap_rows(a, b);
        self.left_inv.swap_cols(a, b);
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.right.swap_cols(a, b);
        self.right_inv.swap_rows(a, b);
    }
    fn add_mul_row(&mut self, dst: usize, src: usize, c: u64) {
        self.m.add_mul_row(dst, src, c);
        self.left.add_mul_row(dst, src, c);
        let n = self.m.n;
        self.left_inv.add_mul_col(src, dst, (n - c % n) % n);
    }
    fn add_mul_col(&mut self, dst: usize, src: usize, c: u64) {
        self.m.add_mul_col(dst, src, c);
        self.right.add_mul_col(dst, src, c);
        let n = self.m.n;
        self.right_inv.add_mul_row(src, dst, (n - c % n) % n);
    }
    fn scale_row(&mut self, i: usize, u: u64) {
        self.m.scale_row(i, u);
        self.left.scale_row(i, u);
        let inv = inv_mod(u, self.m.n);
        for r in 0..self.left_inv.rows() {
            let v = mul_mod(self.left_inv.at(r, i), inv, self.m.n);
            self.left_inv.set(r, i, v);
        }
    }
}

fn gcd_size(x: u64, n: u64) -> u64 {
    if x == 0 {
        n
    } else {
        x.gcd(&n)
    }
}

pub fn zn_smith(a: &ZnMat) -> ZnSmith {
    let n = a.n;
    let (rows, cols) = (a.rows, a.cols);
    let mut red = ZnReduction {
        m: a.clone(),
        left: ZnMat::identity(n, rows),
        left_inv: ZnMat::identity(n, rows),
        right: ZnMat::identity(n, cols),
        right_inv: ZnMat::identity(n, cols),
    };
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // pivot: smallest gcd with n, ties by (row, col)
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = red.m.at(i, j);
                if x == 0 {
                    continue;
                }
                let g = gcd_size(x, n);
                if best.as_ref().map_or(true, |(bg, _, _)| g < *bg) {
                    best = Some((g, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        red.swap_rows(t, pi);
        red.swap_cols(t, pj);
        zn_clear_cross(&mut red, t);
        // divisibility: pivot gcd must divide every later entry's gcd
        'div: loop {
            let g = gcd_size(red.m.at(t, t), n);
            for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    let x = red.m.at(i, j);
                    if x != 0 && x.gcd(&n) % g != 0 {
                        red.add_mul_row(t, i, 1);
                        zn_clear_cross(&mut red, t);
                        continue 'div;
                    }
                }
            }
            break;
        }
        t += 1;
    }
    // normalize pivots to divisors of n by unit scaling
    for i in 0..steps {
        let x = red.m.at(i, i);
        if x != 0 {
            let u = stabilizing_unit(x, n);
            red.scale_row(i, inv_mod(u, n));
        }
    }
    let diag = (0..steps).map(|i| red.m.at(i, i)).collect();
    ZnSmith {
        left: red.left,
        left_inv: red.left_inv,
        diag,
        right: red.right,
        right_inv: red.right_inv,
    }
}

fn zn_clear_cross(red: &mut ZnReduction, t: usize) {
    let n = red.m.n;
    loop {
        loop {
            let mut dirty = None;
            for i in (t + 1)..red.m.rows() {
                if red.m.at(i, t) != 0 {
                    dirty = Some(i);
                    break;
                }
            }
            let Some(i) = dirty else { break };
            let a = red.m.at(i, t);
            let p = red.m.at(t, t);
            if a < p {
                // euclid on integer lifts: smaller lift becomes the pivot
                red.swap_rows(t, i);
                continue;
            }
            let q = a / p;
            red.add_mul_row(i, t, (n - q % n) % n);
            // entry is now a - q*p (< p as integer lift); swap if nonzero
            let r = red.m.at(i, t);
            if r != 0 {
                red.swap_rows(t, i);
            }
        }
        let mut col_dirty = false;
        loop {
            let mut dirty = None;
            for j in (t + 1)..red.m.cols() {
                if red.m.at(t, j) != 0 {
                    dirty = Some(j);
                    break;
                }
            }
            let Some(j) = dirty else { break };
            let a = red.m.at(t, j);
            let p = red.m.at(t, t);
            if a < p {
                red.swap_cols(t, j);
                col_dirty = true;
                continue;
            }
            let q = a / p;
            red.add_mul_col(j, t, (n - q % n) % n);
            if red.m.at(t, j) != 0 {
                red.swap_cols(t, j);
                col_dirty = true;
            }
        }
        if !col_dirty || (t + 1..red.m.rows()).all(|i| red.m.at(i, t) == 0) {
            break;
        }
    }
}

/// Generating set (columns) of `{x mod n : A x ≡ 0 (mod n)}`.
pub fn zn_kernel_gens(a: &ZnMat) -> ZnMat {
    let n = a.n;
    let snf = zn_smith(a);
    let mut cols = Vec::new();
    for j in 0..a.cols {
        let g = if j < snf.diag.len() { gcd_size(snf.diag[j], n) } else { n };
        if g == 1 {
            // only the zero solution from this coordinate
            continue;
        }
        let scale = n / g; // in [1, n/2] since g > 1
        let mut c = snf.right.col(j);
        for v in c.iter_mut() {
            *v = mul_mod(*v, scale, n);
        }
        cols.push(c);
    }
    ZnMat::from_cols(n, a.cols, &cols)
}

/// One solution of `A x ≡ b (mod n)`, if any.
pub fn zn_solve(a: &ZnMat, b: &[u64]) -> Option<Vec<u64>> {
    let snf = zn_smith(a);
    let y = snf.left.mul_vec(b);
    let mut w = vec![0u64; a.cols];
    for i in 0..a.rows {
        let d = if i < snf.diag.len() { snf.diag[i] } else { 0 };
        if d == 0 {
            if y[i] != 0 {
                return None;
            }
        } else {
            // d divides n; solvable iff d | y_i
            if y[i] % d != 0 {
                return None;
            }
            w[i] = y[i] / d;
        }
    }
    Some(snf.right.mul_vec(&w))
}

/// Canonical coordinates of `(Z/n)^ambient / colspan(rel)`.
pub struct ZnCanon {
    pub moduli: Vec<u64>,
    pub to_canon: ZnMat,
    pub from_canon: ZnMat,
}

pub fn zn_canonicalize(ambient: usize, rel: &ZnMat) -> ZnCanon {
    let n = rel.n;
    let snf = zn_smith(rel);
    let mut kept = Vec::new();
    for i in 0..ambient {
        let d = if i < snf.diag.len() { snf.diag[i] } else { 0 };
        let g = gcd_size(d, n);
        if g != 1 {
            kept.push((i, g));
        }
    }
    let to_canon = ZnMat::from_fn(n, kept.len(), ambient, |r, j| snf.left.at(kept[r].0, j) % kept[r].1);
    let from_canon = ZnMat::from_fn(n, ambient, kept.len(), |i, c| snf.left_inv.at(i, kept[c].0));
    ZnCanon { moduli: kept.into_iter().map(|(_, g)| g).collect(), to_canon, from_canon }
}

/// Homology `ker(g)/im(f)` of `A --f--> B --g--> C` where the groups are
/// `⊕ Z/d` with all `d | n`, given coordinate moduli per group.
pub struct ZnHomology {
    pub moduli: Vec<u64>,
    /// Representative cocycles, columns in the coordinates of B.
    pub class_gens: ZnMat,
    ker_gens: ZnMat,
    canon: ZnCanon,
}

impl ZnHomology {
    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    pub fn class_of(&self, v: &[u64]) -> Option<Vec<u64>> {
        let z = zn_solve(&self.ker_gens, v)?;
        let mut c = self.canon.to_canon.mul_vec(&z);
        for (x, m) in c.iter_mut().zip(&self.canon.moduli) {
            *x %= m;
        }
        Some(c)
    }

    pub fn is_boundary(&self, v: &[u64]) -> Option<bool> {
        self.class_of(v).map(|c| c.iter().all(|&x| x == 0))
    }
}

fn zn_diag_cols(n: u64, moduli: &[u64]) -> ZnMat {
    let cols: Vec<Vec<u64>> = moduli
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let mut c = vec![0u64; moduli.len()];
            c[i] = m % n;
            c
        })
        .collect();
    ZnMat::from_cols(n, moduli.len(), &cols)
}

pub fn zn_homology(
    mod_b: &[u64],
    mod_c: &[u64],
    f: &ZnMat, // |B| x |A|
    g: &ZnMat, // |C| x |B|
) -> ZnHomology {
    let n = f.n;
    assert_eq!(g.n, n);
    assert_eq!(f.rows(), mod_b.len());
    assert_eq!(g.rows(), mod_c.len());
    assert_eq!(g.cols(), mod_b.len());
    // lifts of ker(B -> C): x with g x in colspan(diag(mod_c))
    let aug = g.hstack(&zn_diag_cols(n, mod_c));
    let null = zn_kernel_gens(&aug);
    let ker_gens = ZnMat::from_fn(n, mod_b.len(), null.cols(), |i, j| null.at(i, j));
    // relations: columns of f and the coordinate moduli of B, in kernel coords
    let rel_src = f.hstack(&zn_diag_cols(n, mod_b));
    let mut rel_cols = Vec::with_capacity(rel_src.cols());
    for j in 0..rel_src.cols() {
        let z = zn_solve(&ker_gens, &rel_src.col(j))
            .expect("relations must lie in the kernel (g∘f = 0)");
        rel_cols.push(z);
    }
    // syzygies of the chosen kernel generators
    let syz = zn_kernel_gens(&ker_gens);
    let mut all = rel_cols;
    for j in 0..syz.cols() {
        all.push(syz.col(j));
    }
    let rel = ZnMat::from_cols(n, ker_gens.cols(), &all);
    let canon = zn_canonicalize(ker_gens.cols(), &rel);
    let mut class_gens = ker_gens.mul(&canon.from_canon);
    for i in 0..class_gens.rows() {
        for j in 0..class_gens.cols() {
            let v = class_gens.at(i, j) % mod_b[i].max(1);
            class_gens.set(i, j, v);
        }
    }
    ZnHomology { moduli: canon.moduli.clone(), class_gens, ker_gens, canon }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_mod_n_diagonalizes() {
        let n = 12;
        let a = ZnMat::from_fn(n, 3, 3, |i, j| (3 * i + 5 * j + i * j) as u64);
        let snf = zn_smith(&a);
        let d = snf.left.mul(&a).mul(&snf.right);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(d.at(i, j), 0, "off-diagonal after reduction");
                } else {
                    assert_eq!(d.at(i, i), snf.diag[i]);
                }
            }
        }
        assert_eq!(snf.left.mul(&snf.left_inv), ZnMat::identity(n, 3));
        assert_eq!(snf.right.mul(&snf.right_inv), ZnMat::identity(n, 3));
    }

    #[test]
    fn kernel_and_solve_mod_n() {
        let n = 8;
        let a = ZnMat::from_fn(n, 1, 1, |_, _| 2);
        let k = zn_kernel_gens(&a);
        // kernel of x -> 2x mod 8 is  <4>
        let mut found = false;
        for j in 0..k.cols() {
            if k.at(0, j) == 4 {
                found = true;
            }
        }
        assert!(found, "kernel generator 4 expected, got {k:?}");
        assert_eq!(zn_solve(&a, &[6]).map(|x| (2 * x[0]) % 8), Some(6));
        assert_eq!(zn_solve(&a, &[1]), None);
    }

    #[test]
    fn homology_mod_n() {
        // Z/4 --0--> Z/4 --2--> Z/4: H = ker(2)/0 = Z/2
        let n = 4;
        let f = ZnMat::zero(n, 1, 1);
        let g = ZnMat::from_fn(n, 1, 1, |_, _| 2);
        let h = zn_homology(&[4], &[4], &f, &g);
        assert_eq!(h.moduli, vec![2]);
        let rep = h.class_gens.col(0);
        assert_eq!(h.is_boundary(&rep), Some(false));
    }

    #[test]
    fn agreement_with_bigint_smith_on_random_small() {
        use crate::exact::int_mat::IntMat;
        use num_bigint::BigInt;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2u64, 3, 4, 8, 9, 12] {
            for _ in 0..20 {
                let rows = rng.gen_range(1..=4);
                let cols = rng.gen_range(1..=4);
                let entries: Vec<u64> =
                    (0..rows * cols).map(|_| rng.gen_range(0..n)).collect();
                let a = ZnMat::from_fn(n, rows, cols, |i, j| entries[i * cols + j]);
                // compare module invariants of (Z/n)^rows / colspan with BigInt route
                let ints = IntMat::from_fn(rows, cols, |i, j| BigInt::from(a.at(i, j)));
                let n_cols = IntMat::diagonal(&vec![BigInt::from(n); rows]);
                let big_inv = crate::exact::smith::cokernel_invariants(&ints.hstack(&n_cols));
                let zn_inv = {
                    let canon = zn_canonicalize(rows, &a);
                    let mut v: Vec<u64> = canon.moduli.clone();
                    v.retain(|&x| x != 1);
                    v.sort();
                    v
                };
                let mut big_sorted: Vec<u64> = big_inv
                    .iter()
                    .map(|d| u64::try_from(d).expect("small"))
                    .collect();
                big_sorted.sort();
                assert_eq!(zn_inv, big_sorted, "mod {n} invariants disagree on {a:?}");
            }
        }
    }
}
