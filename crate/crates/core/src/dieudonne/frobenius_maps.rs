use super::twisted::{twisted_mul, TwistedPoly};
use crate::error::{Error, Result};
use crate::exact::gf::{FiniteFieldMatrix, Gf};

/// Result of a truncated cokernel computation on k[F]. The reported
/// dimensions come with the truncation degree and a stabilization flag
/// (the same dimension at N and N+1), the desk-scale certificate that the
/// value does not depend on the truncation.
pub struct FrobeniusCokernel {
    pub field: Gf,
    pub truncation: usize,
    /// Dimension of the cokernel over the prime field.
    pub fp_dimension: usize,
    /// Dimension over k (fp_dimension / [k : F_p]).
    pub k_dimension: usize,
    pub stable: bool,
    /// A representative of a generating cokernel class.
    pub representative: TwistedPoly,
}

/// The F_p-matrix of x -> F x - x from polynomials of F-degree < n to
/// degree <= n, in digit coordinates.
fn f_minus_id_matrix(field: &Gf, n: usize) -> FiniteFieldMatrix {
    let p = field.p();
    let d = field.degree() as usize;
    let fp = Gf::new(p, 1).expect("prime field");
    // frobenius as an F_p-matrix on digit coordinates of k
    let frob = |col: usize| field.digits(field.frobenius(field.pow(field.generator(), col as u128)));
    let mut frob_mat = vec![vec![0u64; d]; d];
    for c in 0..d {
        let img = if c == 0 { field.digits(field.frobenius(1)) } else { frob(c) };
        for r in 0..d {
            frob_mat[r][c] = img[r];
        }
    }
    FiniteFieldMatrix::from_fn(fp, (n + 1) * d, n * d, |row, col| {
        let (i, t) = (col / d, col % d);
        let (j, s) = (row / d, row % d);
        let mut v = 0u64;
        if j == i + 1 {
            // frobenius block from the F-shift
            v = (v + frob_mat[s][t]) % p;
        }
        if j == i && s == t {
            // minus identity
            v = (v + p - 1) % p;
        }
        v
    })
}

fn rank_of(m: &FiniteFieldMatrix) -> usize {
    m.rank()
}

fn coker_f_minus_id_at(field: &Gf, n: usize) -> usize {
    let d = field.degree() as usize;
    let mat = f_minus_id_matrix(field, n);
    (n + 1) * d - rank_of(&mat)
}

/// Cokernel of F_* - id on the truncated twisted polynomial ring: the
/// computational core of the degree-two extension group over the radicial
/// quotient. Returns the exact F_p and k dimensions plus the additive
/// section phi(sum t_i F^i) = sum t_i^{p^-i}.
pub fn coker_f_minus_id(field: &Gf, truncation: usize) -> Result<FrobeniusCokernel> {
    if truncation < 2 {
        return Err(Error::Invalid("truncation must be at least 2".into()));
    }
    let d = field.degree() as usize;
    let dim = coker_f_minus_id_at(field, truncation);
    let next = coker_f_minus_id_at(field, truncation + 1);
    let k_dimension = dim / d;
    if dim % d != 0 {
        return Err(Error::Invalid("cokernel is not a k-subspace".into()));
    }
    Ok(FrobeniusCokernel {
        field: field.clone(),
        truncation,
        fp_dimension: dim,
        k_dimension,
        stable: dim == next,
        representative: TwistedPoly::one(field.clone()),
    })
}

/// The vanishing section: phi(sum t_i F^i) = sum t_i^{p^{-i}}. Kills the
/// image of F_* - id by the telescoping identity and is onto k.
pub fn section_phi(field: &Gf, x: &TwistedPoly) -> u64 {
    let mut acc = 0u64;
    for (i, &c) in x.coeffs().iter().enumerate() {
        let mut v = c;
        for _ in 0..i {
            v = field.frobenius_inv(v);
        }
        acc = field.add(acc, v);
    }
    acc
}

/// F_p-rank of the section as a linear functional on degree <= n
/// polynomials (used to certify ker phi has codimension exactly d).
pub fn section_rank(field: &Gf, n: usize) -> usize {
    let p = field.p();
    let d = field.degree() as usize;
    let fp = Gf::new(p, 1).expect("prime field");
    // rows: digits of phi value; cols: digit coordinates of the input
    let mat = FiniteFieldMatrix::from_fn(fp, d, (n + 1) * d, |r, col| {
        let (i, t) = (col / d, col % d);
        let basis_elem = field.pow(field.generator(), t as u128);
        let mono = TwistedPoly::monomial(field.clone(), basis_elem, i);
        field.digits(section_phi(field, &mono))[r]
    });
    rank_of(&mat)
}

fn coker_f_at(field: &Gf, n: usize) -> usize {
    let p = field.p();
    let d = field.degree() as usize;
    let fp = Gf::new(p, 1).expect("prime field");
    let mut frob_mat = vec![vec![0u64; d]; d];
    for c in 0..d {
        let img = field.digits(field.frobenius(field.pow(field.generator(), c as u128)));
        for r in 0..d {
            frob_mat[r][c] = img[r];
        }
    }
    // x -> F x from degree < n to degree <= n
    let mat = FiniteFieldMatrix::from_fn(fp, (n + 1) * d, n * d, |row, col| {
        let (i, t) = (col / d, col % d);
        let (j, s) = (row / d, row % d);
        if j == i + 1 {
            frob_mat[s][t]
        } else {
            0
        }
    });
    (n + 1) * d - rank_of(&mat)
}

/// Cokernel of F_* on the truncated ring: the constants survive, so the
/// dimension is [k : F_p] over the prime field and 1 over k.
pub fn coker_f(field: &Gf, truncation: usize) -> Result<FrobeniusCokernel> {
    if truncation < 1 {
        return Err(Error::Invalid("truncation must be at least 1".into()));
    }
    let d = field.degree() as usize;
    let dim = coker_f_at(field, truncation);
    let next = coker_f_at(field, truncation + 1);
    if dim % d != 0 {
        return Err(Error::Invalid("cokernel is not a k-subspace".into()));
    }
    Ok(FrobeniusCokernel {
        field: field.clone(),
        truncation,
        fp_dimension: dim,
        k_dimension: dim / d,
        stable: dim == next,
        representative: TwistedPoly::one(field.clone()),
    })
}

/// Freeness certificate at desk scale: left multiplication by F^n on the
/// truncated ring is injective.
pub fn injectivity_probe_f_pushforward(field: &Gf, n_power: usize, truncation: usize) -> Result<bool> {
    if n_power < 1 {
        return Err(Error::Invalid("the power must be at least 1".into()));
    }
    let p = field.p();
    let d = field.degree() as usize;
    let fp = Gf::new(p, 1).expect("prime field");
    // the F_p-matrix of x -> F^n x on digit coordinates, degree <= truncation
    let dim_in = (truncation + 1) * d;
    let dim_out = (truncation + n_power + 1) * d;
    let fnm = TwistedPoly::monomial(field.clone(), 1, n_power);
    let mat = FiniteFieldMatrix::from_fn(fp, dim_out, dim_in, |row, col| {
        let (i, t) = (col / d, col % d);
        let basis_elem = field.pow(field.generator(), t as u128);
        let mono = TwistedPoly::monomial(field.clone(), basis_elem, i);
        let image = twisted_mul(&fnm, &mono).expect("same field");
        let (j, s) = (row / d, row % d);
        field.digits(image.coeff(j))[s]
    });
    Ok(rank_of(&mat) == dim_in)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn coker_f_minus_id_examples() {
        let f2 = Gf::new(2, 1).unwrap();
        let c = coker_f_minus_id(&f2, 8).unwrap();
        assert_eq!(c.fp_dimension, 1);
        assert_eq!(c.k_dimension, 1);
        assert!(c.stable);

        let f4 = Gf::new(2, 2).unwrap();
        let c = coker_f_minus_id(&f4, 8).unwrap();
        assert_eq!(c.fp_dimension, 2);
        assert_eq!(c.k_dimension, 1);
        assert!(c.stable);
    }

    #[test]
    fn section_kills_the_image() {
        // phi(F x - x) = 0 by telescoping, on 50 random polynomials per field
        for (p, d) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let field = Gf::new(p, d).unwrap();
            let f = TwistedPoly::monomial(field.clone(), 1, 1);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42 + p + d as u64);
            for _ in 0..50 {
                let deg = rng.gen_range(0..8usize);
                let coeffs: Vec<u64> =
                    (0..=deg).map(|_| rng.gen_range(0..field.size())).collect();
                let x = TwistedPoly::new(field.clone(), coeffs);
                let fx = twisted_mul(&f, &x).unwrap();
                let fx_minus_x = fx.sub(&x).unwrap();
                assert_eq!(section_phi(&field, &fx_minus_x), 0);
            }
            // phi is onto k: phi(c) = c on constants
            for c in field.elements() {
                let poly = TwistedPoly::constant(field.clone(), c);
                assert_eq!(section_phi(&field, &poly), c);
            }
            // ker phi has F_p-codimension exactly d among degree <= N polys
            assert_eq!(section_rank(&field, 8), d as usize);
        }
    }

    #[test]
    fn coker_f_examples() {
        let f2 = Gf::new(2, 1).unwrap();
        let c = coker_f(&f2, 8).unwrap();
        assert_eq!(c.k_dimension, 1);
        let f9 = Gf::new(3, 2).unwrap();
        let c = coker_f(&f9, 4).unwrap();
        assert_eq!(c.fp_dimension, 2);
        assert_eq!(c.k_dimension, 1);
        // the representative is the constant 1: not a multiple of F
        assert_eq!(c.representative.coeff(0), 1);
    }

    #[test]
    fn stabilization_across_truncations() {
        for (p, d) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let field = Gf::new(p, d).unwrap();
            for n in 2..=32 {
                let c = coker_f_minus_id(&field, n).unwrap();
                assert_eq!(c.k_dimension, 1, "N = {n} over F_{}^{}", p, d);
                assert!(c.stable);
            }
        }
    }

    #[test]
    fn injectivity_probe() {
        let f2 = Gf::new(2, 1).unwrap();
        assert!(injectivity_probe_f_pushforward(&f2, 1, 8).unwrap());
        let f4 = Gf::new(2, 2).unwrap();
        assert!(injectivity_probe_f_pushforward(&f4, 3, 8).unwrap());
    }
}
