use crate::error::{Error, Result};
use crate::exact::gf::{FiniteFieldMatrix, Gf};

/// A finite-length module over the twisted ring with a nilpotent
/// V-operator: a k-vector space of dimension n with V acting inverse-
/// semilinearly, V(a x) = a^{1/p} V(x). The operator is stored as a matrix
/// A over k with V(x) = A · σ^{-1}(x) (σ the entrywise Frobenius).
pub struct VModule {
    pub field: Gf,
    pub dim: usize,
    pub v_matrix: FiniteFieldMatrix,
}

impl VModule {
    pub fn new(field: Gf, v_matrix: FiniteFieldMatrix) -> Result<VModule> {
        if v_matrix.field != field {
            return Err(Error::FieldMismatch);
        }
        if v_matrix.rows() != v_matrix.cols() {
            return Err(Error::DimMismatch("V must be square".into()));
        }
        let dim = v_matrix.rows();
        let m = VModule { field, dim, v_matrix };
        if !m.is_nilpotent() {
            return Err(Error::Invalid("V must be nilpotent".into()));
        }
        Ok(m)
    }

    /// The F_p-linear matrix of V on digit coordinates.
    pub fn v_fp_matrix(&self) -> FiniteFieldMatrix {
        let p = self.field.p();
        let d = self.field.degree() as usize;
        let fp = Gf::new(p, 1).expect("prime field");
        let n = self.dim;
        FiniteFieldMatrix::from_fn(fp, n * d, n * d, |row, col| {
            let (j, t) = (col / d, col % d);
            // input: g^t in coordinate j; apply sigma^{-1} then the matrix
            let e = self.field.frobenius_inv(self.field.pow(self.field.generator(), t as u128));
            let (i, s) = (row / d, row % d);
            let v = self.field.mul(self.v_matrix.at(i, j), e);
            self.field.digits(v)[s]
        })
    }

    pub fn is_nilpotent(&self) -> bool {
        // iterate the F_p-linear map dim-many times on the standard basis
        let m = self.v_fp_matrix();
        let mut power = m.clone();
        for _ in 1..self.dim.max(1) {
            power = m.mul(&power);
        }
        // power = V^dim must vanish
        (0..power.rows()).all(|i| (0..power.cols()).all(|j| power.at(i, j) == 0))
    }

    /// dim_k ker(V); the kernel is a k-subspace by inverse semilinearity.
    pub fn kernel_k_dim(&self) -> usize {
        let d = self.field.degree() as usize;
        let m = self.v_fp_matrix();
        let fp_dim = m.cols() - m.rank();
        debug_assert_eq!(fp_dim % d, 0, "kernel of a semilinear map is a k-subspace");
        fp_dim / d
    }

    /// dim_k coker(V) = dim_k M/VM.
    pub fn cokernel_k_dim(&self) -> usize {
        let d = self.field.degree() as usize;
        let m = self.v_fp_matrix();
        let fp_dim = m.rows() - m.rank();
        debug_assert_eq!(fp_dim % d, 0, "image of a semilinear map is a k-subspace");
        fp_dim / d
    }
}

/// Extension groups against the structure module of the additive group,
/// computed from the length-one projective resolution of D/DV:
/// degree 0 is ker(V), degree 1 is coker(V), and everything above vanishes.
pub fn ext_d_against_ga(degree: usize, m: &VModule) -> usize {
    match degree {
        0 => m.kernel_k_dim(),
        1 => m.cokernel_k_dim(),
        _ => 0,
    }
}

/// Deterministic random nilpotent V-modules: strictly upper triangular in
/// a random basis.
pub fn random_nilpotent_vmodule(field: &Gf, dim: usize, rng: &mut impl rand::Rng) -> VModule {
    let strictly_upper = FiniteFieldMatrix::from_fn(field.clone(), dim, dim, |i, j| {
        if j > i {
            rng.gen_range(0..field.size())
        } else {
            0
        }
    });
    // conjugate by a random invertible g: the conjugated operator is
    // (g A σ^{-1}(g)^{-1}) σ^{-1}, still nilpotent
    let g = loop {
        let cand = FiniteFieldMatrix::from_fn(field.clone(), dim, dim, |_, _| {
            rng.gen_range(0..field.size())
        });
        if cand.rank() == dim {
            break cand;
        }
    };
    let sigma_inv_g = FiniteFieldMatrix::from_fn(field.clone(), dim, dim, |i, j| {
        field.frobenius_inv(g.at(i, j))
    });
    let inv = invert(&sigma_inv_g);
    let a = g.mul(&strictly_upper).mul(&inv);
    VModule::new(field.clone(), a).expect("conjugate of nilpotent is nilpotent")
}

fn invert(m: &FiniteFieldMatrix) -> FiniteFieldMatrix {
    let n = m.rows();
    let field = m.field.clone();
    let mut aug = FiniteFieldMatrix::from_fn(field.clone(), n, 2 * n, |i, j| {
        if j < n {
            m.at(i, j)
        } else if j - n == i {
            1
        } else {
            0
        }
    });
    let pivots = aug.row_reduce();
    assert_eq!(pivots.len(), n, "matrix must be invertible");
    FiniteFieldMatrix::from_fn(field, n, n, |i, j| aug.at(i, n + j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn jordan_block_dimensions() {
        // V = nilpotent Jordan block on k^2: ker and coker both 1-dim
        let f2 = Gf::new(2, 1).unwrap();
        let mut a = FiniteFieldMatrix::zero(f2.clone(), 2, 2);
        a.set(0, 1, 1);
        let m = VModule::new(f2, a).unwrap();
        assert_eq!(ext_d_against_ga(0, &m), 1);
        assert_eq!(ext_d_against_ga(1, &m), 1);
        assert_eq!(ext_d_against_ga(2, &m), 0);
    }

    #[test]
    fn zero_module() {
        let f2 = Gf::new(2, 1).unwrap();
        let m = VModule::new(f2.clone(), FiniteFieldMatrix::zero(f2, 0, 0)).unwrap();
        for degree in 0..=3 {
            assert_eq!(ext_d_against_ga(degree, &m), 0);
        }
    }

    #[test]
    fn one_dimensional_with_zero_v() {
        let f4 = Gf::new(2, 2).unwrap();
        let m = VModule::new(f4.clone(), FiniteFieldMatrix::zero(f4, 1, 1)).unwrap();
        assert_eq!(ext_d_against_ga(0, &m), 1);
        assert_eq!(ext_d_against_ga(1, &m), 1);
    }

    #[test]
    fn non_nilpotent_rejected() {
        let f2 = Gf::new(2, 1).unwrap();
        let id = FiniteFieldMatrix::identity(f2.clone(), 2);
        assert!(VModule::new(f2, id).is_err());
    }

    #[test]
    fn rank_nullity_on_random_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (p, d) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let field = Gf::new(p, d).unwrap();
            for _ in 0..10 {
                let dim = 1 + (rng.gen_range(0..6usize));
                let m = random_nilpotent_vmodule(&field, dim, &mut rng);
                assert_eq!(
                    ext_d_against_ga(0, &m),
                    ext_d_against_ga(1, &m),
                    "square nilpotent V has dim ker = dim coker"
                );
                for degree in 2..=5 {
                    assert_eq!(ext_d_against_ga(degree, &m), 0);
                }
            }
        }
    }

    use rand::Rng;
}
