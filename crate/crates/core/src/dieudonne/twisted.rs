use crate::error::{Error, Result};
use crate::exact::gf::Gf;

/// An element of the twisted polynomial ring k[F] with F a = a^p F:
/// coefficients in k per power of F, constant term first.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedPoly {
    pub field: Gf,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for TwistedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·F"),
                _ => format!("{c}·F^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl TwistedPoly {
    pub fn new(field: Gf, mut coeffs: Vec<u64>) -> TwistedPoly {
        let q = field.size();
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        TwistedPoly { field, coeffs }
    }

    pub fn zero(field: Gf) -> TwistedPoly {
        TwistedPoly { field, coeffs: vec![] }
    }

    pub fn one(field: Gf) -> TwistedPoly {
        TwistedPoly::new(field, vec![1])
    }

    pub fn constant(field: Gf, c: u64) -> TwistedPoly {
        TwistedPoly::new(field, vec![c])
    }

    /// c * F^i
    pub fn monomial(field: Gf, c: u64, i: usize) -> TwistedPoly {
        let mut coeffs = vec![0; i + 1];
        coeffs[i] = c;
        TwistedPoly::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TwistedPoly) -> Result<TwistedPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs =
            (0..len).map(|i| self.field.add(self.coeff(i), other.coeff(i))).collect();
        Ok(TwistedPoly::new(self.field.clone(), coeffs))
    }

    pub fn neg(&self) -> TwistedPoly {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        TwistedPoly::new(self.field.clone(), coeffs)
    }

    pub fn sub(&self, other: &TwistedPoly) -> Result<TwistedPoly> {
        self.add(&other.neg())
    }
}

/// Product under the twisted relation: (a F^i)(b F^j) = a b^{p^i} F^{i+j}.
pub fn twisted_mul(x: &TwistedPoly, y: &TwistedPoly) -> Result<TwistedPoly> {
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    let field = &x.field;
    if x.is_zero() || y.is_zero() {
        return Ok(TwistedPoly::zero(field.clone()));
    }
    let mut coeffs = vec![0u64; x.coeffs.len() + y.coeffs.len() - 1];
    for (i, &a) in x.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.coeffs.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let mut tw = b;
            for _ in 0..i {
                tw = field.frobenius(tw);
            }
            coeffs[i + j] = field.add(coeffs[i + j], field.mul(a, tw));
        }
    }
    Ok(TwistedPoly::new(field.clone(), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_poly(field: &Gf, rng: &mut impl Rng, max_deg: usize) -> TwistedPoly {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs = (0..=deg).map(|_| rng.gen_range(0..field.size())).collect();
        TwistedPoly::new(field.clone(), coeffs)
    }

    #[test]
    fn prime_field_twist_is_trivial() {
        // over F_2, a^2 = a, so F commutes with constants
        let f2 = Gf::new(2, 1).unwrap();
        let f = TwistedPoly::monomial(f2.clone(), 1, 1);
        let a = TwistedPoly::constant(f2.clone(), 1);
        let fa = twisted_mul(&f, &a).unwrap();
        let af = twisted_mul(&a, &f).unwrap();
        assert_eq!(fa, af);
    }

    #[test]
    fn f4_twist_is_nontrivial() {
        let f4 = Gf::new(2, 2).unwrap();
        let g = f4.generator();
        let f = TwistedPoly::monomial(f4.clone(), 1, 1);
        let a = TwistedPoly::constant(f4.clone(), g);
        // F g = g^2 F and g^2 != g
        let fg = twisted_mul(&f, &a).unwrap();
        assert_eq!(fg.coeff(1), f4.mul(g, g));
        assert_ne!(f4.mul(g, g), g);
    }

    #[test]
    fn unit_law() {
        let f9 = Gf::new(3, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = random_poly(&f9, &mut rng, 5);
            let one = TwistedPoly::one(f9.clone());
            assert_eq!(twisted_mul(&x, &one).unwrap(), x);
            assert_eq!(twisted_mul(&one, &x).unwrap(), x);
        }
    }

    #[test]
    fn ring_laws_on_random_triples() {
        for (p, d) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let field = Gf::new(p, d).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p * 10 + d as u64);
            for _ in 0..200 {
                let x = random_poly(&field, &mut rng, 4);
                let y = random_poly(&field, &mut rng, 4);
                let z = random_poly(&field, &mut rng, 4);
                // associativity
                let lhs = twisted_mul(&twisted_mul(&x, &y).unwrap(), &z).unwrap();
                let rhs = twisted_mul(&x, &twisted_mul(&y, &z).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "associativity over F_{}^{}", p, d);
                // distributivity
                let lhs = twisted_mul(&x, &y.add(&z).unwrap()).unwrap();
                let rhs =
                    twisted_mul(&x, &y).unwrap().add(&twisted_mul(&x, &z).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "distributivity over F_{}^{}", p, d);
            }
        }
    }

    #[test]
    fn field_mismatch_rejected() {
        let f2 = Gf::new(2, 1).unwrap();
        let f4 = Gf::new(2, 2).unwrap();
        let x = TwistedPoly::one(f2);
        let y = TwistedPoly::one(f4);
        assert!(matches!(twisted_mul(&x, &y), Err(Error::FieldMismatch)));
    }
}
