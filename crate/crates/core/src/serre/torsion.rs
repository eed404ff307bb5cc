use super::predicate::{s_part, simple_quotients, SerrePredicate, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::modcat::morphism::{cokernel, kernel, submodule_generated, Morphism};
use crate::modcat::module::PresentedModule;
use num_bigint::BigInt;
use num_traits::One;

/// The torsion pair of X with respect to a Serre subcategory B: the exact
/// sequence 0 -> X^B -> X -> X_B -> 0 with X_B in B and X^B admitting no
/// nonzero quotient in B.
pub struct TorsionPairResult {
    /// X^B
    pub sub: PresentedModule,
    /// X_B
    pub quotient: PresentedModule,
    pub inclusion: Morphism,
    pub projection: Morphism,
    /// Human-readable certificate that the sub has no nonzero B-quotient.
    pub certificate: String,
}

/// The exponent of the underlying group (the last invariant factor).
pub fn exponent(x: &PresentedModule) -> BigInt {
    x.moduli().last().cloned().unwrap_or_else(BigInt::one)
}

pub fn torsion_pair(x: &PresentedModule, b: &SerrePredicate) -> Result<TorsionPairResult> {
    let (sub, inclusion, certificate) = match b {
        SerrePredicate::STorsion { primes } => {
            // X^B is the S'-primary part: the kernel of the S'-part of the
            // exponent acting on X
            let exp = exponent(x);
            let m = &exp / s_part(&exp, primes);
            let f = Morphism::mul_by_int(x, i64::try_from(&m).expect("desk scale"));
            let (sub, inclusion) = kernel(&f)?;
            let cert = format!(
                "order {} of the sub is coprime to S, so every map to an S-torsion object is zero",
                sub.order()
            );
            (sub, inclusion, cert)
        }
        SerrePredicate::EtaleLike => {
            if x.ring().characteristic() == 0 {
                // B is everything: X_B = X, X^B = 0
                let zero = trivial_submodule(x)?;
                let cert = "sub is the zero object".to_string();
                (zero.0, zero.1, cert)
            } else {
                // B is only the zero object: X^B = X
                let cert = "B contains only the zero object".to_string();
                (x.clone(), Morphism::identity(x), cert)
            }
        }
        SerrePredicate::Span { .. } => {
            // descend: repeatedly pass to the kernel of a simple quotient in B
            if x.order() > BigInt::from(ENUMERATION_CAP) {
                return Err(Error::SearchExhausted(format!(
                    "torsion pair search needs order <= {ENUMERATION_CAP}, got {}",
                    x.order()
                )));
            }
            let mut sub = x.clone();
            let mut inclusion = Morphism::identity(x);
            loop {
                let quots = simple_quotients(&sub)?;
                let mut found = None;
                for q in quots {
                    if b.contains(q.target())? {
                        found = Some(q);
                        break;
                    }
                }
                let Some(q) = found else { break };
                let (smaller, incl) = kernel(&q)?;
                inclusion = inclusion.compose(&incl);
                sub = smaller;
            }
            let cert =
                "no simple quotient of the sub lies in B (exhaustive search)".to_string();
            (sub, inclusion, cert)
        }
    };
    let (quotient, projection) = cokernel(&inclusion)?;
    // audit: the quotient must be in B, the orders must multiply up, and
    // the sub must have no nonzero B-quotient
    if !b.contains(&quotient)? {
        return Err(Error::Invalid(format!(
            "torsion pair audit failed: quotient not in {}",
            b.name()
        )));
    }
    if sub.order() * quotient.order() != x.order() {
        return Err(Error::Invalid("torsion pair order bookkeeping failed".into()));
    }
    if !matches!(b, SerrePredicate::STorsion { .. }) && !sub.is_zero_object() {
        // exhaustive certificate via simple quotients (cheap at desk scale)
        if sub.order() <= BigInt::from(ENUMERATION_CAP) {
            for q in simple_quotients(&sub)? {
                if b.contains(q.target())? {
                    return Err(Error::Invalid(
                        "torsion pair audit failed: sub has a B-quotient".into(),
                    ));
                }
            }
        }
    }
    Ok(TorsionPairResult { sub, quotient, inclusion, projection, certificate })
}

fn trivial_submodule(x: &PresentedModule) -> Result<(PresentedModule, Morphism)> {
    submodule_generated(x, &[])
}

/// The largest B-subobject t_B(Y): the sum of all cyclic B-subobjects.
pub fn largest_b_subobject(
    y: &PresentedModule,
    b: &SerrePredicate,
) -> Result<(PresentedModule, Morphism)> {
    match b {
        SerrePredicate::STorsion { primes } => {
            // the S-primary part: kernel of the S-part of the exponent
            let exp = exponent(y);
            let s = s_part(&exp, primes);
            let f = Morphism::mul_by_int(y, i64::try_from(&s).expect("desk scale"));
            kernel(&f)
        }
        SerrePredicate::EtaleLike => {
            if y.ring().characteristic() == 0 {
                Ok((y.clone(), Morphism::identity(y)))
            } else {
                trivial_submodule(y)
            }
        }
        SerrePredicate::Span { .. } => {
            if y.order() > BigInt::from(ENUMERATION_CAP) {
                return Err(Error::SearchExhausted(format!(
                    "cyclic subobject enumeration needs order <= {ENUMERATION_CAP}, got {}",
                    y.order()
                )));
            }
            let mut gens = Vec::new();
            for v in y.elements(ENUMERATION_CAP)? {
                let (cyclic, _) = submodule_generated(y, std::slice::from_ref(&v))?;
                if b.contains(&cyclic)? {
                    gens.push(v);
                }
            }
            submodule_generated(y, &gens)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gf::{FiniteFieldMatrix, Gf};
    use crate::modcat::module::{make_finab, make_quiver_rep};
    use crate::modcat::ring::BaseRing;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn z12_splits_at_two() {
        let z12 = make_finab(&[12]).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let pair = torsion_pair(&z12, &b).unwrap();
        assert_eq!(pair.sub.moduli(), &[big(3)]);
        assert_eq!(pair.quotient.moduli(), &[big(4)]);
    }

    #[test]
    fn member_has_trivial_sub() {
        let z8 = make_finab(&[8]).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let pair = torsion_pair(&z8, &b).unwrap();
        assert!(pair.sub.is_zero_object());
        assert_eq!(pair.quotient.moduli(), &[big(8)]);
    }

    #[test]
    fn idempotence() {
        let x = make_finab(&[36]).unwrap();
        let b = SerrePredicate::s_torsion(&[3]);
        let pair = torsion_pair(&x, &b).unwrap();
        // torsion_pair(X_B) has trivial sub; torsion_pair(X^B) has trivial quotient
        let again = torsion_pair(&pair.quotient, &b).unwrap();
        assert!(again.sub.is_zero_object());
        let again = torsion_pair(&pair.sub, &b).unwrap();
        assert!(again.quotient.is_zero_object());
    }

    #[test]
    fn quiver_p1_has_no_s2_quotient() {
        let field = Gf::new(2, 1).unwrap();
        let ring = BaseRing::path_algebra_a2(field.clone()).unwrap();
        let s2 = make_quiver_rep(&ring, 0, 1, &FiniteFieldMatrix::zero(field.clone(), 1, 0)).unwrap();
        let p1 = make_quiver_rep(&ring, 1, 1, &FiniteFieldMatrix::identity(field.clone(), 1)).unwrap();
        let b = SerrePredicate::span(vec![s2.clone()]);
        let pair = torsion_pair(&p1, &b).unwrap();
        assert!(pair.quotient.is_zero_object(), "P1 has no nonzero quotient in <S2>");
        assert_eq!(pair.sub.order(), p1.order());
        // but S1 ⊕ S2 has quotient S2
        let s1 = make_quiver_rep(&ring, 1, 0, &FiniteFieldMatrix::zero(field.clone(), 0, 1)).unwrap();
        let (sum, _, _) = crate::modcat::morphism::direct_sum(&s1, &s2).unwrap();
        let pair = torsion_pair(&sum, &b).unwrap();
        assert_eq!(pair.quotient.order(), big(2));
        assert_eq!(pair.sub.order(), big(2));
    }

    #[test]
    fn largest_subobject_of_z12() {
        let z12 = make_finab(&[12]).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let (t, _) = largest_b_subobject(&z12, &b).unwrap();
        assert_eq!(t.moduli(), &[big(4)]);
    }
}
