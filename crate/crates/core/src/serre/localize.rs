use super::predicate::s_part;
use crate::error::{Error, Result};
use crate::modcat::ext::{ext_group, ExtGroup};
use crate::modcat::hom::hom_group;
use crate::modcat::morphism::Morphism;
use crate::modcat::module::PresentedModule;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeSet;

/// A localized group: S-inverted, which on finite groups is exactly the
/// S'-primary component. Generators are carried along explicitly.
pub struct LocalizedHom {
    pub invariants: Vec<BigInt>,
    pub generators: Vec<Morphism>,
}

impl LocalizedHom {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }
}

/// Split an invariant-factor list into its S'-components, with the scale
/// factor embedding each component into the original cyclic summand.
pub(crate) fn s_prime_parts(invariants: &[BigInt], primes: &BTreeSet<u64>) -> Vec<(usize, BigInt, BigInt)> {
    let mut out = Vec::new();
    for (idx, d) in invariants.iter().enumerate() {
        let s = s_part(d, primes);
        let rest = d / &s;
        if !rest.is_one() {
            out.push((idx, rest, s));
        }
    }
    out
}

/// S^{-1} Hom(X, Y): the S'-primary component of the hom group, together
/// with generators (the S-part multiples of the hom-group basis).
pub fn localized_hom(
    x: &PresentedModule,
    y: &PresentedModule,
    primes: &BTreeSet<u64>,
) -> Result<LocalizedHom> {
    let hom = hom_group(x, y)?;
    let parts = s_prime_parts(&hom.invariants, primes);
    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    for (idx, rest, scale) in parts {
        invariants.push(rest);
        generators.push(hom.basis[idx].scale(&scale));
    }
    Ok(LocalizedHom { invariants, generators })
}

/// S^{-1} Ext^i(X, Y): the S'-primary component of the Ext group, reported
/// as Ext^i of the quotient category A/A_S.
pub struct LocalizedExt {
    pub degree: usize,
    pub invariants: Vec<BigInt>,
    /// Representative cocycles (S-part multiples of the Ext basis).
    pub cocycles: Vec<crate::exact::int_mat::IntMat>,
}

impl LocalizedExt {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }
}

pub fn localized_ext(
    i: usize,
    x: &PresentedModule,
    y: &PresentedModule,
    primes: &BTreeSet<u64>,
) -> Result<LocalizedExt> {
    let ext = ext_group(i, x, y)?;
    Ok(localize_ext_group(&ext, primes))
}

pub fn localize_ext_group(ext: &ExtGroup, primes: &BTreeSet<u64>) -> LocalizedExt {
    let parts = s_prime_parts(&ext.invariants, primes);
    let mut invariants = Vec::new();
    let mut cocycles = Vec::new();
    for (idx, rest, scale) in parts {
        invariants.push(rest);
        let m = &ext.cocycles[idx];
        cocycles.push(crate::exact::int_mat::IntMat::from_fn(m.rows(), m.cols(), |r, c| {
            &scale * m.at(r, c)
        }));
    }
    LocalizedExt { degree: ext.degree, invariants, cocycles }
}

/// The natural map Hom(X,Y) -> q_hom(X,Y) restricted to the S'-component:
/// check it is an isomorphism matching generators. Returns the matched
/// generator images on success.
pub fn localization_soundness(
    x: &PresentedModule,
    y: &PresentedModule,
    primes: &BTreeSet<u64>,
) -> Result<Vec<Morphism>> {
    let b = super::predicate::SerrePredicate::STorsion { primes: primes.clone() };
    let qh = super::qcat::q_hom(x, y, &b)?;
    let loc = localized_hom(x, y, primes)?;
    if qh.order() != loc.order() {
        return Err(Error::Invalid(format!(
            "|q_hom| = {} but |S'-part of hom| = {}",
            qh.order(),
            loc.order()
        )));
    }
    // natural map: compose with the projection Y -> Y/Y'_max, then express
    // in the canonical coordinates of hom(X, Y/Y'_max)
    let proj = &qh.basis.first().map(|q| q.quotient_projection.clone());
    let mut images = Vec::new();
    let mut image_coords = Vec::new();
    for g in &loc.generators {
        let pushed = match proj {
            Some(p) => p.compose(g),
            None => return Ok(Vec::new()),
        };
        let coords = qh.plain.coords_of(&pushed)?;
        image_coords.push(coords);
        images.push(pushed);
    }
    // the images must generate a subgroup of full order: compare the
    // subgroup they span with the whole group by order
    if !loc.invariants.is_empty() {
        let mat = crate::exact::int_mat::IntMat::from_cols(
            qh.invariants.len(),
            &image_coords,
        );
        let f = crate::exact::subquot::FinMap::new(
            loc.invariants.clone(),
            qh.invariants.clone(),
            mat,
        );
        let im = crate::exact::subquot::image(&f)?;
        let im_order: BigInt = im.moduli().iter().product();
        if im_order != qh.order() {
            return Err(Error::Invalid(
                "localized generators do not generate the quotient hom group".into(),
            ));
        }
        // and the map is injective since the orders match
        let ker = crate::exact::subquot::kernel(&f)?;
        let ker_order: BigInt = ker.moduli().iter().product();
        if !ker_order.is_one() {
            return Err(Error::Invalid("natural map has a kernel on the S'-part".into()));
        }
    }
    Ok(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::module::make_finab;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn primes(list: &[u64]) -> BTreeSet<u64> {
        list.iter().copied().collect()
    }

    #[test]
    fn localized_hom_examples() {
        // hom(Z/4, Z/4) = Z/4 localized at {2} dies
        let z4 = make_finab(&[4]).unwrap();
        let l = localized_hom(&z4, &z4, &primes(&[2])).unwrap();
        assert!(l.invariants.is_empty());
        // hom(Z/6, Z/6) = Z/6 localized at {2} leaves Z/3
        let z6 = make_finab(&[6]).unwrap();
        let l = localized_hom(&z6, &z6, &primes(&[2])).unwrap();
        assert_eq!(l.invariants, vec![big(3)]);
        // S empty: nothing inverted
        let l = localized_hom(&z6, &z6, &primes(&[])).unwrap();
        assert_eq!(l.invariants, vec![big(6)]);
    }

    #[test]
    fn localized_ext_examples() {
        let z2 = make_finab(&[2]).unwrap();
        let l = localized_ext(1, &z2, &z2, &primes(&[2])).unwrap();
        assert!(l.is_trivial());
        let z3 = make_finab(&[3]).unwrap();
        let l = localized_ext(1, &z3, &z3, &primes(&[2])).unwrap();
        assert_eq!(l.invariants, vec![big(3)]);
        let z6 = make_finab(&[6]).unwrap();
        let l = localized_ext(1, &z6, &z6, &primes(&[2])).unwrap();
        assert_eq!(l.invariants, vec![big(3)]);
    }

    #[test]
    fn soundness_on_samples() {
        for xm in [&[6][..], &[12], &[4], &[9], &[2, 4]] {
            for ym in [&[6][..], &[12], &[3]] {
                let x = make_finab(xm).unwrap();
                let y = make_finab(ym).unwrap();
                localization_soundness(&x, &y, &primes(&[2])).unwrap();
                localization_soundness(&x, &y, &primes(&[2, 3])).unwrap();
            }
        }
    }
}
