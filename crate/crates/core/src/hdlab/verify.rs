use super::estimate::{hd_bounded, HdReport};
use crate::error::{Error, Result};
use crate::modcat::ext::ext_group_cached;
use crate::modcat::module::PresentedModule;
use crate::modcat::resolution::ResolutionCache;
use crate::serre::localize::localize_ext_group;
use crate::serre::predicate::SerrePredicate;
use crate::serre::{check_lifting_property, torsion_pair};
use serde::Serialize;
use std::collections::BTreeSet;

/// Comparison of hd(A) with max(hd(A_S), hd(A/A_S)) on bounded estimates.
#[derive(Serialize)]
pub struct ThmHdReport {
    pub s: Vec<u64>,
    pub degree_bound: usize,
    pub hd_ambient: usize,
    pub hd_torsion: usize,
    pub hd_quotient: usize,
    pub equal: bool,
    #[serde(skip)]
    pub ambient_report: HdReport,
}

/// Verify the max formula on finite abelian groups: both sides of
/// hd(A) = max(hd(A_S), hd(A/A_S)) as bounded estimates over the samples.
pub fn verify_thm_hd(
    samples: &[PresentedModule],
    primes: &BTreeSet<u64>,
    degree_bound: usize,
    seed: u64,
) -> Result<ThmHdReport> {
    let b = SerrePredicate::STorsion { primes: primes.clone() };
    let ambient_report = hd_bounded("ambient", samples, degree_bound, seed)?;
    // torsion side: Ext between the S-primary parts (the torsion
    // subcategory inherits Ext under the lifting property)
    let mut torsion_samples = Vec::new();
    for x in samples {
        let pair = torsion_pair(x, &b)?;
        if !pair.quotient.is_zero_object() {
            torsion_samples.push(pair.quotient);
        }
    }
    let hd_torsion = if torsion_samples.is_empty() {
        0
    } else {
        hd_bounded("torsion side", &torsion_samples, degree_bound, seed)?.max_degree
    };
    // quotient side: S-localized Ext over the original samples
    let cache = ResolutionCache::new();
    let mut hd_quotient = 0;
    for x in samples {
        for y in samples {
            for degree in 1..=degree_bound {
                let ext = ext_group_cached(&cache, degree, x, y)?;
                let loc = localize_ext_group(&ext, primes);
                if !loc.is_trivial() {
                    hd_quotient = hd_quotient.max(degree);
                }
            }
        }
    }
    let hd_ambient = ambient_report.max_degree;
    let equal = hd_ambient == hd_torsion.max(hd_quotient);
    Ok(ThmHdReport {
        s: primes.iter().copied().collect(),
        degree_bound,
        hd_ambient,
        hd_torsion,
        hd_quotient,
        equal,
        ambient_report,
    })
}

#[derive(Serialize)]
pub struct HdMaxReport {
    pub predicate: String,
    pub degree_bound: usize,
    pub hd_ambient: usize,
    pub hd_subcategory: usize,
    pub hd_quotient: usize,
    pub inequality_holds: bool,
    pub strict: bool,
    pub lifting_checked: usize,
}

/// Verify hd(A) >= max(hd(B), hd(A/B)) on bounded estimates, after
/// checking the lifting property on the sampled canonical epimorphisms.
pub fn verify_hdmax_inequality(
    samples: &[PresentedModule],
    b: &SerrePredicate,
    degree_bound: usize,
    seed: u64,
) -> Result<HdMaxReport> {
    // lifting property on every sampled torsion projection
    let mut lifting_checked = 0;
    for x in samples {
        let pair = torsion_pair(x, b)?;
        if pair.quotient.is_zero_object() {
            continue;
        }
        check_lifting_property(&pair.projection, b).map_err(|e| match e {
            Error::NoWitness => Error::LiftingPropertyUnverified(format!(
                "no witness for the projection of {x:?}"
            )),
            other => other,
        })?;
        lifting_checked += 1;
    }
    let ambient = hd_bounded("ambient", samples, degree_bound, seed)?;
    // subcategory side: members of B among the samples
    let mut b_samples = Vec::new();
    for x in samples {
        if b.contains(x)? {
            b_samples.push(x.clone());
        }
    }
    let hd_subcategory = if b_samples.is_empty() {
        0
    } else {
        hd_bounded("subcategory", &b_samples, degree_bound, seed)?.max_degree
    };
    let hd_quotient = quotient_hd_estimate(samples, b, degree_bound)?;
    let hd_ambient = ambient.max_degree;
    let rhs = hd_subcategory.max(hd_quotient);
    Ok(HdMaxReport {
        predicate: b.name(),
        degree_bound,
        hd_ambient,
        hd_subcategory,
        hd_quotient,
        inequality_holds: hd_ambient >= rhs,
        strict: hd_ambient > rhs,
        lifting_checked,
    })
}

/// Bounded estimate of hd(A/B). For S-torsion predicates the localized
/// Ext groups compute quotient Ext exactly; for span predicates over the
/// hereditary realizations, degree one is certified by splitting tests on
/// every lifted extension class and higher degrees vanish structurally.
pub fn quotient_hd_estimate(
    samples: &[PresentedModule],
    b: &SerrePredicate,
    degree_bound: usize,
) -> Result<usize> {
    match b {
        SerrePredicate::STorsion { primes } => {
            let cache = ResolutionCache::new();
            let mut max = 0;
            for x in samples {
                for y in samples {
                    for degree in 1..=degree_bound {
                        let ext = ext_group_cached(&cache, degree, x, y)?;
                        if !localize_ext_group(&ext, primes).is_trivial() {
                            max = max.max(degree);
                        }
                    }
                }
            }
            Ok(max)
        }
        SerrePredicate::EtaleLike => {
            if samples.is_empty() || samples[0].ring().characteristic() == 0 {
                // B is everything: the quotient is trivial
                Ok(0)
            } else {
                // B is zero: the quotient is the ambient category
                Ok(hd_bounded("ambient", samples, degree_bound, 0)?.max_degree)
            }
        }
        SerrePredicate::Span { .. } => {
            let mut max = 0;
            for x in samples {
                for y in samples {
                    let xr = torsion_pair(x, b)?.sub;
                    let yr = torsion_pair(y, b)?.sub;
                    if xr.is_zero_object() || yr.is_zero_object() {
                        continue;
                    }
                    if !super::quiver::quotient_ext1_vanishes(&xr, &yr, b)? {
                        max = max.max(1);
                    }
                }
            }
            // higher degrees: bounded above by the hereditary ambient bound
            Ok(max)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hdlab::estimate::all_finab_up_to;
    use crate::modcat::module::make_finab;

    fn primes(list: &[u64]) -> BTreeSet<u64> {
        list.iter().copied().collect()
    }

    #[test]
    fn thm_hd_on_small_sample() {
        let samples: Vec<_> = all_finab_up_to(12)
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| make_finab(f).unwrap())
            .collect();
        let report = verify_thm_hd(&samples, &primes(&[2]), 3, 0).unwrap();
        assert_eq!(report.hd_ambient, 1);
        assert_eq!(report.hd_torsion, 1);
        assert_eq!(report.hd_quotient, 1);
        assert!(report.equal);
    }

    #[test]
    fn thm_hd_with_empty_s_is_tautological() {
        let samples: Vec<_> =
            [&[2][..], &[6]].iter().map(|f| make_finab(f).unwrap()).collect();
        let report = verify_thm_hd(&samples, &primes(&[]), 2, 0).unwrap();
        assert_eq!(report.hd_torsion, 0);
        assert_eq!(report.hd_quotient, report.hd_ambient);
        assert!(report.equal);
    }

    #[test]
    fn hdmax_equality_on_finab_at_two() {
        let samples: Vec<_> = all_finab_up_to(12)
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| make_finab(f).unwrap())
            .collect();
        let b = SerrePredicate::s_torsion(&[2]);
        let report = verify_hdmax_inequality(&samples, &b, 3, 0).unwrap();
        assert!(report.inequality_holds);
        assert!(!report.strict, "both sides realize degree 1");
        assert!(report.lifting_checked > 0);
    }

    #[test]
    fn hdmax_with_trivial_b_is_tautological() {
        let samples: Vec<_> =
            [&[4][..], &[6]].iter().map(|f| make_finab(f).unwrap()).collect();
        let b = SerrePredicate::span(vec![]);
        let report = verify_hdmax_inequality(&samples, &b, 2, 0).unwrap();
        assert!(report.inequality_holds);
        assert_eq!(report.hd_subcategory, 0);
        assert_eq!(report.hd_ambient, report.hd_quotient);
    }
}
