use super::bar::{group_cohomology_from_coefficients, BarCoefficients};
#[cfg(test)]
use super::dual::trivial_gamma_module;
use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::exact::int_mat::IntMat;
use crate::exact::subquot;
use crate::modcat::ext::ext_group_cached;
use crate::modcat::hom::hom_group;
use crate::modcat::module::{make_finab, make_gamma_module, PresentedModule};
use crate::modcat::resolution::ResolutionCache;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// All homomorphisms Gamma -> (Z/m)^*, as value tables indexed by group
/// element. Propagated from generator images; deterministic order.
pub fn characters(group: &FiniteGroup, modulus: u64) -> Vec<Vec<u64>> {
    let units: Vec<u64> = (1..modulus).filter(|u| u.gcd(&modulus) == 1).collect();
    let gens = group.generators();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; gens.len()];
    loop {
        // try to propagate this assignment to a full character
        let mut table = vec![u64::MAX; group.order()];
        table[group.identity()] = 1;
        let mut ok = true;
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g);
                let v = table[x] * units[assignment[gi]] % modulus;
                if table[y] == u64::MAX {
                    table[y] = v;
                    frontier.push(y);
                } else if table[y] != v {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
        }
        if ok && table.iter().all(|&v| v != u64::MAX) {
            // validate multiplicativity on the whole table
            let valid = (0..group.order()).all(|a| {
                (0..group.order())
                    .all(|b| table[group.mul(a, b)] == table[a] * table[b] % modulus)
            });
            if valid {
                out.push(table.clone());
            }
        }
        // next assignment
        let mut i = 0;
        loop {
            if i == gens.len() {
                out.dedup();
                return out;
            }
            assignment[i] += 1;
            if assignment[i] < units.len() {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if gens.is_empty() {
            out.dedup();
            return out;
        }
    }
}

/// A deterministic family of cyclic ell-primary Gamma-modules: orders ell
/// and ell^2 with every character action.
pub fn ell_primary_family(
    group: &FiniteGroup,
    ell: u64,
    max_order: u64,
) -> Result<Vec<PresentedModule>> {
    let mut out = Vec::new();
    for k in [1u32, 2] {
        let m = ell.pow(k);
        if m > max_order {
            continue;
        }
        for chi in characters(group, m) {
            let action: Vec<IntMat> = chi
                .iter()
                .map(|&v| IntMat::from_fn(1, 1, |_, _| BigInt::from(v)))
                .collect();
            out.push(make_gamma_module(group, &[m as i64], &action)?);
        }
    }
    Ok(out)
}

/// The regular permutation module (Z/ell)[Gamma] (bar-complex friendly,
/// but expensive on the Ext side for larger groups).
pub fn regular_module(group: &FiniteGroup, ell: u64) -> Result<PresentedModule> {
    let n = group.order();
    let actions: Vec<IntMat> = group
        .elements()
        .map(|g| {
            IntMat::from_fn(n, n, |i, j| {
                if group.mul(g, j) == i {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
        })
        .collect();
    make_gamma_module(group, &vec![ell as i64; n], &actions)
}

/// Result of probing the ell-cohomological dimension of a finite group.
#[derive(Debug)]
pub enum CdProbe {
    /// Vanishing certificate: H^i = 0 for i = 1..bound over the family.
    Vanishing { bound: usize, certificate: Vec<String> },
    /// The least degree with nonvanishing cohomology (evidence that the
    /// dimension is infinite for a finite group).
    NonvanishingAt { degree: usize, witness: String },
}

impl CdProbe {
    pub fn value(&self) -> Option<usize> {
        match self {
            CdProbe::Vanishing { .. } => Some(0),
            CdProbe::NonvanishingAt { .. } => None,
        }
    }
}

pub fn cd_ell_probe(group: &FiniteGroup, ell: u64, bound: usize) -> Result<CdProbe> {
    let mut family = ell_primary_family(group, ell, 64)?;
    if BigInt::from(ell).pow(group.order() as u32) <= BigInt::from(64) {
        family.push(regular_module(group, ell)?);
    }
    let mut certificate = Vec::new();
    for degree in 1..=bound {
        for (idx, m) in family.iter().enumerate() {
            let coeff = BarCoefficients::from_module(m)?;
            let h = match group_cohomology_from_coefficients(&coeff, degree) {
                Ok(h) => h,
                Err(Error::BudgetExceeded(_)) => continue,
                Err(e) => return Err(e),
            };
            if h.is_trivial() {
                certificate.push(format!(
                    "H^{degree}({}, family[{idx}] of order {}) = 0",
                    group.label(),
                    m.order()
                ));
            } else {
                return Ok(CdProbe::NonvanishingAt {
                    degree,
                    witness: format!(
                        "H^{degree}({}, module of order {}) has invariants {:?}",
                        group.label(),
                        m.order(),
                        h.invariants
                    ),
                });
            }
        }
    }
    Ok(CdProbe::Vanishing { bound, certificate })
}

/// The underlying abelian group of a Gamma-module, as a module over Z.
fn underlying_finab(m: &PresentedModule) -> Result<PresentedModule> {
    let invariants: Vec<i64> =
        m.moduli().iter().map(|d| i64::try_from(d).expect("desk scale")).collect();
    make_finab(&invariants)
}

/// Hom(X-bar, Y-bar) as a Gamma-module with the conjugation action.
pub fn hom_bar_module(
    group: &FiniteGroup,
    x: &PresentedModule,
    y: &PresentedModule,
) -> Result<PresentedModule> {
    let xb = underlying_finab(x)?;
    let yb = underlying_finab(y)?;
    let hom = hom_group(&xb, &yb)?;
    let rank = hom.invariants.len();
    let mut actions = Vec::with_capacity(group.order());
    for g in group.elements() {
        let ay = &y.scalar().actions[g];
        let ax_inv = &x.scalar().actions[group.inv(g)];
        let mut act = IntMat::zero(rank, rank);
        for (c, basis) in hom.basis.iter().enumerate() {
            let moved = ay.mul(basis.matrix()).mul(ax_inv);
            let moved = crate::modcat::morphism::Morphism::new_unchecked(
                xb.clone(),
                yb.clone(),
                moved,
            );
            let coords = hom.coords_of(&moved)?;
            for (r, v) in coords.into_iter().enumerate() {
                act.set(r, c, v);
            }
        }
        actions.push(act);
    }
    let invariants: Vec<i64> =
        hom.invariants.iter().map(|d| i64::try_from(d).expect("desk scale")).collect();
    make_gamma_module(group, &invariants, &actions)
}

/// Ext^1_Z(X-bar, Y-bar) as a Gamma-module. Computed from the canonical
/// presentation 0 -> Z^m -D-> Z^m -> X-bar -> 0, where the cocycle space is
/// Y-bar^m and coboundaries are D-multiples.
pub fn ext1_bar_module(
    group: &FiniteGroup,
    x: &PresentedModule,
    y: &PresentedModule,
) -> Result<PresentedModule> {
    let dx = x.moduli().to_vec();
    let dy = y.moduli().to_vec();
    let (mx, my) = (dx.len(), dy.len());
    // ambient: (slot i < mx) x (coordinate j < my), modulus dy[j]
    let ambient: Vec<BigInt> =
        (0..mx).flat_map(|_| dy.iter().cloned()).collect();
    // coboundary lattice: slot i scaled by dx[i]
    let mut extra = IntMat::zero(ambient.len(), ambient.len());
    for i in 0..mx {
        for j in 0..my {
            extra.set(i * my + j, i * my + j, dx[i].clone());
        }
    }
    let quot = subquot::quotient(&ambient, &extra);
    let rank = quot.moduli().len();
    let proj = quot.projection();
    let section = quot.section();
    let mut actions = Vec::with_capacity(group.order());
    for g in group.elements() {
        let ay = &y.scalar().actions[g];
        let ax_inv = &x.scalar().actions[group.inv(g)];
        // f1 = D^{-1} ax_inv D: entry (s,i) = ax_inv[s][i] * dx[i] / dx[s]
        let f1 = IntMat::from_fn(mx, mx, |s, i| {
            let num = ax_inv.at(s, i) * &dx[i];
            let (q, r) = num.div_mod_floor(&dx[s]);
            debug_assert!(r.is_zero());
            q
        });
        // action on a cocycle matrix Phi (my x mx): ay * Phi * f1
        let mut act = IntMat::zero(rank, rank);
        for c in 0..rank {
            let lift = section.col(c);
            let phi = IntMat::from_fn(my, mx, |j, i| lift[i * my + j].clone());
            let moved = ay.mul(&phi).mul(&f1);
            let mut flat = vec![BigInt::zero(); ambient.len()];
            for i in 0..mx {
                for j in 0..my {
                    flat[i * my + j] = moved.at(j, i).clone();
                }
            }
            let coords = proj.apply(&flat);
            for (r, v) in coords.into_iter().enumerate() {
                act.set(r, c, v);
            }
        }
        actions.push(act);
    }
    let invariants: Vec<i64> =
        quot.moduli().iter().map(|d| i64::try_from(d).expect("desk scale")).collect();
    make_gamma_module(group, &invariants, &actions)
}

/// One row of an hd probe report.
#[derive(Debug)]
pub struct ExtProbeEntry {
    pub pair: (usize, usize),
    pub degree: usize,
    pub invariants: Vec<BigInt>,
    /// When computed: (|H^n(Hom)|, |H^{n-1}(Ext^1)|) of the spectral bound.
    pub spectral_bound: Option<(BigInt, BigInt)>,
}

#[derive(Debug)]
pub struct HdGammaReport {
    pub group_label: String,
    pub ell: u64,
    pub degree_bound: usize,
    pub sample_orders: Vec<BigInt>,
    pub max_nonvanishing_degree: Option<usize>,
    pub entries: Vec<ExtProbeEntry>,
}

/// Probe the homological dimension of the category of ell-primary
/// Gamma-modules: the maximal degree <= bound with nonvanishing Ext over
/// the sampled pairs, cross-bounded by the two-row spectral estimate.
pub fn hd_gamma_mod_probe(
    group: &FiniteGroup,
    ell: u64,
    degree_bound: usize,
    samples: &[PresentedModule],
) -> Result<HdGammaReport> {
    for m in samples {
        if m.order() > BigInt::from(64) {
            return Err(Error::BudgetExceeded(format!(
                "sample of order {} exceeds the probe cap 64",
                m.order()
            )));
        }
    }
    let cache = ResolutionCache::new();
    let mut entries = Vec::new();
    let mut max_degree = None;
    for (xi, x) in samples.iter().enumerate() {
        for (yi, y) in samples.iter().enumerate() {
            // spectral coefficient modules for the cross-bound
            let hom_mod = hom_bar_module(group, x, y)?;
            let ext1_mod = ext1_bar_module(group, x, y)?;
            for degree in 1..=degree_bound {
                let ext = ext_group_cached(&cache, degree, x, y)?;
                let spectral_bound = spectral_bound(group, &hom_mod, &ext1_mod, degree)?;
                if let Some((hn, hn1)) = &spectral_bound {
                    let bound = hn * hn1;
                    if !(&bound % ext.order()).is_zero() {
                        return Err(Error::Invalid(format!(
                            "spectral bound violated: |Ext^{degree}| = {} does not divide {}",
                            ext.order(),
                            bound
                        )));
                    }
                }
                if !ext.is_trivial() {
                    max_degree = Some(max_degree.map_or(degree, |d: usize| d.max(degree)));
                }
                entries.push(ExtProbeEntry {
                    pair: (xi, yi),
                    degree,
                    invariants: ext.invariants.clone(),
                    spectral_bound,
                });
            }
        }
    }
    Ok(HdGammaReport {
        group_label: group.label().to_string(),
        ell,
        degree_bound,
        sample_orders: samples.iter().map(|m| m.order()).collect(),
        max_nonvanishing_degree: max_degree,
        entries,
    })
}

fn spectral_bound(
    group: &FiniteGroup,
    hom_mod: &PresentedModule,
    ext1_mod: &PresentedModule,
    degree: usize,
) -> Result<Option<(BigInt, BigInt)>> {
    let coeff_hom = BarCoefficients::from_module(hom_mod)?;
    let coeff_ext = BarCoefficients::from_module(ext1_mod)?;
    let hn = match group_cohomology_from_coefficients(&coeff_hom, degree) {
        Ok(h) => h.order(),
        Err(Error::BudgetExceeded(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let hn1 = if degree == 0 {
        BigInt::one()
    } else {
        match group_cohomology_from_coefficients(&coeff_ext, degree - 1) {
            Ok(h) => h.order(),
            Err(Error::BudgetExceeded(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    };
    let _ = group;
    Ok(Some((hn, hn1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_of_small_groups() {
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(characters(&c2, 3).len(), 2); // trivial and sign
        assert_eq!(characters(&c2, 2).len(), 1); // only trivial
        let s3 = FiniteGroup::symmetric_3();
        assert_eq!(characters(&s3, 3).len(), 2); // trivial and sign
        let c3 = FiniteGroup::cyclic(3);
        assert_eq!(characters(&c3, 7).len(), 3); // cube roots of unity mod 7
    }

    #[test]
    fn cd_probe_coprime_vanishes() {
        let c3 = FiniteGroup::cyclic(3);
        let probe = cd_ell_probe(&c3, 2, 4).unwrap();
        assert!(matches!(probe, CdProbe::Vanishing { .. }), "{probe:?}");
    }

    #[test]
    fn cd_probe_dividing_order() {
        let c2 = FiniteGroup::cyclic(2);
        let probe = cd_ell_probe(&c2, 2, 4).unwrap();
        match probe {
            CdProbe::NonvanishingAt { degree, .. } => assert_eq!(degree, 1),
            other => panic!("expected nonvanishing, got {other:?}"),
        }
    }

    #[test]
    fn cd_probe_trivial_group() {
        let t = FiniteGroup::trivial();
        let probe = cd_ell_probe(&t, 2, 3).unwrap();
        assert_eq!(probe.value(), Some(0));
    }

    #[test]
    fn hd_probe_trivial_group_matches_cd_plus_one() {
        let t = FiniteGroup::trivial();
        let samples = ell_primary_family(&t, 2, 8).unwrap();
        let report = hd_gamma_mod_probe(&t, 2, 3, &samples).unwrap();
        assert_eq!(report.max_nonvanishing_degree, Some(1));
    }

    #[test]
    fn hd_probe_c2_at_3() {
        let c2 = FiniteGroup::cyclic(2);
        let samples = ell_primary_family(&c2, 3, 9).unwrap();
        let report = hd_gamma_mod_probe(&c2, 3, 3, &samples).unwrap();
        assert_eq!(report.max_nonvanishing_degree, Some(1), "cd_3(C2) + 1 = 1");
    }

    #[test]
    fn hd_probe_c2_at_2_periodic() {
        let c2 = FiniteGroup::cyclic(2);
        let samples = vec![trivial_gamma_module(&c2, &[2]).unwrap()];
        let report = hd_gamma_mod_probe(&c2, 2, 4, &samples).unwrap();
        assert_eq!(report.max_nonvanishing_degree, Some(4));
        // nonvanishing at every degree 1..4
        for d in 1..=4 {
            assert!(
                report
                    .entries
                    .iter()
                    .any(|e| e.degree == d && !e.invariants.is_empty()),
                "Ext must be nonzero in degree {d}"
            );
        }
    }
}
