use crate::error::{Error, Result};
use crate::exact::gf::{FiniteFieldMatrix, Gf};
use crate::modcat::hom::is_isomorphic;
use crate::modcat::morphism::{cokernel, image, submodule_generated, Morphism};
use crate::modcat::module::PresentedModule;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Desk-scale cap: subobject searches are exhaustive for objects of order
/// at most this; larger inputs refuse with SearchExhausted.
pub const ENUMERATION_CAP: u64 = 512;

/// Cap for isomorphism searches in hom groups.
pub const ISO_SEARCH_CAP: u64 = 1 << 16;

/// A decidable Serre subcategory membership test.
#[derive(Clone, Debug)]
pub enum SerrePredicate {
    /// Objects killed by an integer all of whose prime factors lie in S.
    STorsion { primes: BTreeSet<u64> },
    /// The Serre closure of a finite set of objects: everything whose
    /// composition factors occur among the seeds' factors.
    Span { seeds: Vec<PresentedModule> },
    /// Everything for char-zero realizations; only the zero object over a
    /// ring of positive characteristic.
    EtaleLike,
}

impl SerrePredicate {
    pub fn s_torsion(primes: &[u64]) -> SerrePredicate {
        SerrePredicate::STorsion { primes: primes.iter().copied().collect() }
    }

    pub fn span(seeds: Vec<PresentedModule>) -> SerrePredicate {
        SerrePredicate::Span { seeds }
    }

    pub fn name(&self) -> String {
        match self {
            SerrePredicate::STorsion { primes } => {
                let list: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                format!("s_torsion:{{{}}}", list.join(","))
            }
            SerrePredicate::Span { seeds } => format!("span:{{{} objects}}", seeds.len()),
            SerrePredicate::EtaleLike => "etale_like".into(),
        }
    }

    pub fn primes(&self) -> Option<&BTreeSet<u64>> {
        match self {
            SerrePredicate::STorsion { primes } => Some(primes),
            _ => None,
        }
    }

    /// Decide membership.
    pub fn contains(&self, x: &PresentedModule) -> Result<bool> {
        match self {
            SerrePredicate::STorsion { primes } => {
                Ok(prime_support(&x.order()).iter().all(|p| primes.contains(p)))
            }
            SerrePredicate::EtaleLike => {
                if x.ring().characteristic() == 0 {
                    Ok(true)
                } else {
                    Ok(x.is_zero_object())
                }
            }
            SerrePredicate::Span { seeds } => {
                if x.is_zero_object() {
                    return Ok(true);
                }
                let mut seed_factors = Vec::new();
                for s in seeds {
                    seed_factors.extend(composition_factors(s, ENUMERATION_CAP)?);
                }
                let factors = composition_factors(x, ENUMERATION_CAP)?;
                for f in &factors {
                    let mut found = false;
                    for sf in &seed_factors {
                        if is_isomorphic(f, sf, ISO_SEARCH_CAP)? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

pub fn prime_support(n: &BigInt) -> Vec<u64> {
    let mut n = u64::try_from(n).expect("orders fit u64 at desk scale");
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

/// The part of n supported on S (the largest divisor with all prime
/// factors in S).
pub fn s_part(n: &BigInt, primes: &BTreeSet<u64>) -> BigInt {
    let mut rest = n.clone();
    let mut part = BigInt::one();
    for p in primes {
        let pb = BigInt::from(*p);
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            part *= &pb;
        }
    }
    part
}

/// Maximal action-stable subspaces of the elementary abelian quotient
/// Z/pZ, as bases over F_p (columns in the coordinates of q).
fn maximal_stable_subspaces(
    q: &PresentedModule,
    p: u64,
) -> Result<Vec<FiniteFieldMatrix>> {
    let field = Gf::new(p, 1)?;
    let m = q.rank();
    let n = q.ring().rank();
    let actions: Vec<FiniteFieldMatrix> = (0..n)
        .map(|b| {
            FiniteFieldMatrix::from_fn(field.clone(), m, m, |i, j| {
                let v = q.scalar().actions[b].at(i, j).mod_floor(&BigInt::from(p));
                u64::try_from(&v).expect("reduced")
            })
        })
        .collect();
    // canonical key of the subspace spanned by some vectors: the rref basis
    let canon = |vectors: &[Vec<u64>]| -> (Vec<Vec<u64>>, Vec<u8>) {
        let mut mat = FiniteFieldMatrix::from_fn(field.clone(), vectors.len(), m, |i, j| {
            vectors[i][j]
        });
        let pivots = mat.row_reduce();
        let basis: Vec<Vec<u64>> =
            (0..pivots.len()).map(|r| (0..m).map(|j| mat.at(r, j)).collect()).collect();
        let mut key = Vec::new();
        for row in &basis {
            for &v in row {
                key.push(v as u8);
            }
            key.push(255);
        }
        (basis, key)
    };
    // stable closure of a set of vectors under all basis actions
    let stable_span = |start: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut queue: Vec<Vec<u64>> = start.to_vec();
        while let Some(v) = queue.pop() {
            // reduce v against current basis
            let mut all: Vec<Vec<u64>> = basis.clone();
            all.push(v.clone());
            let (reduced, _) = canon(&all);
            if reduced.len() > basis.len() {
                basis = reduced;
                for act in &actions {
                    queue.push(act.mul_vec(&v));
                }
            }
        }
        basis
    };
    if BigInt::from(p).pow(m as u32) > BigInt::from(ENUMERATION_CAP) {
        return Err(Error::SearchExhausted(format!(
            "stable-subspace enumeration needs p^m = {p}^{m} <= {ENUMERATION_CAP}"
        )));
    }
    // all vectors of F_p^m
    let mut vectors = vec![vec![0u64; m]];
    for i in 0..m {
        let mut next = Vec::new();
        for v in vectors {
            for c in 0..p {
                let mut w = v.clone();
                w[i] = c;
                next.push(w);
            }
        }
        vectors = next;
    }
    // cyclic stable subspaces, then closure under sums
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut spaces: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut add_space = |basis: Vec<Vec<u64>>, spaces: &mut Vec<Vec<Vec<u64>>>| {
        let (b, key) = canon(&basis);
        if seen.insert(key) {
            spaces.push(b);
        }
    };
    for v in &vectors {
        add_space(stable_span(std::slice::from_ref(v)), &mut spaces);
    }
    let mut idx = 0;
    while idx < spaces.len() {
        for jdx in 0..idx {
            let mut joined = spaces[idx].clone();
            joined.extend(spaces[jdx].iter().cloned());
            add_space(stable_span(&joined), &mut spaces);
        }
        idx += 1;
    }
    // maximal proper subspaces
    let contains = |big: &Vec<Vec<u64>>, small: &Vec<Vec<u64>>| -> bool {
        if small.len() > big.len() {
            return false;
        }
        let mut all = big.clone();
        all.extend(small.iter().cloned());
        let (joined, _) = canon(&all);
        joined.len() == big.len()
    };
    let mut maximal = Vec::new();
    'outer: for (i, s) in spaces.iter().enumerate() {
        if s.len() == m {
            continue; // the full space
        }
        for (j, t) in spaces.iter().enumerate() {
            if i != j && t.len() < m && t.len() > s.len() && contains(t, s) {
                continue 'outer;
            }
        }
        maximal.push(FiniteFieldMatrix::from_fn(field.clone(), m, s.len(), |r, c| s[c][r]));
    }
    Ok(maximal)
}

/// All simple quotients of a nonzero module, as projection morphisms.
/// Deterministic order. Exhaustive below the enumeration cap.
pub fn simple_quotients(z: &PresentedModule) -> Result<Vec<Morphism>> {
    if z.is_zero_object() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for p in prime_support(&z.order()) {
        // Q = Z / pZ
        let mul_p = Morphism::mul_by_int(z, p as i64);
        let (_, p_incl, _) = image(&mul_p)?;
        let (q, proj) = cokernel(&p_incl)?;
        if q.is_zero_object() {
            continue;
        }
        for w in maximal_stable_subspaces(&q, p)? {
            // preimage of the subspace in Z: lifts of its basis plus pZ
            let mut gens: Vec<Vec<BigInt>> = Vec::new();
            for c in 0..w.cols() {
                let col: Vec<BigInt> = (0..w.rows()).map(|r| BigInt::from(w.at(r, c))).collect();
                // a preimage of the subspace vector under the projection
                let lift = crate::exact::smith::solve_modular(
                    proj.matrix(),
                    &col,
                    &q.moduli().to_vec(),
                )?;
                gens.push(lift);
            }
            for c in 0..p_incl.matrix().cols() {
                gens.push(p_incl.matrix().col(c));
            }
            let (_, incl) = submodule_generated(z, &gens)?;
            let (t, t_proj) = cokernel(&incl)?;
            debug_assert!(!t.is_zero_object(), "maximal submodule must be proper");
            out.push(t_proj);
        }
    }
    Ok(out)
}

/// Jordan–Hölder factors of a module (top-down), exhaustive at desk scale.
pub fn composition_factors(x: &PresentedModule, cap: u64) -> Result<Vec<PresentedModule>> {
    if x.order() > BigInt::from(cap) * BigInt::from(cap) {
        return Err(Error::SearchExhausted(format!(
            "composition series of order {} beyond desk scale",
            x.order()
        )));
    }
    let mut factors = Vec::new();
    let mut current = x.clone();
    while !current.is_zero_object() {
        let quots = simple_quotients(&current)?;
        let Some(first) = quots.into_iter().next() else {
            return Err(Error::Invalid(format!(
                "nonzero module {current:?} has no simple quotient"
            )));
        };
        factors.push(first.target().clone());
        let (next, _incl) = crate::modcat::morphism::kernel(&first)?;
        current = next;
    }
    Ok(factors)
}

/// Statistical Serre-closure audit on sampled short exact sequences drawn
/// from a pool of modules. Any violation is a hard failure.
pub fn audit_serre_closure(
    b: &SerrePredicate,
    pool: &[PresentedModule],
    seed: u64,
    samples: usize,
) -> Result<()> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = &pool[rng.gen_range(0..pool.len())];
        if x.order() > BigInt::from(ENUMERATION_CAP) {
            continue;
        }
        // random submodule: span of up to two random elements
        let elems = x.elements(ENUMERATION_CAP)?;
        if elems.is_empty() {
            continue;
        }
        let a = elems[rng.gen_range(0..elems.len())].clone();
        let b2 = elems[rng.gen_range(0..elems.len())].clone();
        let (_, incl) = submodule_generated(x, &[a, b2])?;
        let sub = incl.source().clone();
        let (quot, _) = cokernel(&incl)?;
        let in_x = b.contains(x)?;
        let in_sub = b.contains(&sub)?;
        let in_quot = b.contains(&quot)?;
        if in_x && !(in_sub && in_quot) {
            return Err(Error::Invalid(format!(
                "Serre closure violated: member {x:?} has non-member sub or quotient under {}",
                b.name()
            )));
        }
        if in_sub && in_quot && !in_x {
            return Err(Error::Invalid(format!(
                "Serre closure violated: extension of members is not a member under {}",
                b.name()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gf::Gf;
    use crate::modcat::module::{make_finab, make_quiver_rep};
    use crate::modcat::ring::BaseRing;

    #[test]
    fn s_torsion_membership() {
        let b = SerrePredicate::s_torsion(&[2]);
        assert!(b.contains(&make_finab(&[4]).unwrap()).unwrap());
        assert!(b.contains(&make_finab(&[2, 8]).unwrap()).unwrap());
        assert!(!b.contains(&make_finab(&[6]).unwrap()).unwrap());
        assert!(b.contains(&make_finab(&[]).unwrap()).unwrap());
    }

    #[test]
    fn composition_factors_of_z12() {
        let z12 = make_finab(&[12]).unwrap();
        let factors = composition_factors(&z12, 512).unwrap();
        let mut orders: Vec<u64> =
            factors.iter().map(|f| u64::try_from(&f.order()).unwrap()).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2, 3]);
    }

    #[test]
    fn quiver_span_membership() {
        let field = Gf::new(2, 1).unwrap();
        let ring = BaseRing::path_algebra_a2(field.clone()).unwrap();
        let s1 = make_quiver_rep(&ring, 1, 0, &FiniteFieldMatrix::zero(field.clone(), 0, 1)).unwrap();
        let s2 = make_quiver_rep(&ring, 0, 1, &FiniteFieldMatrix::zero(field.clone(), 1, 0)).unwrap();
        let p1 = make_quiver_rep(&ring, 1, 1, &FiniteFieldMatrix::identity(field.clone(), 1)).unwrap();
        let b = SerrePredicate::span(vec![s2.clone()]);
        assert!(b.contains(&s2).unwrap());
        assert!(!b.contains(&s1).unwrap());
        assert!(!b.contains(&p1).unwrap());
        // sums of copies of S2 are in the span
        let (s2s2, _, _) = crate::modcat::morphism::direct_sum(&s2, &s2).unwrap();
        assert!(b.contains(&s2s2).unwrap());
        // P1 has factors S1 and S2
        let factors = composition_factors(&p1, 512).unwrap();
        assert_eq!(factors.len(), 2);
    }

    #[test]
    fn closure_audit_passes_for_s_torsion() {
        let pool: Vec<_> = [&[4][..], &[6], &[12], &[2, 2], &[8], &[9]]
            .iter()
            .map(|f| make_finab(f).unwrap())
            .collect();
        audit_serre_closure(&SerrePredicate::s_torsion(&[2]), &pool, 7, 40).unwrap();
        audit_serre_closure(&SerrePredicate::s_torsion(&[2, 3]), &pool, 8, 40).unwrap();
    }
}
