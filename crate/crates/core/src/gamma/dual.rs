use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::exact::int_mat::IntMat;
use crate::modcat::module::{make_gamma_module, PresentedModule};
use crate::modcat::ring::RingKind;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Pontryagin-style dual Hom(M, Z/ell^k) with the contragredient action.
/// M must be ell-primary and killed by ell^k. The dual has the same
/// invariant factors; the action of g is the transpose of g^{-1} rescaled
/// by the pairing.
pub fn ell_dual(m: &PresentedModule, ell: u64, k: u32) -> Result<PresentedModule> {
    let RingKind::GroupRing(group) = m.ring().kind() else {
        return Err(Error::Invalid("ell_dual needs a group-ring module".into()));
    };
    let lk = BigInt::from(ell).pow(k);
    for d in m.moduli() {
        let support = crate::serre::predicate::prime_support(d);
        if support.iter().any(|&p| p != ell) {
            return Err(Error::NotEllPrimary(format!("invariant factor {d} is not a power of {ell}")));
        }
        if !(&lk % d).is_zero() {
            return Err(Error::NotEllPrimary(format!(
                "invariant factor {d} is not killed by {ell}^{k}"
            )));
        }
    }
    let moduli = m.moduli().to_vec();
    let rank = moduli.len();
    let group = group.clone();
    let dual_actions: Vec<IntMat> = group
        .elements()
        .map(|g| {
            let a = &m.scalar().actions[group.inv(g)];
            IntMat::from_fn(rank, rank, |i, j| {
                // dual generator f_j pairs as f_j(e_i) = δ_ij ell^{k-a_j};
                // (g f_j)(e_i) = f_j(g^{-1} e_i) gives the rescaled transpose
                let num = a.at(j, i) * &moduli[i];
                let (q, r) = num.div_mod_floor(&moduli[j]);
                debug_assert!(r.is_zero(), "dual action scaling must be exact");
                q
            })
        })
        .collect();
    let invariants: Vec<i64> =
        moduli.iter().map(|d| i64::try_from(d).expect("desk scale")).collect();
    make_gamma_module(&group, &invariants, &dual_actions)
}

/// Convenience: the trivial module Z/d1 ⊕ ... over the group ring.
pub fn trivial_gamma_module(group: &FiniteGroup, invariants: &[i64]) -> Result<PresentedModule> {
    let m = invariants.iter().filter(|&&f| f > 1).count();
    let actions: Vec<IntMat> = (0..group.order()).map(|_| IntMat::identity(m)).collect();
    let kept: Vec<i64> = invariants.iter().copied().filter(|&f| f > 1).collect();
    make_gamma_module(group, &kept, &actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::hom::is_isomorphic;

    #[test]
    fn dual_of_trivial_is_trivial() {
        let c2 = FiniteGroup::cyclic(2);
        let m = trivial_gamma_module(&c2, &[3]).unwrap();
        let d = ell_dual(&m, 3, 1).unwrap();
        assert!(m.same_canonical_form(&d));
    }

    #[test]
    fn dual_of_sign_is_sign() {
        let c2 = FiniteGroup::cyclic(2);
        let sign = IntMat::from_i64(&[&[-1]]);
        let m = make_gamma_module(&c2, &[3], &[IntMat::identity(1), sign]).unwrap();
        let d = ell_dual(&m, 3, 1).unwrap();
        // the contragredient of -1 is -1
        assert!(is_isomorphic(&m, &d, 1 << 12).unwrap());
    }

    #[test]
    fn double_dual_is_identity() {
        let c2 = FiniteGroup::cyclic(2);
        // Z/2 ⊕ Z/4 with an involution mixing the summands
        let act = IntMat::from_i64(&[&[1, 0], &[2, 1]]);
        let m = make_gamma_module(&c2, &[2, 4], &[IntMat::identity(2), act]).unwrap();
        let dd = ell_dual(&ell_dual(&m, 2, 2).unwrap(), 2, 2).unwrap();
        assert!(is_isomorphic(&m, &dd, 1 << 12).unwrap());
    }

    #[test]
    fn non_primary_rejected() {
        let c2 = FiniteGroup::cyclic(2);
        let m = trivial_gamma_module(&c2, &[6]).unwrap();
        assert!(matches!(ell_dual(&m, 2, 3), Err(Error::NotEllPrimary(_))));
    }
}
