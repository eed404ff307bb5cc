use super::predicate::{s_part, SerrePredicate};
use super::qcat::q_is_zero;
use super::torsion::{exponent, largest_b_subobject, torsion_pair};
use crate::error::{Error, Result};
use crate::modcat::morphism::{
    cokernel, corestrict, factor_through_epi, image, kernel, submodule_generated, Morphism,
};
use crate::modcat::module::PresentedModule;
use num_bigint::BigInt;

/// Check the lifting property for an epimorphism f: X -> Y with Y in B:
/// return a subobject X' of X with X' in B and the composite X' -> Y still
/// an epimorphism. For S-torsion predicates the witness is ker(n_X) with n
/// the S-part of the exponent (the snake-lemma witness); in general the
/// largest B-subobject of X is the maximal candidate, so failure of that
/// candidate certifies that no witness exists.
pub fn check_lifting_property(f: &Morphism, b: &SerrePredicate) -> Result<Morphism> {
    if !f.is_epi()? {
        return Err(Error::Invalid("lifting-property input must be an epimorphism".into()));
    }
    if !b.contains(f.target())? {
        return Err(Error::Invalid("lifting-property target must lie in B".into()));
    }
    let witness_inclusion = match b {
        SerrePredicate::STorsion { primes } => {
            let n = s_part(&exponent(f.source()), primes);
            let mul = Morphism::mul_by_int(f.source(), i64::try_from(&n).expect("desk scale"));
            let (_, incl) = kernel(&mul)?;
            incl
        }
        _ => largest_b_subobject(f.source(), b)?.1,
    };
    if !b.contains(witness_inclusion.source())? {
        return Err(Error::NoWitness);
    }
    let composite = f.compose(&witness_inclusion);
    if composite.is_epi()? {
        Ok(witness_inclusion)
    } else {
        Err(Error::NoWitness)
    }
}

/// A complex in the ambient category, read left to right:
/// objects[0] --maps[0]--> objects[1] --maps[1]--> ...
pub struct LiftedComplex {
    pub objects: Vec<PresentedModule>,
    pub maps: Vec<Morphism>,
    /// Comparison epimorphisms from the input objects, with kernels in B.
    pub comparisons: Vec<Morphism>,
}

/// Lift a complex that is exact in A/B to an exact complex in A, together
/// with comparison epimorphisms making the ladder commute in the quotient.
///
/// The input maps are genuine morphisms whose consecutive composites are
/// zero in the quotient; a complex of q-morphisms can be fed in by first
/// composing each representative with its witness projection.
pub fn lift_exact_complex(
    objects: &[PresentedModule],
    maps: &[Morphism],
    b: &SerrePredicate,
) -> Result<LiftedComplex> {
    let k = objects.len();
    assert_eq!(maps.len() + 1, k.max(1), "a complex on k objects has k-1 maps");
    for (i, f) in maps.iter().enumerate() {
        assert!(f.source().same_canonical_form(&objects[i]), "map {i} source mismatch");
        assert!(f.target().same_canonical_form(&objects[i + 1]), "map {i} target mismatch");
    }
    // a complex in the quotient at all
    for i in 0..maps.len().saturating_sub(1) {
        let comp = maps[i + 1].compose(&maps[i]);
        if !q_is_zero(&comp, b)? {
            return Err(Error::InputNotExactInQuotient(format!(
                "composite at position {} is nonzero in the quotient",
                i + 1
            )));
        }
    }
    // Step A: quotient every object by its largest B-subobject
    let mut cur_objects: Vec<PresentedModule> = Vec::with_capacity(k);
    let mut comparisons: Vec<Morphism> = Vec::with_capacity(k);
    for x in objects {
        let (t, incl) = largest_b_subobject(x, b)?;
        if t.is_zero_object() {
            cur_objects.push(x.clone());
            comparisons.push(Morphism::identity(x));
        } else {
            let (q, proj) = cokernel(&incl)?;
            cur_objects.push(q);
            comparisons.push(proj);
        }
    }
    for q in &cur_objects {
        let pair = torsion_pair(q, b)?;
        if !pair.quotient.is_zero_object() {
            return Err(Error::LiftingPropertyUnverified(format!(
                "{q:?} still has a nonzero B-quotient after reduction"
            )));
        }
    }
    // Step B: replace the maps by genuine morphisms between the reduced
    // objects, further quotienting targets so kernels of comparisons die
    let mut lifted_maps: Vec<Morphism> = Vec::with_capacity(maps.len());
    for i in 0..maps.len() {
        let c = comparisons[i + 1].compose(&maps[i]);
        // image of ker(comparisons[i]) inside the current target
        let (ker_i, ker_incl) = kernel(&comparisons[i])?;
        let obstruction = c.compose(&ker_incl);
        let (t, t_incl, _) = image(&obstruction)?;
        let c = if t.is_zero_object() {
            c
        } else {
            debug_assert!(b.contains(&t)?, "obstruction is a quotient of a B-object");
            let (newt, proj) = cokernel(&t_incl)?;
            cur_objects[i + 1] = newt;
            comparisons[i + 1] = proj.compose(&comparisons[i + 1]);
            proj.compose(&c)
        };
        let _ = ker_i;
        let h = factor_through_epi(&comparisons[i], &c)?;
        lifted_maps.push(h);
    }
    // drop-in sanity: consecutive genuine composites must vanish
    for i in 0..lifted_maps.len().saturating_sub(1) {
        let comp = lifted_maps[i + 1].compose(&lifted_maps[i]);
        if !comp.is_zero() {
            return Err(Error::Invalid(
                "internal: reduced complex has nonzero genuine composite".into(),
            ));
        }
    }
    // verify exactness in the quotient (homology objects lie in B)
    for j in 0..k {
        let h = homology_object(&cur_objects, &lifted_maps, j)?;
        if !b.contains(&h)? {
            return Err(Error::InputNotExactInQuotient(format!(
                "homology at position {j} is not in B"
            )));
        }
    }
    // Step C: repair exactness from the right end towards the left
    for j in (0..k.saturating_sub(1)).rev() {
        // kernel of the outgoing map at position j
        let (ker_mod, ker_incl) = kernel(&lifted_maps[j])?;
        // image of the incoming map (zero at the left end)
        let im_gens: Vec<Vec<BigInt>> = if j > 0 {
            let (_, im_incl, _) = image(&lifted_maps[j - 1])?;
            (0..im_incl.matrix().cols()).map(|c| im_incl.matrix().col(c)).collect()
        } else {
            Vec::new()
        };
        // X' = largest B-subobject of the kernel, pushed into the object
        let (bpart, bpart_incl) = largest_b_subobject(&ker_mod, b)?;
        if bpart.is_zero_object() {
            continue;
        }
        let pushed = ker_incl.compose(&bpart_incl);
        let mut sum_gens: Vec<Vec<BigInt>> =
            (0..pushed.matrix().cols()).map(|c| pushed.matrix().col(c)).collect();
        let kernel_order = ker_mod.order();
        sum_gens.extend(im_gens.iter().cloned());
        let (sum_mod, _) = submodule_generated(&cur_objects[j], &sum_gens)?;
        if sum_mod.order() != kernel_order {
            return Err(Error::LiftingPropertyUnverified(format!(
                "kernel at position {j} is not the sum of its B-part and the incoming image"
            )));
        }
        // quotient the object by X' and transport the adjacent maps
        let (newobj, proj) = cokernel(&pushed)?;
        let out_map = factor_through_epi(&proj, &lifted_maps[j])?;
        lifted_maps[j] = out_map;
        if j > 0 {
            lifted_maps[j - 1] = proj.compose(&lifted_maps[j - 1]);
        }
        comparisons[j] = proj.compose(&comparisons[j]);
        cur_objects[j] = newobj;
    }
    // final audits: genuine exactness, comparisons, commutativity
    for j in 0..k {
        let h = homology_object(&cur_objects, &lifted_maps, j)?;
        if !h.is_zero_object() {
            return Err(Error::Invalid(format!("lifted complex not exact at position {j}")));
        }
    }
    for (i, g) in comparisons.iter().enumerate() {
        if !g.is_epi()? {
            return Err(Error::Invalid(format!("comparison {i} is not an epimorphism")));
        }
        let (kg, _) = kernel(g)?;
        if !b.contains(&kg)? {
            return Err(Error::Invalid(format!("comparison {i} has kernel outside B")));
        }
    }
    for i in 0..maps.len() {
        let lhs = comparisons[i + 1].compose(&maps[i]);
        let rhs = lifted_maps[i].compose(&comparisons[i]);
        if !lhs.eq_morphism(&rhs) {
            return Err(Error::Invalid(format!("comparison square {i} does not commute")));
        }
    }
    Ok(LiftedComplex { objects: cur_objects, maps: lifted_maps, comparisons })
}

/// Homology of a genuine complex at position j; positions off the ends use
/// zero maps (so j = 0 measures injectivity, j = k-1 surjectivity).
fn homology_object(
    objects: &[PresentedModule],
    maps: &[Morphism],
    j: usize,
) -> Result<PresentedModule> {
    let outgoing = if j < maps.len() {
        maps[j].clone()
    } else {
        let (zero, _) = submodule_generated(&objects[j], &[])?;
        Morphism::zero(&objects[j], &zero)
    };
    let (ker_mod, ker_incl) = kernel(&outgoing)?;
    if j == 0 {
        return Ok(ker_mod);
    }
    let incoming = corestrict(&maps[j - 1], &ker_incl)?;
    let (h, _) = cokernel(&incoming)?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_mat::IntMat;
    use crate::modcat::module::make_finab;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn witness_for_z4_onto_z2() {
        let z4 = make_finab(&[4]).unwrap();
        let z2 = make_finab(&[2]).unwrap();
        let proj = Morphism::new(z4.clone(), z2, IntMat::from_i64(&[&[1]])).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let w = check_lifting_property(&proj, &b).unwrap();
        // the witness is ker(4_X) = X itself
        assert_eq!(w.source().order(), z4.order());
    }

    #[test]
    fn snake_witness_for_z6_onto_z2() {
        let z6 = make_finab(&[6]).unwrap();
        let z2 = make_finab(&[2]).unwrap();
        let proj = Morphism::new(z6, z2, IntMat::from_i64(&[&[1]])).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let w = check_lifting_property(&proj, &b).unwrap();
        // ker(2_X) = Z/2 inside Z/6, and the composite is epi
        assert_eq!(w.source().moduli(), &[big(2)]);
    }

    #[test]
    fn lift_already_exact_sequence() {
        // 0 -> Z/3 -> Z/9 -> Z/3 -> 0 with B = 2-primary: returned unchanged
        let z3 = make_finab(&[3]).unwrap();
        let z9 = make_finab(&[9]).unwrap();
        let inc = Morphism::new(z3.clone(), z9.clone(), IntMat::from_i64(&[&[3]])).unwrap();
        let proj = Morphism::new(z9.clone(), z3.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let lifted = lift_exact_complex(
            &[z3.clone(), z9.clone(), z3.clone()],
            &[inc.clone(), proj.clone()],
            &b,
        )
        .unwrap();
        assert!(lifted.comparisons.iter().all(|g| g.matrix() == Morphism::identity(g.source()).matrix()));
        assert!(lifted.maps[0].eq_morphism(&inc));
        assert!(lifted.maps[1].eq_morphism(&proj));
    }

    #[test]
    fn lift_z3_z6_z2_collapses_two_part() {
        // 0 -> Z/3 -> Z/6 -> Z/2 -> 0 in A/A_2 reads 0 -> Z/3 -> Z/3 -> 0 -> 0
        let z3 = make_finab(&[3]).unwrap();
        let z6 = make_finab(&[6]).unwrap();
        let z2 = make_finab(&[2]).unwrap();
        let inc = Morphism::new(z3.clone(), z6.clone(), IntMat::from_i64(&[&[2]])).unwrap();
        let proj = Morphism::new(z6.clone(), z2.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let lifted =
            lift_exact_complex(&[z3.clone(), z6, z2], &[inc, proj], &b).unwrap();
        assert_eq!(lifted.objects[0].moduli(), &[big(3)]);
        assert_eq!(lifted.objects[1].moduli(), &[big(3)]);
        assert!(lifted.objects[2].is_zero_object());
        assert!(lifted.maps[0].is_isomorphism().unwrap());
    }

    #[test]
    fn lift_zero_complex() {
        let zero = make_finab(&[]).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let lifted = lift_exact_complex(
            &[zero.clone(), zero.clone()],
            &[Morphism::zero(&zero, &zero)],
            &b,
        )
        .unwrap();
        assert!(lifted.objects.iter().all(|o| o.is_zero_object()));
    }

    #[test]
    fn non_exact_input_rejected() {
        // 0 -> Z/3 --0--> Z/3 -> 0 is not exact in A/A_2
        let z3 = make_finab(&[3]).unwrap();
        let b = SerrePredicate::s_torsion(&[2]);
        let r = lift_exact_complex(
            &[z3.clone(), z3.clone()],
            &[Morphism::zero(&z3, &z3)],
            &b,
        );
        assert!(matches!(r, Err(Error::InputNotExactInQuotient(_))));
    }
}
