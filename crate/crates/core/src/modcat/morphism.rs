use super::module::PresentedModule;
use super::ring::RingElem;
use crate::error::{Error, Result};
use crate::exact::int_mat::{vec_mod, IntMat};
use crate::exact::subquot::{self, FinMap};
use num_bigint::BigInt;
use num_traits::Zero;

/// A morphism of presented modules, stored on canonical coordinates
/// (rows reduced mod the target moduli). Construction checks
/// well-definedness and compatibility with the ring action.
#[derive(Clone)]
pub struct Morphism {
    source: PresentedModule,
    target: PresentedModule,
    mat: IntMat,
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Morphism({:?} -> {:?})", self.source, self.target)
    }
}

fn reduce_rows(mut mat: IntMat, moduli: &[BigInt]) -> IntMat {
    for (r, d) in moduli.iter().enumerate() {
        mat.reduce_row_mod(r, d);
    }
    mat
}

impl Morphism {
    /// Construct and verify: the matrix must define a homomorphism of the
    /// underlying groups that commutes with every ring basis action.
    pub fn new(source: PresentedModule, target: PresentedModule, mat: IntMat) -> Result<Morphism> {
        if source.ring() != target.ring() {
            return Err(Error::BaseMismatch);
        }
        assert_eq!(mat.rows(), target.rank());
        assert_eq!(mat.cols(), source.rank());
        let mat = reduce_rows(mat, target.moduli());
        let f = Morphism { source, target, mat };
        f.check_well_defined()?;
        Ok(f)
    }

    /// Internal constructor for maps known to be valid by construction.
    pub(crate) fn new_unchecked(
        source: PresentedModule,
        target: PresentedModule,
        mat: IntMat,
    ) -> Morphism {
        let mat = reduce_rows(mat, target.moduli());
        let f = Morphism { source, target, mat };
        debug_assert!(f.check_well_defined().is_ok(), "invalid unchecked morphism");
        f
    }

    fn check_well_defined(&self) -> Result<()> {
        let fin = self.fin_map();
        if !fin.is_well_defined() {
            return Err(Error::Invalid("matrix does not respect the invariant factors".into()));
        }
        let n = self.source.ring().rank();
        for b in 0..n {
            let lhs = self.target.scalar().actions[b].mul(&self.mat);
            let rhs = self.mat.mul(&self.source.scalar().actions[b]);
            let lhs = reduce_rows(lhs, self.target.moduli());
            let rhs = reduce_rows(rhs, self.target.moduli());
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "matrix does not commute with ring basis element {b}"
                )));
            }
        }
        Ok(())
    }

    /// Construct from a matrix of ring elements on presentation generators
    /// (entry (s, t) is the coefficient of target generator s in the image
    /// of source generator t). Verifies that relations map into relations.
    pub fn from_generator_matrix(
        source: PresentedModule,
        target: PresentedModule,
        entries: &[Vec<RingElem>],
    ) -> Result<Morphism> {
        if source.ring() != target.ring() {
            return Err(Error::BaseMismatch);
        }
        let ring = source.ring().clone();
        let n = ring.rank();
        let (g_src, g_dst) = (source.generators(), target.generators());
        if entries.len() != g_dst || entries.iter().any(|row| row.len() != g_src) {
            return Err(Error::DimMismatch(format!(
                "generator matrix must be {g_dst} x {g_src}"
            )));
        }
        // scalar-level map: column (t, b) is the image of basis b times gen t
        let mut scalar = IntMat::zero(g_dst * n, g_src * n);
        for t in 0..g_src {
            for b in 0..n {
                for s in 0..g_dst {
                    let coords = ring.left_reg(b).mul_vec(&entries[s][t]);
                    for (r, v) in coords.into_iter().enumerate() {
                        scalar.set(s * n + r, t * n + b, v);
                    }
                }
            }
        }
        // relations of the source must land in the relation lattice of the target
        for rel in source.relations() {
            let mut col = Vec::with_capacity(g_src * n);
            for elem in rel {
                col.extend(elem.iter().cloned());
            }
            let image = scalar.mul_vec(&col);
            let coords = target.scalar().canon.coords(&image);
            if coords.iter().any(|c| !c.is_zero()) {
                return Err(Error::Invalid(
                    "matrix does not map source relations into target relations".into(),
                ));
            }
        }
        // canonical matrix: to_canon_Y ∘ scalar ∘ from_canon_X
        let mid = scalar.mul(&source.scalar().canon.from_canon);
        let mut mat = IntMat::zero(target.rank(), source.rank());
        for c in 0..source.rank() {
            let coords = target.scalar().canon.coords(&mid.col(c));
            for (r, v) in coords.into_iter().enumerate() {
                mat.set(r, c, v);
            }
        }
        Ok(Morphism { mat: reduce_rows(mat, target.moduli()), source, target })
    }

    /// Express the morphism as a matrix of ring elements on presentation
    /// generators (one valid representative).
    pub fn to_generator_matrix(&self) -> Vec<Vec<RingElem>> {
        let ring = self.source.ring();
        let n = ring.rank();
        let (g_src, g_dst) = (self.source.generators(), self.target.generators());
        let mut out = vec![vec![ring.zero_elem(); g_src]; g_dst];
        for t in 0..g_src {
            let coords = self.source.generator_coords(t);
            let image = vec_mod(&self.mat.mul_vec(&coords), self.target.moduli());
            let lift = self.target.scalar().canon.lift(&image);
            for s in 0..g_dst {
                out[s][t] = lift[s * n..(s + 1) * n].to_vec();
            }
        }
        out
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn fin_map(&self) -> FinMap {
        FinMap::new(self.source.moduli().to_vec(), self.target.moduli().to_vec(), self.mat.clone())
    }

    pub fn identity(module: &PresentedModule) -> Morphism {
        Morphism::new_unchecked(module.clone(), module.clone(), IntMat::identity(module.rank()))
    }

    pub fn zero(source: &PresentedModule, target: &PresentedModule) -> Morphism {
        Morphism::new_unchecked(
            source.clone(),
            target.clone(),
            IntMat::zero(target.rank(), source.rank()),
        )
    }

    /// Multiplication by an integer as an endomorphism.
    pub fn mul_by_int(module: &PresentedModule, c: i64) -> Morphism {
        let m = module.rank();
        let mat = IntMat::from_fn(m, m, |i, j| {
            if i == j {
                BigInt::from(c)
            } else {
                BigInt::zero()
            }
        });
        Morphism::new_unchecked(module.clone(), module.clone(), mat)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        vec_mod(&self.mat.mul_vec(v), self.target.moduli())
    }

    /// self ∘ other
    pub fn compose(&self, other: &Morphism) -> Morphism {
        assert!(other.target.same_canonical_form(&self.source), "composition mismatch");
        Morphism::new_unchecked(
            other.source.clone(),
            self.target.clone(),
            self.mat.mul(&other.mat),
        )
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        let mat = IntMat::from_fn(self.mat.rows(), self.mat.cols(), |i, j| {
            self.mat.at(i, j) + other.mat.at(i, j)
        });
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), mat)
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        let mat = IntMat::from_fn(self.mat.rows(), self.mat.cols(), |i, j| {
            self.mat.at(i, j) - other.mat.at(i, j)
        });
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), mat)
    }

    pub fn scale(&self, c: &BigInt) -> Morphism {
        let mat =
            IntMat::from_fn(self.mat.rows(), self.mat.cols(), |i, j| c * self.mat.at(i, j));
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), mat)
    }

    pub fn is_zero(&self) -> bool {
        self.fin_map().is_zero_map()
    }

    pub fn eq_morphism(&self, other: &Morphism) -> bool {
        self.sub(other).is_zero()
    }

    pub fn is_epi(&self) -> Result<bool> {
        Ok(subquot::cokernel(&self.fin_map()).moduli().is_empty())
    }

    pub fn is_mono(&self) -> Result<bool> {
        Ok(subquot::kernel(&self.fin_map())?.moduli().is_empty())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.source.order() == self.target.order() && self.is_epi()?)
    }
}

/// Kernel as a presented module with its canonical inclusion.
pub fn kernel(f: &Morphism) -> Result<(PresentedModule, Morphism)> {
    let sub = subquot::kernel(&f.fin_map())?;
    let data = submodule_data(f.source(), sub)?;
    Ok((data.module, data.inclusion))
}

/// A submodule realized as a presented module: the module itself, its
/// inclusion, plus the data needed to coordinatize ambient elements.
pub(crate) struct SubmoduleData {
    pub module: PresentedModule,
    pub inclusion: Morphism,
    pub subgroup: subquot::Subgroup,
    pub to_internal: IntMat,
}

impl SubmoduleData {
    /// Module coordinates of an ambient vector lying in the submodule.
    pub fn coords(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let raw = self.subgroup.coords(v)?;
        Ok(vec_mod(&self.to_internal.mul_vec(&raw), self.module.moduli()))
    }
}

/// Build a presented module from an action-stable subgroup of the
/// canonical coordinates.
pub(crate) fn submodule_data(
    ambient: &PresentedModule,
    sub: subquot::Subgroup,
) -> Result<SubmoduleData> {
    let ring = ambient.ring().clone();
    let n = ring.rank();
    let gens = sub.gens();
    let k = gens.cols();
    // transport the action: coordinates of act_b * gen_c in the subgroup
    let mut actions = Vec::with_capacity(n);
    for b in 0..n {
        let mut act = IntMat::zero(k, k);
        for c in 0..k {
            let moved = ambient.scalar().actions[b].mul_vec(&gens.col(c));
            let coords = sub.coords(&vec_mod(&moved, ambient.moduli())).map_err(|_| {
                Error::Invalid("subgroup is not stable under the ring action".into())
            })?;
            for (r, v) in coords.into_iter().enumerate() {
                act.set(r, c, v);
            }
        }
        actions.push(act);
    }
    let build = PresentedModule::from_canonical(ring, sub.moduli(), &actions)?;
    let inclusion = Morphism::new_unchecked(
        build.module.clone(),
        ambient.clone(),
        gens.mul(&build.from_internal),
    );
    Ok(SubmoduleData {
        module: build.module,
        inclusion,
        subgroup: sub,
        to_internal: build.to_internal,
    })
}

pub(crate) fn submodule_from_subgroup(
    ambient: &PresentedModule,
    sub: subquot::Subgroup,
) -> Result<(PresentedModule, Morphism)> {
    let data = submodule_data(ambient, sub)?;
    Ok((data.module, data.inclusion))
}

/// Cokernel as a presented module with its canonical projection.
pub fn cokernel(f: &Morphism) -> Result<(PresentedModule, Morphism)> {
    quotient_by_finmap(f.target(), &f.fin_map())
}

pub(crate) fn quotient_by_finmap(
    ambient: &PresentedModule,
    f: &FinMap,
) -> Result<(PresentedModule, Morphism)> {
    let ring = ambient.ring().clone();
    let n = ring.rank();
    let q = subquot::cokernel(f);
    let proj = q.projection();
    let section = q.section();
    let mut actions = Vec::with_capacity(n);
    for b in 0..n {
        let lifted = ambient.scalar().actions[b].mul(&section);
        let act = proj.mat.mul(&lifted);
        actions.push(reduce_rows(act, q.moduli()));
    }
    let build = PresentedModule::from_canonical(ring, q.moduli(), &actions)?;
    let projection = Morphism::new_unchecked(
        ambient.clone(),
        build.module.clone(),
        build.to_internal.mul(&proj.mat),
    );
    Ok((build.module, projection))
}

/// Image as a presented module, with inclusion into the target and the
/// projection from the source. Verifies |image| * |kernel| = |source|.
pub fn image(f: &Morphism) -> Result<(PresentedModule, Morphism, Morphism)> {
    let sub = subquot::image(&f.fin_map())?;
    let data = submodule_data(f.target(), sub)?;
    let mut proj = IntMat::zero(data.module.rank(), f.source().rank());
    for c in 0..f.source().rank() {
        let mut unit = vec![BigInt::zero(); f.source().rank()];
        unit[c] = num_traits::One::one();
        let coords = data.coords(&f.apply(&unit))?;
        for (r, v) in coords.into_iter().enumerate() {
            proj.set(r, c, v);
        }
    }
    let projection = Morphism::new_unchecked(f.source().clone(), data.module.clone(), proj);
    // first isomorphism theorem audit
    let ker = subquot::kernel(&f.fin_map())?;
    let ker_order: BigInt = ker.moduli().iter().product();
    if data.module.order() * ker_order != f.source().order() {
        return Err(Error::Invalid("image/kernel order bookkeeping failed".into()));
    }
    Ok((data.module, data.inclusion, projection))
}

/// Given an epimorphism p: Y -> Q and a map q: Y -> W with ker(p) ⊆ ker(q),
/// the induced map Q -> W with h ∘ p = q.
pub fn factor_through_epi(p: &Morphism, q: &Morphism) -> Result<Morphism> {
    assert!(p.source().same_canonical_form(q.source()), "factoring sources differ");
    let middle = p.target();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..middle.rank() {
        let mut unit = vec![BigInt::zero(); middle.rank()];
        unit[c] = num_traits::One::one();
        let x = crate::exact::smith::solve_modular(p.matrix(), &unit, &middle.moduli().to_vec())?;
        cols.push(q.apply(&x));
    }
    let mat = IntMat::from_cols(q.target().rank(), &cols);
    let h = Morphism::new(middle.clone(), q.target().clone(), mat)?;
    if !h.compose(p).eq_morphism(q) {
        return Err(Error::Invalid("factorization does not commute (kernel not contained?)".into()));
    }
    Ok(h)
}

/// Corestrict f: X -> Y to a submodule K given by a monomorphism
/// incl: K -> Y containing the image of f.
pub fn corestrict(f: &Morphism, inclusion: &Morphism) -> Result<Morphism> {
    assert!(inclusion.target().same_canonical_form(f.target()), "corestriction targets differ");
    let k = inclusion.source();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..f.source().rank() {
        let mut unit = vec![BigInt::zero(); f.source().rank()];
        unit[c] = num_traits::One::one();
        let v = f.apply(&unit);
        let z = crate::exact::smith::solve_modular(
            inclusion.matrix(),
            &v,
            &f.target().moduli().to_vec(),
        )
        .map_err(|_| Error::Invalid("image is not contained in the submodule".into()))?;
        cols.push(z);
    }
    let mat = IntMat::from_cols(k.rank(), &cols);
    let h = Morphism::new(f.source().clone(), k.clone(), mat)?;
    debug_assert!(inclusion.compose(&h).eq_morphism(f));
    Ok(h)
}

/// Direct sum with injections and projections satisfying proj ∘ inj = id.
pub fn direct_sum(
    x: &PresentedModule,
    y: &PresentedModule,
) -> Result<(PresentedModule, [Morphism; 2], [Morphism; 2])> {
    if x.ring() != y.ring() {
        return Err(Error::BaseMismatch);
    }
    let ring = x.ring().clone();
    let n = ring.rank();
    let (mx, my) = (x.rank(), y.rank());
    let moduli: Vec<BigInt> = x.moduli().iter().chain(y.moduli()).cloned().collect();
    let mut actions = Vec::with_capacity(n);
    for b in 0..n {
        let ax = &x.scalar().actions[b];
        let ay = &y.scalar().actions[b];
        actions.push(IntMat::from_fn(mx + my, mx + my, |i, j| {
            if i < mx && j < mx {
                ax.at(i, j).clone()
            } else if i >= mx && j >= mx {
                ay.at(i - mx, j - mx).clone()
            } else {
                BigInt::zero()
            }
        }));
    }
    let build = PresentedModule::from_canonical(ring, &moduli, &actions)?;
    let sum = build.module.clone();
    let inj_x = {
        let block = IntMat::from_fn(mx + my, mx, |i, j| {
            if i == j {
                num_traits::One::one()
            } else {
                BigInt::zero()
            }
        });
        Morphism::new_unchecked(x.clone(), sum.clone(), build.to_internal.mul(&block))
    };
    let inj_y = {
        let block = IntMat::from_fn(mx + my, my, |i, j| {
            if i == j + mx {
                num_traits::One::one()
            } else {
                BigInt::zero()
            }
        });
        Morphism::new_unchecked(y.clone(), sum.clone(), build.to_internal.mul(&block))
    };
    let proj_x = {
        let block = IntMat::from_fn(mx, mx + my, |i, j| {
            if i == j {
                num_traits::One::one()
            } else {
                BigInt::zero()
            }
        });
        Morphism::new_unchecked(sum.clone(), x.clone(), block.mul(&build.from_internal))
    };
    let proj_y = {
        let block = IntMat::from_fn(my, mx + my, |i, j| {
            if i + mx == j {
                num_traits::One::one()
            } else {
                BigInt::zero()
            }
        });
        Morphism::new_unchecked(sum.clone(), y.clone(), block.mul(&build.from_internal))
    };
    debug_assert!(proj_x.compose(&inj_x).eq_morphism(&Morphism::identity(x)));
    debug_assert!(proj_y.compose(&inj_y).eq_morphism(&Morphism::identity(y)));
    Ok((sum, [inj_x, inj_y], [proj_x, proj_y]))
}

/// Submodule generated by a set of coordinate vectors (closed under the
/// ring action), with its inclusion.
pub fn submodule_generated(
    ambient: &PresentedModule,
    elements: &[Vec<BigInt>],
) -> Result<(PresentedModule, Morphism)> {
    let ring = ambient.ring();
    let n = ring.rank();
    let m = ambient.rank();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for v in elements {
        for b in 0..n {
            cols.push(ambient.scalar().actions[b].mul_vec(v));
        }
    }
    let lattice = IntMat::from_cols(m, &cols);
    let sub = subquot::Subgroup::from_lattice(ambient.moduli(), &lattice)?;
    submodule_from_subgroup(ambient, sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::module::make_finab;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn kernel_of_mult_by_two_on_z4() {
        let z4 = make_finab(&[4]).unwrap();
        let f = Morphism::mul_by_int(&z4, 2);
        let (k, inc) = kernel(&f).unwrap();
        assert_eq!(k.moduli(), &[big(2)]);
        assert!(f.compose(&inc).is_zero());
    }

    #[test]
    fn cokernel_of_zero_map() {
        let z6 = make_finab(&[6]).unwrap();
        let zero_obj = make_finab(&[]).unwrap();
        let f = Morphism::zero(&zero_obj, &z6);
        let (c, proj) = cokernel(&f).unwrap();
        assert_eq!(c.moduli(), &[big(6)]);
        assert!(proj.is_epi().unwrap());
    }

    #[test]
    fn image_of_map_z4_to_z6() {
        // 1 -> 3 : Z/4 -> Z/6 has image Z/2
        let z4 = make_finab(&[4]).unwrap();
        let z6 = make_finab(&[6]).unwrap();
        let f = Morphism::new(z4, z6, IntMat::from_i64(&[&[3]])).unwrap();
        let (im, inc, proj) = image(&f).unwrap();
        assert_eq!(im.moduli(), &[big(2)]);
        assert!(inc.compose(&proj).eq_morphism(&f));
    }

    #[test]
    fn direct_sum_with_crt() {
        let z2 = make_finab(&[2]).unwrap();
        let z3 = make_finab(&[3]).unwrap();
        let (sum, _inj, _proj) = direct_sum(&z2, &z3).unwrap();
        assert_eq!(sum.moduli(), &[big(6)]);
        // X + 0 = X
        let zero = make_finab(&[]).unwrap();
        let (sum, _, _) = direct_sum(&z2, &zero).unwrap();
        assert_eq!(sum.moduli(), &[big(2)]);
    }

    #[test]
    fn generator_matrix_round_trip() {
        let z4 = make_finab(&[4]).unwrap();
        let z6 = make_finab(&[6]).unwrap();
        let f = Morphism::new(z4.clone(), z6.clone(), IntMat::from_i64(&[&[3]])).unwrap();
        let gm = f.to_generator_matrix();
        let f2 = Morphism::from_generator_matrix(z4, z6, &gm).unwrap();
        assert!(f.eq_morphism(&f2));
    }
}
