//! The computable-abelian-category layer: finitely presented modules over
//! a base ring, morphisms, hom groups, kernels/cokernels/images, free
//! resolutions and Ext.
//!
//! Three realizations ship: finite abelian groups (over the integers),
//! finite modules over an integral group ring, and representations of the
//! quiver 1 -> 2 over a finite field. All of them reduce to exact integer
//! linear algebra on the scalar level.

pub mod ext;
pub mod hom;
pub mod module;
pub mod morphism;
pub mod resolution;
pub mod ring;

pub use ext::{ext_group, ext_group_cached, ExtGroup};
pub use hom::{hom_group, is_isomorphic, HomGroup};
pub use module::{make_finab, make_gamma_module, make_quiver_rep, quiver_dims, PresentedModule};
pub use morphism::{cokernel, direct_sum, image, kernel, submodule_generated, Morphism};
pub use resolution::{resolve, FreeResolution, ResolutionCache};
pub use ring::{BaseRing, RingElem, RingKind};
