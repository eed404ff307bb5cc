//! Serre subcategories and quotient-category machinery over any module
//! realization: torsion pairs, quotient hom-sets, zero/mono/epi tests in
//! the quotient, the lifting property, exact-complex lifting, and
//! S-localized Hom/Ext.

pub mod lifting;
pub mod localize;
pub mod predicate;
pub mod qcat;
pub mod torsion;

pub use lifting::{check_lifting_property, lift_exact_complex, LiftedComplex};
pub use localize::{localized_ext, localized_hom, LocalizedExt, LocalizedHom};
pub use predicate::{composition_factors, SerrePredicate};
pub use qcat::{q_hom, q_is_epi, q_is_mono, q_is_zero, QHomGroup, QMorphism};
pub use torsion::{largest_b_subobject, torsion_pair, TorsionPairResult};
