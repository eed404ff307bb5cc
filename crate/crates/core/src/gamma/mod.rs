//! Group cohomology of finite groups via the bar resolution, duality on
//! finite ell-groups, and bounded probes for cohomological dimension and
//! the homological dimension of categories of ell-primary modules.

pub mod bar;
pub mod dual;
pub mod group;
pub mod probe;

pub use bar::{group_cohomology, BarCoefficients, CohomologyGroup};
pub use dual::{ell_dual, trivial_gamma_module};
pub use group::FiniteGroup;
pub use probe::{cd_ell_probe, ell_primary_family, hd_gamma_mod_probe, CdProbe, HdGammaReport};
