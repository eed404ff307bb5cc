//! The twisted polynomial ring k[F] with F a = a^p F, and the truncated
//! cokernel computations behind the degree-two extension groups of the
//! radicial and etale isogeny quotients of unipotent groups.

pub mod frobenius_maps;
pub mod twisted;
pub mod vmodule;

pub use frobenius_maps::{
    coker_f, coker_f_minus_id, injectivity_probe_f_pushforward, section_phi, section_rank,
    FrobeniusCokernel,
};
pub use twisted::{twisted_mul, TwistedPoly};
pub use vmodule::{ext_d_against_ga, random_nilpotent_vmodule, VModule};
