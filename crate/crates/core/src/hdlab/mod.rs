//! Bounded homological-dimension estimation and the verification suites
//! for the dimension formulas on the shipped realizations.

pub mod estimate;
pub mod quiver;
pub mod verify;

pub use estimate::{all_finab_up_to, hd_bounded, ExtRow, HdReport};
pub use quiver::{
    enumerate_b_subobjects, q_split, quiver_objects, quotient_ext1_vanishes,
    verify_quiver_example, QuiverExampleReport, QuiverObjects,
};
pub use verify::{verify_hdmax_inequality, verify_thm_hd, HdMaxReport, ThmHdReport};
