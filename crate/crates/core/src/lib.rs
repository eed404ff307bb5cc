//! Exact homological algebra on finite module categories.
//!
//! The engine computes with finitely presented modules over base rings that
//! are free of finite rank over the integers or a finite field: finite
//! abelian groups, finite modules over an integral group ring, and
//! representations of the two-vertex quiver `1 -> 2`. On top of the module
//! layer it provides torsion pairs and Serre-quotient machinery, localized
//! Hom/Ext, group cohomology via the bar complex, twisted polynomial ring
//! computations, and bounded homological-dimension reports.
//!
//! Everything is exact: integer matrices use arbitrary precision, finite
//! field entries are canonical representatives, and no floating point
//! appears anywhere.

pub mod dieudonne;
pub mod error;
pub mod exact;
pub mod gamma;
pub mod hdlab;
pub mod modcat;
pub mod serre;
pub mod workspace;

pub use error::Error;
