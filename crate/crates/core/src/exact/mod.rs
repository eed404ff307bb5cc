//! Exact linear algebra over the integers, residue rings and finite fields.
//!
//! This is the computational substrate for every hom/ext computation in the
//! crate: arbitrary-precision Smith normal form with unimodular transforms,
//! lattice kernels and exact solvers, a mod-n elimination for large bar
//! complexes, finite-field tables, and a subquotient calculus for maps
//! between finite abelian groups.

pub mod gf;
pub mod int_mat;
pub mod smith;
pub mod subquot;
pub mod zn;

pub use gf::{FiniteFieldMatrix, Gf, GfParams};
pub use int_mat::IntMat;
pub use smith::{
    cokernel_invariants, kernel_lattice, smith_normal_form, solve_exact, solve_modular,
    SmithDecomposition,
};
