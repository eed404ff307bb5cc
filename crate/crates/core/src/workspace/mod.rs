//! The workspace file format and task driver: line-oriented declarations
//! with JSON payloads, dispatching computations and verification suites,
//! and deterministic machine-readable reports.

pub mod model;
pub mod parse;
pub mod tasks;

pub use model::{parse_predicate_expr, Task, Workspace};
pub use parse::parse_workspace;
pub use tasks::{
    format_workspace, reports_to_json, run_full_verify, run_tasks, run_verify, Report,
    RunOptions,
};
