use thiserror::Error;

/// Errors surfaced by the engine. Variants mirror the failure modes of the
/// individual operations; most are precondition violations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("congruence system has no solution")]
    Unsolvable,
    #[error("invalid invariant factor {0} (factors must be positive)")]
    InvalidFactors(String),
    #[error("operands live over different base rings")]
    BaseMismatch,
    #[error("matrices do not define a group action: {0}")]
    NotAnAction(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("subobject search cap exceeded ({0})")]
    SearchExhausted(String),
    #[error("lifting property could not be verified: {0}")]
    LiftingPropertyUnverified(String),
    #[error("no lifting witness exists for the given epimorphism")]
    NoWitness,
    #[error("input complex is not exact in the quotient category: {0}")]
    InputNotExactInQuotient(String),
    #[error("computation exceeds the desk-scale budget: {0}")]
    BudgetExceeded(String),
    #[error("module is not ell-primary: {0}")]
    NotEllPrimary(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error at line {line}: {msg}")]
    Validation { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
