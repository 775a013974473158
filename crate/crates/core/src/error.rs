use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field width {0} out of range (expected 1..=16)")]
    WidthOutOfRange(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("polynomial is not irreducible over the base field")]
    NotIrreducible,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("evaluation points are not linearly independent over the base field")]
    DependentPoints,
    #[error("graph sampling failed after {0} tries")]
    SamplingFailed(usize),
    #[error("no graph without 4-cycles exists for these degrees: {0}")]
    GirthInfeasible(String),
    #[error("parity-check matrix is rank deficient ({rank} < {rows})")]
    RankDeficientParity { rank: usize, rows: usize },
    #[error("duplicate coordinate index {0}")]
    DuplicateIndex(usize),
    #[error("coordinate index {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("only {available} independent local checks available, {requested} requested")]
    NotEnoughChecks { available: usize, requested: usize },
    #[error("no sign change found while bracketing the root")]
    NoSignChange,
    #[error("internal error: {0}")]
    Internal(String),
    #[error("malformed artifact: {0}")]
    Artifact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
