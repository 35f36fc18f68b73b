use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QrError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix {name} is not symmetric at ({i},{j})")]
    Asymmetric { name: String, i: usize, j: usize },
    #[error("zero direction")]
    ZeroDirection,
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("mixed exact/float arithmetic")]
    MixedMode,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("implication violated: {0}")]
    ImplicationViolated(String),
    #[error("alternative violated: {0}")]
    AlternativeViolated(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QrError>;
