use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sequence not allowed here")]
    EmptySequence,

    #[error("index arithmetic overflows 64-bit range: {0}")]
    IndexOverflow(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {tol:.3e})")]
    NonHermitian { asymmetry: f64, tol: f64 },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: i64, n: usize },

    #[error("grid of {got} points is too coarse, need at least {need}")]
    GridTooCoarse { need: usize, got: usize },

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
