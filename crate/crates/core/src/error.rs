use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("empty operator list")]
    Empty,
    #[error("expected {expected} operators, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("operator {index} is not a unit-trace rank-1 projector (residual {residual:e})")]
    NotProjector { index: usize, residual: f64 },
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not orthogonal (residual {0:e})")]
    NotOrthogonal(f64),
    #[error("basis is not orthonormal (residual {0:e})")]
    NotOrthonormal(f64),
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rank verdict unstable at the tolerance boundary (relative gap {gap:e})")]
    UnstableRank { gap: f64 },
    #[error("dimension {d} unsupported: {reason}")]
    Unsupported { d: usize, reason: String },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("partition has {parts} nonzero parts, more than d = {d}")]
    TooManyParts { parts: usize, d: usize },
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
