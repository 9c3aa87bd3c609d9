use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("entries do not sum to zero (sum = {0:e})")]
    NotTraceless(f64),

    #[error("point lies outside the closed positive chamber: {0}")]
    OutsideChamber(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix does not have determinant one (det = {0})")]
    NotUnimodular(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed sequence description: {0}")]
    MalformedSpec(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("enumeration methods disagree: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
