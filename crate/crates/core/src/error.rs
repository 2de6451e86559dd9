use thiserror::Error;

/// Errors raised by the classification engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero vector has no primitivity")]
    ZeroVector,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("invalid weight-degree constellation: {0}")]
    InvalidConstellation(String),

    #[error("unsupported type ({d},{c}): codimension must be 1, 2 or 3 over dimension 3")]
    UnsupportedType { d: usize, c: usize },

    #[error("invalid torsion group: {0}")]
    InvalidGroup(String),

    #[error("group of order {order} exceeds the automorphism capacity {limit}")]
    GroupTooLarge { order: u64, limit: u64 },

    #[error("inconsistent degree data: {0}")]
    InvalidDegreeMatrix(String),

    #[error("value {0} has no single-character identifier code")]
    IdCode(u64),

    #[error("invariant check failed for {family}: {detail}")]
    Invariant { family: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
