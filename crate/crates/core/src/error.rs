use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} exceeds the safety cap {cap}")]
    ResourceCap {
        what: &'static str,
        value: String,
        cap: u64,
    },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("not a valid automorphism: {}", .0.join("; "))]
    InvalidAutomorphism(Vec<String>),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
