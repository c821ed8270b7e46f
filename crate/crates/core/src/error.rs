use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {0} is outside 1..=64")]
    BadDimension(u32),
    #[error("word {bits:#x} has bits beyond dimension {n}")]
    WordOutOfRange { bits: u64, n: u32 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("matrix shapes do not conform: {0}x{1} times {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("vertex {0} is not a valid Y_n vertex: {1}")]
    NotYVertex(String, &'static str),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("characteristic vector entry {0} at index {1} is not 0/1")]
    NotZeroOne(i64, usize),
    #[error("set is not independent: {0} ~ {1}")]
    NotIndependent(String, String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed certificate: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
