use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime below 2^62")]
    BadCharacteristic(u64),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is not symmetric")]
    NotSymmetric,

    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,

    #[error("characteristic {p} divides n = {n}")]
    CharDividesN { p: u64, n: usize },

    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("linear program too large: {cells} tableau cells exceeds cap {cap}")]
    LpTooLarge { cells: usize, cap: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
