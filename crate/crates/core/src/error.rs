use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    InvalidPrime(u32),
    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),
    #[error("invalid fractional ideal: {0}")]
    InvalidIdeal(String),
    #[error("{value} is not in {set}")]
    NotAMember { value: i64, set: String },
    #[error("term matrix entry ({row},{col}) has exponent {exponent} outside the semigroup")]
    SupportViolation { row: usize, col: usize, exponent: i64 },
    #[error("shift mismatch: {0}")]
    ShiftMismatch(String),
    #[error("finite-length certificate failed: degree {degree} has dimension {dim} beyond the window")]
    FiniteLength { degree: i64, dim: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not computed: {0}")]
    Incomplete(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
