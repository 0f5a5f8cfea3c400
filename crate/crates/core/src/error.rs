use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("coefficient of degree {degree} lies outside the valid window (valid through {valid_to})")]
    OutsideWindow { degree: i64, valid_to: i64 },
    #[error("series error: {0}")]
    Series(String),
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("group of order {0} is too large for enumeration")]
    GroupTooLarge(u64),
    #[error("operators T{0} and T{1} do not commute")]
    NonCommuting(usize, usize),
    #[error("complex is not acyclic; cohomology representatives are required")]
    NotAcyclic,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
