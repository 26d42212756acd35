use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("exponent {exponent} is at or beyond the truncation {truncation}")]
    BeyondTruncation { exponent: Rational, truncation: Rational },
    #[error("non-integral exponent {0}")]
    NonIntegralExponent(Rational),
    #[error("insufficient precision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: Rational, available: Rational },
    #[error("Gamma ratio pole at {0}")]
    GammaPole(Rational),
    #[error("inconsistent coset data: {0}")]
    InconsistentCosets(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("value is not rational: {0}")]
    Irrational(String),
    #[error("series did not converge after {0} terms")]
    NoConvergence(usize),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("degenerate point: vector {0} is orthogonal to the chosen line")]
    DegeneratePoint(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("cache I/O: {0}")]
    Io(String),
    #[error("malformed table file: {0}")]
    MalformedTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
