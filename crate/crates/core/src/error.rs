//! Crate-wide error type. All fallible constructors and entry points return
//! [`Error`](enum@Error); internal arithmetic on already-validated values
//! panics instead, since a mismatch there is a bug rather than bad input.

use crate::field::FieldKind;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldKind, FieldKind),
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("input is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("twist scan exceeded cap {cap}; the map is not fiberwise surjective or the input is degenerate")]
    ScanCapExceeded { cap: i64 },
    #[error("chart condition failed: {0}")]
    ChartFailure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json parse error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(format!("line {}, column {}: {}", e.line(), e.column(), e))
    }
}
