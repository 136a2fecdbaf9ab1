//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by scalar arithmetic, Grassmann algebra, graph
/// construction, and the recurrence engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("inexact division: {0}")]
    NotExact(String),
    #[error("not a perfect square: {0}")]
    NonSquare(String),
    #[error("variable `{0}` has no assignment")]
    UnassignedVariable(String),
    #[error("variable `{0}` is assigned zero")]
    ZeroAssignment(String),
    #[error("invalid slope {0}/{1}: need coprime p, q with 0 < p <= q")]
    InvalidSlope(u32, u32),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("invalid algebra context: {0}")]
    InvalidContext(String),
    #[error("expected an even (commuting) element, found odd terms in `{0}`")]
    NotEven(String),
    #[error("supermatrix parity violation at entry ({row},{col})")]
    ParityViolation { row: usize, col: usize },
    #[error("tile interval [{0},{1}] out of range for a {2}-tile graph")]
    IntervalOutOfRange(usize, usize, usize),
    #[error("graph too large for exhaustive enumeration: {0} tiles (limit {1})")]
    SizeLimit(usize, usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
