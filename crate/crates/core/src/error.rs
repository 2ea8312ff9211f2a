use thiserror::Error;

/// Errors produced across the crate.
///
/// Trial indices carried by variants are 1-based, matching the trial
/// numbering used everywhere else in the public API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("success profile has no trials")]
    Empty,

    #[error("success probability p_{index} = {value} is outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("tail bound {0} is negative")]
    NegativeTail(f64),

    #[error("trial {0} has p = 1, its odds are infinite")]
    DegenerateTrial(usize),

    #[error("parameter `{name}` = {value} is out of range ({expected})")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid stopping payoff: {0}")]
    InvalidPayoff(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("trial {0} has p = 0 or p = 1, diagonal scaling is singular")]
    SingularScaling(usize),

    #[error("transition matrix for {trials} trials exceeds dense limit of {limit}")]
    MatrixTooLarge { trials: usize, limit: usize },

    #[error("minor order {order} exceeds matrix size {rows}x{cols}")]
    OrderTooLarge {
        order: usize,
        rows: usize,
        cols: usize,
    },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid range: ell = {ell}, m = {m}")]
    BadRange { ell: usize, m: usize },

    #[error("g differs from h + w f by {0:e}")]
    BadDecomposition(f64),

    #[error("w = {0} is outside [0, 1)")]
    BadW(f64),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
