use alloc::string::String;

/// Errors raised by the exact core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("radicand {0} does not fit in a machine word")]
    RadicandOverflow(String),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("dimensions must be at least 2x2, got {0}x{1}")]
    DimensionTooSmall(usize, usize),
    #[error("index ({0}, {1}) out of range")]
    IndexOutOfRange(usize, usize),
    #[error("not simple/diagonal: form has cross monomials")]
    NotDiagonal,
    #[error("not simple: {0}")]
    NotSimple(String),
    #[error("not PSD-diagonal: coefficient of cell ({0}, {1}) is negative")]
    NotPsdDiagonal(usize, usize),
    #[error("nonpositive coefficient on support cell ({0}, {1})")]
    NonPositiveCoefficient(usize, usize),
    #[error("coefficient of cell ({0}, {1}) is not rational")]
    IrrationalCoefficient(usize, usize),
    #[error("degenerate rectangle: row indices and column indices must each be distinct")]
    DegenerateIndices,
    #[error("indefinite split: c < 0")]
    IndefiniteSplit,
    #[error("case-3 permutation search exhausted")]
    PermutationSearchExhausted,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
