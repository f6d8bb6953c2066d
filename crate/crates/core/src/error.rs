use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManaError {
    #[error("invalid dimension {0}: qudit dimensions must be odd and at least 3")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("{name} = {value} is outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("dimension {d} exceeds the configured cap {cap}")]
    CapExceeded { d: usize, cap: usize },

    #[error("hypergeometric series does not terminate: first parameter {0} is not a nonpositive integer")]
    NonTerminating(f64),

    #[error("hypergeometric series has a pole: c = {0}")]
    HypergeometricPole(f64),

    #[error("outside the regime of validity: {0}")]
    OutOfRegime(String),

    #[error("csv output failed: {0}")]
    Csv(String),
}

impl ManaError {
    pub(crate) fn out_of_range(name: &'static str, value: f64, range: impl Into<String>) -> Self {
        ManaError::OutOfRange {
            name,
            value,
            range: range.into(),
        }
    }
}

impl From<csv::Error> for ManaError {
    fn from(e: csv::Error) -> Self {
        ManaError::Csv(e.to_string())
    }
}

impl From<std::io::Error> for ManaError {
    fn from(e: std::io::Error) -> Self {
        ManaError::Csv(e.to_string())
    }
}

pub type Result<T, E = ManaError> = std::result::Result<T, E>;
