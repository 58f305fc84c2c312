//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A matrix or vector entry was NaN or infinite.
    #[error("non-finite entry at position {0}")]
    NonFiniteInput(usize),

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// A matrix that must have full column rank does not, at the working tolerance.
    #[error("rank deficient: rank {rank} < {cols} columns ({context})")]
    RankDeficient {
        rank: usize,
        cols: usize,
        context: &'static str,
    },

    #[error("matrix is not symmetric within tolerance")]
    NotSymmetric,

    /// The right-hand side is not in the range of the constraint matrix.
    #[error("infeasible system")]
    Infeasible,

    /// A simplex pivot fell below the numerical safety threshold.
    #[error("numerical breakdown: pivot magnitude {0:.3e}")]
    NumericalBreakdown(f64),

    /// An exhaustive enumeration would exceed the configured cap.
    #[error("enumeration too large: {count} supports exceed cap {cap}")]
    TooLarge { count: u128, cap: u128 },

    /// Exhaustive search found nothing consistent up to the requested sparsity.
    #[error("no consistent solution up to sparsity {0}")]
    NoSolution(usize),

    #[error("domain error: {0}")]
    DomainError(String),

    /// An experiment cell produced no usable trials.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI's `--json-errors` output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFiniteInput(_) => "non_finite_input",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::NotSymmetric => "not_symmetric",
            Error::Infeasible => "infeasible",
            Error::NumericalBreakdown(_) => "numerical_breakdown",
            Error::TooLarge { .. } => "too_large",
            Error::NoSolution(_) => "no_solution",
            Error::DomainError(_) => "domain_error",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Parse(_) => "parse_error",
            Error::Io(_) => "io_error",
        }
    }
}
