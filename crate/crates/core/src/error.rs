use thiserror::Error;

use crate::states::ParseSpecError;

/// Errors produced by the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderExceeded { order: usize, max: usize },

    #[error("argument outside the function domain: {0}")]
    Domain(String),

    #[error("invalid state parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock truncation failed: tail mass {tail:.3e} still above {tolerance:.3e} at order {order}")]
    TruncationFailure { order: usize, tail: f64, tolerance: f64 },

    #[error("negative quadrature variance {0:.3e}; moments are inconsistent")]
    NegativeVariance(f64),

    #[error("{what} did not converge (last change {last_change:.3e}, budget exhausted)")]
    Nonconvergence { what: &'static str, last_change: f64 },

    #[error("x window too small: row {row} normalization deficit {deficit:.3e} exceeds {tolerance:.3e}")]
    WindowTooSmall { row: usize, deficit: f64, tolerance: f64 },

    #[error("no closed form for {0} states; use the numeric route")]
    NoClosedForm(&'static str),

    #[error("insufficient homodyne data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Parse(#[from] ParseSpecError),

    #[error("malformed dataset: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
