use thiserror::Error;

/// Errors produced by the Casimir computations and the material database.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("material database line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("material `{record}`: field `{field}` {reason}")]
    Validation {
        record: String,
        field: &'static str,
        reason: String,
    },

    #[error("material `{0}` is tabulated; an explicit m=0 policy (plasma-like or drude-like) is required")]
    MissingM0Policy(String),

    #[error("quadrature did not converge on [{lower}, {upper}]: error {abs_error:e} after {intervals} intervals")]
    Convergence {
        lower: f64,
        upper: f64,
        abs_error: f64,
        intervals: usize,
    },

    #[error("outside model validity: {0}")]
    OutOfModel(String),
}

pub type Result<T> = std::result::Result<T, CasimirError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> CasimirError {
    CasimirError::InvalidArgument {
        name,
        reason: reason.into(),
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}
