use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation received a value outside its domain.
    #[error("{field} must be {requirement}")]
    Invalid {
        field: &'static str,
        requirement: String,
    },

    /// The config document could not be parsed.
    #[error("config parse error: {0}")]
    Parse(String),

    /// A closed form was evaluated outside the regime it was derived for.
    #[error("outside validity range of {model}: {reason}")]
    Validity { model: &'static str, reason: String },

    /// An iterative method did not reach its tolerance.
    #[error("{method} did not converge: {reason}")]
    NoConvergence {
        method: &'static str,
        reason: String,
    },

    /// The classical integrator drifted beyond the energy budget.
    #[error("unstable integration: relative energy drift {drift:.3e} per period exceeds {limit:.1e}")]
    Unstable { drift: f64, limit: f64 },

    /// Population reached the Fock-space cutoff.
    #[error("truncation overflow: population {population:.3e} at cutoff {cutoff}")]
    Truncation { population: f64, cutoff: usize },

    /// A trace did not contain a swap maximum.
    #[error("no swap detected within {duration:.6e} s")]
    NoSwap { duration: f64 },

    /// Measurement ingestion failed.
    #[error("measurement data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, requirement: impl Into<String>) -> Error {
    Error::Invalid {
        field,
        requirement: requirement.into(),
    }
}

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(field, "> 0"))
    }
}

pub(crate) fn require_non_negative(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(invalid(field, ">= 0"))
    }
}
