//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Validation errors signal inputs violating a documented precondition;
/// resource errors signal work that would exceed a configured budget and
/// carry enough context to retry with a larger one.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented structural precondition.
    #[error("validation: {0}")]
    Validation(String),

    /// A matrix expected to be Hermitian is not, within tolerance.
    #[error("matrix `{label}` is not Hermitian: max asymmetry {max_asymmetry:.3e}")]
    NotHermitian { label: String, max_asymmetry: f64 },

    /// Requested work exceeds a configured budget.
    #[error("resource budget exceeded: {what} needs {needed}, budget {budget}")]
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },

    /// Iterative eigensolver failed to converge.
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    /// Gate synthesis could not reach the requested accuracy.
    #[error("synthesis fell short: requested {requested:.3e}, best achieved {achieved:.3e}")]
    SynthesisShortfall { requested: f64, achieved: f64 },

    /// Enumeration stopped early; partial results are attached.
    #[error("enumeration budget of {budget} nodes exhausted (best score so far {best_score:?})")]
    EnumerationBudget {
        budget: u64,
        best_score: Option<i64>,
    },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a validation error.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
