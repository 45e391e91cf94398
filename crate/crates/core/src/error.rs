//! Error type shared by the closed-form layer.

use thiserror::Error;

/// Errors from the game kernel and large-system formulas.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// An argument is outside the domain of the operation.
    #[error("{name} must satisfy {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// The optimum-SIR equation has no sign change inside the search bracket,
    /// which means the efficiency curve is not in its sigmoidal regime.
    #[error("f - gamma*f' has no sign change in [{lo}, {hi}]; efficiency model is not sigmoidal")]
    NotBracketed { lo: f64, hi: f64 },

    /// The root finder stopped with a residual above its tolerance.
    #[error("root residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    /// The load profile violates (or sits numerically on) the feasibility
    /// boundary of the requested receiver.
    #[error("infeasible load for {receiver} receiver: margin {margin:e}")]
    Infeasible {
        receiver: &'static str,
        margin: f64,
    },

    /// A class index does not refer to an entry of the profile.
    #[error("class index {index} out of range for {len} classes")]
    ClassIndex { index: usize, len: usize },

    /// A structural invariant of an input collection is violated.
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

/// Domain guard: `value` must be finite and satisfy `ok`.
pub(crate) fn check<T: crate::scalar::Real>(
    name: &'static str,
    requirement: &'static str,
    value: T,
    ok: bool,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(CoreError::Domain {
            name,
            requirement,
            value: value.as_f64(),
        })
    }
}
