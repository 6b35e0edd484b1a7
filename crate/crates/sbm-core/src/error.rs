use thiserror::Error;

/// Error type shared by all evaluators and verifiers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum SbmError {
    /// Argument outside the mathematical domain of an evaluator.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid model or configuration parameter at construction time.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Adaptive quadrature stopped without reaching the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Numerical Laplace inversion failed its internal consistency check.
    #[error("laplace inversion failed at t={t:.6e}: residual {residual:.3e} exceeds {tol:.1e}")]
    InversionFailure { t: f64, residual: f64, tol: f64 },

    /// Rejection sampler ran out of retries (mis-tuned tilt).
    #[error("rejection sampler exceeded {0} retries")]
    RejectionOverflow(u64),

    /// A simulated path stayed inside the domain past the configured horizon.
    #[error("path did not exit the domain before t_max={0}")]
    HorizonExceeded(f64),

    /// Geometry construction failed (a witness ball poked outside the domain).
    #[error("domain geometry check failed: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, SbmError>;

pub(crate) fn require_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_nan() || value <= 0.0 {
        Err(SbmError::Domain(format!("{name} must be positive and finite, got {value}")))
    } else {
        Ok(value)
    }
}
