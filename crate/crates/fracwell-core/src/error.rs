use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Profile construction failed validation.
    #[error("layer construction failed: {reason} (near x = {x:.6e})")]
    Construction { x: f64, reason: String },

    /// A quadrature ran out of panel budget before reaching tolerance.
    /// Carries the best estimate obtained and its error estimate.
    #[error("quadrature did not converge: best {best:.17e}, error estimate {error_estimate:.3e}")]
    QuadratureNonConvergence { best: f64, error_estimate: f64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
