//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the numerical layers and the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument lies outside the documented numerically supported band.
    #[error("range error: {0}")]
    Range(String),

    /// Adaptive quadrature hit its subdivision cap before meeting the tolerance.
    #[error("quadrature did not converge: best estimate {best} with error estimate {abs_error}")]
    Quadrature {
        /// Best estimate available when the cap was reached.
        best: f64,
        /// Error estimate attached to `best`.
        abs_error: f64,
    },

    /// An iterative solver (series, continued fraction, root finder) failed to converge.
    #[error("iteration did not converge: {0}")]
    Convergence(String),

    /// A requested target lies outside the attainable range of a Legendre transform.
    #[error("value {value} outside the attainable interval ({lo}, {hi})")]
    Saturation {
        /// Requested value.
        value: f64,
        /// Lower end of the attainable interval.
        lo: f64,
        /// Upper end of the attainable interval.
        hi: f64,
    },

    /// A certified truncation budget could not be met.
    #[error("truncation budget exceeded: {0}")]
    Budget(String),

    /// Invalid run configuration (command-line layer).
    #[error("configuration error: {0}")]
    Config(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
