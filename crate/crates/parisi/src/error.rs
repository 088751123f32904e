//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the solver, the functional layer, and the Monte Carlo lab.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A mixture failed validation (empty, repeated degrees, negative weights, ...).
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    /// A measure failed validation (weights do not sum to one, atoms outside [0,1], ...).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// Grid or experiment parameters are unusable as configured.
    #[error("configuration error: {0}")]
    Config(String),

    /// A computation produced non-finite values.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
