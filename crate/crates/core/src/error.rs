//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a {expected}x{expected} matrix, got {actual}x{actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian: max |m - m^dag| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace is not one: |tr - 1| = {deviation:.3e} exceeds {tolerance:.3e}")]
    TraceNotOne { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} < -{tolerance:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tolerance: f64 },

    #[error("eigenvalue {eigenvalue:.3e} is negative beyond the entropy clamp window")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("invalid {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error(
        "bath coefficients lost positivity at omega={omega}, T={temperature}: A={a:.6e}, B={b:.6e}"
    )]
    CoefficientPositivity {
        omega: f64,
        temperature: f64,
        a: f64,
        b: f64,
    },

    #[error("state validation failed during integration at tau = {tau}: {source}")]
    Integration {
        tau: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("weak measurement reversal post-selection has vanishing probability")]
    DegeneratePostSelection,

    #[error("entropic uncertainty relation violated: L = {l} but R = {r}")]
    UncertaintyViolation { l: f64, r: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }

    /// Wraps a validation failure with the proper time at which it occurred.
    pub(crate) fn at_tau(self, tau: f64) -> Self {
        Error::Integration {
            tau,
            source: Box::new(self),
        }
    }
}
