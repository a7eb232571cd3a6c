use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A derived parameter (alpha, beta, lambda) is degenerate, e.g. outside (0, 1).
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    /// A series could not be certified to the requested tolerance within the term cap.
    #[error("series truncation failed after {terms} terms (best remainder bound {achieved:e})")]
    Truncation { terms: u64, achieved: f64 },
    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge (estimate {estimate}, error estimate {error:e})")]
    Integration { estimate: f64, error: f64 },
    /// A computed quantity is not finite or violates an identity beyond tolerance.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// A numerical value together with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

impl Certified {
    pub fn exact(value: f64) -> Self {
        Certified { value, error: 0.0 }
    }
}
