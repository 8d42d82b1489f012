use num_complex::Complex;
use thiserror::Error;

/// Failures of the oscillatory quadrature engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    /// Splitting the interval into phase-limited panels would exceed the panel budget.
    #[error(
        "phase budget exceeded: {required_panels} panels needed for {total_phase:.3e} rad, max_panels = {max_panels}"
    )]
    PhaseBudget {
        required_panels: usize,
        max_panels: usize,
        total_phase: f64,
    },
    /// Adaptive refinement ran out of panels before meeting the tolerance.
    #[error("tolerance not met with {panels} panels: best value {value} +/- {abs_error:.3e}")]
    NotConverged {
        value: Complex<f64>,
        abs_error: f64,
        panels: usize,
    },
    #[error("non-finite integrand sample at z = {z}")]
    NonFinite { z: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical input lies outside the domain of the model.
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    /// Sellmeier data could not be parsed or is inconsistent.
    #[error("dispersion data: {0}")]
    Data(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
