use num_complex::Complex;

use crate::oscquad::QuadResult;
use crate::scalar::Real;

/// First-order amplitude together with the quadrature diagnostics of the
/// underlying integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeResult<T> {
    /// Prefactor times integral.
    pub amplitude: Complex<T>,
    /// Error bound on `amplitude`.
    pub abs_error: T,
    /// The bare integral, before the prefactor.
    pub integral: Complex<T>,
    pub quad: QuadResult<T>,
}

impl<T: Real> AmplitudeResult<T> {
    pub(crate) fn new(prefactor: Complex<T>, quad: QuadResult<T>) -> Self {
        Self {
            amplitude: prefactor * quad.value,
            abs_error: prefactor.norm() * quad.abs_error,
            integral: quad.value,
            quad,
        }
    }

    /// `|A|²`.
    pub fn probability(&self) -> T {
        self.amplitude.norm_sqr()
    }
}
