//! First-order quasi-phase-matched reference crystal.

use num_complex::Complex;
use serde::Serialize;

use crate::dispersion::Chi2Profile;
use crate::error::{Error, Result};
use crate::scalar::{sinc, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoledReference<T> {
    /// `|∫₀^L s(z) e^{iΔk̄₀z} dz| / L` for the ±1 square wave `s`.
    pub amplitude: T,
    /// `amplitude²`.
    pub probability: T,
    /// Infinite-length limit of `amplitude`: `(2/π) sin(π·duty)`.
    pub fourier_amplitude: T,
    /// `fourier_amplitude²`.
    pub fourier_probability: T,
    /// Λ differs from `2π/Δk̄₀` by more than 1%.
    pub period_mismatch: bool,
}

/// Integrates the square-wave-poled crystal `[0, L]` domain by domain.
pub fn poled_reference<T: Real>(
    mean_mismatch: T,
    period: T,
    duty: T,
    length: T,
) -> Result<PoledReference<T>> {
    if !(length > T::zero()) {
        return Err(Error::domain("crystal length must be positive"));
    }
    let profile = Chi2Profile::poled(T::one(), period, duty, T::zero())?;
    let ideal = T::TAU() / mean_mismatch.abs();
    let period_mismatch = (period - ideal).abs() > T::lit(0.01) * ideal;
    if period_mismatch {
        log::warn!(
            "poling period {period:e} m is not first-order for Δk̄₀ = {mean_mismatch:e} (ideal {ideal:e} m)"
        );
    }
    let mut edges = vec![T::zero()];
    edges.extend(profile.domain_walls(T::zero(), length));
    edges.push(length);
    let two = T::lit(2.0);
    let mut total = Complex::new(T::zero(), T::zero());
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let sign = profile.eval((a + b) / two);
        let seg = Complex::from_polar(
            (b - a) * sinc(mean_mismatch * (b - a) / two),
            mean_mismatch * (a + b) / two,
        );
        total += seg * sign;
    }
    let amplitude = total.norm() / length;
    let fourier_amplitude = two / T::PI() * (T::PI() * duty).sin().abs();
    Ok(PoledReference {
        amplitude,
        probability: amplitude * amplitude,
        fourier_amplitude,
        fourier_probability: fourier_amplitude * fourier_amplitude,
        period_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integer_periods_give_two_over_pi() {
        let dk = 1.742576483796981e6f64;
        let r = poled_reference(dk, 2.0 * PI / dk, 0.5, 20.0 * 2.0 * PI / dk).unwrap();
        assert!((r.amplitude - 2.0 / PI).abs() < 1e-12, "{}", r.amplitude);
        assert!((r.fourier_probability - 4.0 / (PI * PI)).abs() < 1e-15);
        assert!(!r.period_mismatch);
    }

    #[test]
    fn unpoled_is_sinc() {
        let (dk, l) = (1.7e6f64, 1e-4);
        let r = poled_reference(dk, 3.5e-6, 1.0, l).unwrap();
        assert!((r.amplitude - sinc(dk * l / 2.0).abs()).abs() < 1e-12);
        assert!(r.amplitude < 0.02);
        assert!(r.period_mismatch);
    }
}
