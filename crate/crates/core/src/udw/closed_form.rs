//! Closed-form amplitudes for inertial and uniformly accelerated detectors.

use num_complex::Complex;

use crate::amplitude::AmplitudeResult;
use crate::error::{Error, Result};
use crate::oscquad::{integrate, QuadConfig};
use crate::scalar::{sinc, Real};

use super::{
    b_coefficient, lorentz_gamma, window_integrand, DetectorSpec, FieldMode, Gap,
    SwitchingFunction, Trajectory,
};

fn check_velocity<T: Real>(v: T) -> Result<()> {
    if v.abs() < T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("|v| must be < 1, got {v}")))
    }
}

/// Inertial amplitude in the literature normalisation
/// `e^{ikx₀} sinc((Ω + γ(ω - kv))T) / (T √(πω))`.
/// Differs from [`inertial_window_integral`] by `b(ω)`, a `T²` scaling and
/// the sign of the offset phase.
pub fn inertial_closed_form<T: Real>(
    gap: T,
    omega: T,
    k: T,
    v: T,
    x0: T,
    half_width: T,
) -> Result<Complex<T>> {
    check_velocity(v)?;
    if !(half_width > T::zero()) || !(omega > T::zero()) {
        return Err(Error::domain("T and ω must be positive"));
    }
    let arg = (gap + lorentz_gamma(v) * (omega - k * v)) * half_width;
    let modulus = sinc(arg) / (half_width * (T::PI() * omega).sqrt());
    Ok(Complex::from_polar(modulus, k * x0))
}

/// Exact value of `∫_{-T}^{T} e^{iΩτ} e^{iωq(τ)} dτ`
/// for the inertial trajectory (right-moving mode, `k = ω`):
/// `e^{-iωx₀} 2T sinc((Ω + γω(1 - v))T)`.
pub fn inertial_window_integral<T: Real>(
    gap: T,
    omega: T,
    v: T,
    x0: T,
    half_width: T,
) -> Result<Complex<T>> {
    check_velocity(v)?;
    if !(half_width > T::zero()) {
        return Err(Error::domain("T must be positive"));
    }
    let arg = (gap + lorentz_gamma(v) * omega * (T::one() - v)) * half_width;
    let two_t = half_width + half_width;
    Ok(Complex::from_polar(two_t * sinc(arg), -omega * x0))
}

/// Infinite-time response of a uniformly accelerated detector, two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelClosedForm<T> {
    /// `|A/b|²` from the Planck form, `2π / (aΩ(e^{2πΩ/a} - 1))`.
    pub planck: T,
    /// `|A/b|²` from `a⁻² |Γ(-iΩ/a)|² e^{-πΩ/a}`.
    pub gamma: T,
    pub ln_planck: T,
    pub ln_gamma: T,
    /// `|A|² = (e^{2πΩ/a} - 1)⁻¹ / (2aΩω)` for `λ = |M| = 1`.
    pub probability: T,
}

/// `ln(e^x - 1)` without overflow.
fn ln_expm1<T: Real>(x: T) -> T {
    if x > T::one() {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// `ln sinh(y)` for `y > 0` without overflow.
fn ln_sinh<T: Real>(y: T) -> T {
    if y > T::one() {
        y - T::LN_2() + (-(-(y + y)).exp_m1()).ln()
    } else {
        y.sinh().ln()
    }
}

pub fn accel_closed_form<T: Real>(gap: T, omega: T, a: T) -> Result<AccelClosedForm<T>> {
    if !(gap > T::zero() && omega > T::zero() && a > T::zero()) {
        return Err(Error::domain(format!(
            "accelerated closed form needs Ω, ω, a > 0 (got {gap}, {omega}, {a})"
        )));
    }
    let b = gap / a;
    let x = T::TAU() * b;
    let ln_planck = T::TAU().ln() - (a * gap).ln() - ln_expm1(x);

    // |Γ(ib)|² = π / (b sinh πb); the factor (ω/a)^{iΩ/a} has unit modulus
    let pb = T::PI() * b;
    let ln_gamma_sq = T::PI().ln() - b.ln() - ln_sinh(pb);
    let ln_gamma = -(a.ln() + a.ln()) + ln_gamma_sq - pb;

    let ln_prob = -ln_expm1(x) - (T::lit(2.0) * a * gap * omega).ln();
    Ok(AccelClosedForm {
        planck: ln_planck.exp(),
        gamma: ln_gamma.exp(),
        ln_planck,
        ln_gamma,
        probability: ln_prob.exp(),
    })
}

/// Normalised Planck response `x / (e^x - 1)`, `x = 2πΩ/a`.
pub fn planck_response<T: Real>(gap: T, a: T) -> Result<T> {
    if !(gap > T::zero() && a > T::zero()) {
        return Err(Error::domain(format!(
            "planck_response needs Ω, a > 0 (got {gap}, {a})"
        )));
    }
    let x = T::TAU() * gap / a;
    if x > T::one() {
        let e = (-x).exp();
        Ok(x * e / -(-x).exp_m1())
    } else {
        Ok(x / x.exp_m1())
    }
}

/// Regularisation of the infinite window for [`accel_infinite_window`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelWindowConfig<T> {
    /// Value of the instantaneous phase rate over `a`, `(ω/a)e^{-aτ}`, at
    /// which the detector is switched on.
    pub onset_rate: T,
    /// Width of the smooth switch-on in units of `1/a`.
    pub rise: T,
}

impl<T: Real> Default for AccelWindowConfig<T> {
    fn default() -> Self {
        Self {
            onset_rate: T::lit(2e4),
            rise: T::one(),
        }
    }
}

/// Estimate of the infinite-time amplitude of a uniformly accelerated
/// detector from a window `[-T, T]`.
///
/// On the far past side the phase rate grows like `ωe^{-aτ}`; the detector is
/// switched on smoothly once that rate exceeds `onset_rate · a`, which
/// removes the spurious edge contribution. On the future side the trajectory
/// is asymptotically inertial and the remainder `∫_T^∞ e^{iΩτ} dτ` is taken
/// in the Abel sense, `i e^{iΩT} / Ω`.
pub fn accel_infinite_window<T: Real>(
    spec: &DetectorSpec<T>,
    a: T,
    mode: &FieldMode<T>,
    half_width: T,
    window: &AccelWindowConfig<T>,
    quad: &QuadConfig<T>,
) -> Result<AmplitudeResult<T>> {
    let Gap::Constant(gap) = spec.gap else {
        return Err(Error::domain(
            "accelerated window estimator needs a constant gap",
        ));
    };
    if !(gap > T::zero()) || !(half_width > T::zero()) {
        return Err(Error::domain("Ω and T must be positive"));
    }
    let trajectory = Trajectory::uniform_accel(a)?;
    let onset = (mode.omega / (a * window.onset_rate)).ln() / a;
    let start = onset.max(-half_width);
    let switching = SwitchingFunction::Plateau {
        start,
        end: half_width,
        rise: window.rise / a,
        fall: T::zero(),
    };
    let b = b_coefficient(spec, mode)?;
    let f = window_integrand(spec, &trajectory, &switching, mode, start, half_width);
    let mut r = integrate(&f, quad)?;
    let p = gap * half_width;
    r.value += Complex::new(-p.sin(), p.cos()) / gap;
    Ok(AmplitudeResult::new(b, r))
}
