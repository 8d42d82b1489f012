//! Unruh-DeWitt detector coupled to a massless scalar field in 1+1
//! dimensions (natural units, right-moving modes only).

mod closed_form;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::amplitude::AmplitudeResult;
use crate::error::{Error, Result};
use crate::oscquad::{integrate, integrate_real, OscillatoryIntegrand, QuadConfig, QuadResult};
use crate::scalar::{Real, RealFn};

pub use closed_form::{
    accel_closed_form, accel_infinite_window, inertial_closed_form, inertial_window_integral,
    planck_response, AccelClosedForm, AccelWindowConfig,
};

/// Detector worldline, described through the lightcone coordinate
/// `q(τ) = t(τ) - x(τ)`.
#[derive(Clone)]
pub enum Trajectory<T: Real> {
    /// `x = x₀ + v t`, `t = γ τ`.
    Inertial { velocity: T, offset: T },
    /// `x = cosh(aτ)/a`, `t = sinh(aτ)/a`.
    UniformAccel { a: T },
    /// Arbitrary `q(τ)` with optional derivative.
    Custom { q: RealFn<T>, dq: Option<RealFn<T>> },
}

impl<T: Real> fmt::Debug for Trajectory<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Inertial { velocity, offset } => f
                .debug_struct("Inertial")
                .field("velocity", velocity)
                .field("offset", offset)
                .finish(),
            Self::UniformAccel { a } => f.debug_struct("UniformAccel").field("a", a).finish(),
            Self::Custom { dq, .. } => f
                .debug_struct("Custom")
                .field("has_derivative", &dq.is_some())
                .finish_non_exhaustive(),
        }
    }
}

impl<T: Real> Trajectory<T> {
    pub fn inertial(velocity: T, offset: T) -> Result<Self> {
        if !(velocity.abs() < T::one()) {
            return Err(Error::domain(format!("|v| must be < 1, got {velocity}")));
        }
        Ok(Self::Inertial { velocity, offset })
    }

    pub fn uniform_accel(a: T) -> Result<Self> {
        if !(a > T::zero() && a.is_finite()) {
            return Err(Error::domain(format!(
                "acceleration must be positive, got {a}"
            )));
        }
        Ok(Self::UniformAccel { a })
    }

    pub fn custom<Q>(q: Q) -> Self
    where
        Q: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::Custom {
            q: Arc::new(q),
            dq: None,
        }
    }

    pub fn custom_with_derivative<Q, D>(q: Q, dq: D) -> Self
    where
        Q: Fn(T) -> T + Send + Sync + 'static,
        D: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::Custom {
            q: Arc::new(q),
            dq: Some(Arc::new(dq)),
        }
    }

    pub fn q(&self, tau: T) -> T {
        match self {
            Self::Inertial { velocity, offset } => {
                lorentz_gamma(*velocity) * (T::one() - *velocity) * tau - *offset
            }
            Self::UniformAccel { a } => -(-*a * tau).exp() / *a,
            Self::Custom { q, .. } => q(tau),
        }
    }

    /// `dq/dτ` when known analytically.
    pub fn dq(&self, tau: T) -> Option<T> {
        match self {
            Self::Inertial { velocity, .. } => {
                Some(lorentz_gamma(*velocity) * (T::one() - *velocity))
            }
            Self::UniformAccel { a } => Some((-*a * tau).exp()),
            Self::Custom { dq, .. } => dq.as_ref().map(|d| d(tau)),
        }
    }
}

pub(crate) fn lorentz_gamma<T: Real>(v: T) -> T {
    T::one() / (T::one() - v * v).sqrt()
}

/// Dimensionless switching function `η(τ)`.
#[derive(Clone)]
pub enum SwitchingFunction<T: Real> {
    /// 1 on `[start, end]`, 0 elsewhere.
    Rect { start: T, end: T },
    /// `exp(-(τ - center)² / (2 width²))`.
    Gaussian { center: T, width: T },
    /// Smooth (C^∞) rise over `rise` after `start`, smooth fall over `fall`
    /// before `end`. A zero ramp width gives a sharp edge.
    Plateau { start: T, end: T, rise: T, fall: T },
    Custom {
        eta: RealFn<T>,
        support: Option<(T, T)>,
    },
}

impl<T: Real> fmt::Debug for SwitchingFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rect { start, end } => write!(f, "Rect({start}, {end})"),
            Self::Gaussian { center, width } => write!(f, "Gaussian({center}, {width})"),
            Self::Plateau {
                start,
                end,
                rise,
                fall,
            } => write!(f, "Plateau({start}, {end}, {rise}, {fall})"),
            Self::Custom { support, .. } => write!(f, "Custom(support = {support:?})"),
        }
    }
}

/// C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
fn smooth_step<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x >= T::one() {
        return T::one();
    }
    let a = (-T::one() / x).exp();
    let b = (-T::one() / (T::one() - x)).exp();
    a / (a + b)
}

impl<T: Real> SwitchingFunction<T> {
    pub fn rect(start: T, end: T) -> Self {
        Self::Rect { start, end }
    }

    pub fn custom<F>(eta: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::Custom {
            eta: Arc::new(eta),
            support: None,
        }
    }

    pub fn eval(&self, tau: T) -> T {
        match self {
            Self::Rect { start, end } => {
                if tau >= *start && tau <= *end {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Self::Gaussian { center, width } => {
                let x = (tau - *center) / *width;
                (-x * x / T::lit(2.0)).exp()
            }
            Self::Plateau {
                start,
                end,
                rise,
                fall,
            } => {
                if tau < *start || tau > *end {
                    return T::zero();
                }
                let up = if *rise > T::zero() {
                    smooth_step((tau - *start) / *rise)
                } else {
                    T::one()
                };
                let down = if *fall > T::zero() {
                    smooth_step((*end - tau) / *fall)
                } else {
                    T::one()
                };
                up * down
            }
            Self::Custom { eta, .. } => eta(tau),
        }
    }

    /// Interval outside which `η` vanishes (to double precision for the
    /// Gaussian), if bounded.
    pub fn support(&self) -> Option<(T, T)> {
        match self {
            Self::Rect { start, end } | Self::Plateau { start, end, .. } => Some((*start, *end)),
            Self::Gaussian { center, width } => {
                let r = T::lit(40.0) * width.abs();
                Some((*center - r, *center + r))
            }
            Self::Custom { support, .. } => *support,
        }
    }
}

/// Detector energy gap.
#[derive(Clone)]
pub enum Gap<T: Real> {
    Constant(T),
    /// `Ω(τ)`, optionally with the antiderivative `∫₀^τ Ω(s) ds`.
    TimeDependent {
        omega: RealFn<T>,
        antiderivative: Option<RealFn<T>>,
    },
}

impl<T: Real> fmt::Debug for Gap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(w) => write!(f, "Constant({w})"),
            Self::TimeDependent { antiderivative, .. } => write!(
                f,
                "TimeDependent(antiderivative = {})",
                antiderivative.is_some()
            ),
        }
    }
}

impl<T: Real> Gap<T> {
    pub fn at(&self, tau: T) -> T {
        match self {
            Self::Constant(w) => *w,
            Self::TimeDependent { omega, .. } => omega(tau),
        }
    }

    /// Accumulated gap phase `∫₀^τ Ω(s) ds`.
    pub fn phase(&self, tau: T) -> T {
        match self {
            Self::Constant(w) => *w * tau,
            Self::TimeDependent {
                antiderivative: Some(p),
                ..
            } => p(tau),
            Self::TimeDependent { omega, .. } => {
                let cfg = QuadConfig {
                    rel_tol: T::lit(1e-13),
                    abs_tol: T::epsilon(),
                    ..QuadConfig::default()
                };
                integrate_real(|s| omega(s), T::zero(), tau, &cfg)
                    .map(|(v, _)| v)
                    .unwrap_or_else(|_| T::nan())
            }
        }
    }
}

/// Detector parameters: gap `Ω`, coupling `λ` and monopole element
/// `M = ⟨e|m(0)|g⟩`.
#[derive(Debug, Clone)]
pub struct DetectorSpec<T: Real> {
    pub gap: Gap<T>,
    pub coupling: T,
    pub monopole: Complex<T>,
}

impl<T: Real> DetectorSpec<T> {
    pub fn constant_gap(omega: T, coupling: T, monopole: Complex<T>) -> Self {
        if omega <= T::zero() {
            log::warn!("non-positive detector gap {omega}: de-excitation regime");
        }
        Self {
            gap: Gap::Constant(omega),
            coupling,
            monopole,
        }
    }

    /// `λ = 1`, `M = 1`.
    pub fn unit(omega: T) -> Self {
        Self::constant_gap(omega, T::one(), Complex::new(T::one(), T::zero()))
    }
}

/// Single-particle field state `|ω⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMode<T> {
    pub omega: T,
}

impl<T: Real> FieldMode<T> {
    pub fn new(omega: T) -> Result<Self> {
        if !(omega > T::zero() && omega.is_finite()) {
            return Err(Error::domain(format!(
                "field frequency must be positive, got {omega}"
            )));
        }
        Ok(Self { omega })
    }
}

/// `b(ω) = -iλM / √(4πω)`.
pub fn b_coefficient<T: Real>(spec: &DetectorSpec<T>, mode: &FieldMode<T>) -> Result<Complex<T>> {
    if !(mode.omega > T::zero()) {
        return Err(Error::domain(format!(
            "field frequency must be positive, got {}",
            mode.omega
        )));
    }
    let scale = spec.coupling / (T::lit(4.0) * T::PI() * mode.omega).sqrt();
    Ok(Complex::new(T::zero(), -scale) * spec.monopole)
}

/// Integrand `η(τ) exp(i(∫Ω + ω q(τ)))` on `[τ_i, τ_f]`.
pub fn window_integrand<T: Real>(
    spec: &DetectorSpec<T>,
    trajectory: &Trajectory<T>,
    switching: &SwitchingFunction<T>,
    mode: &FieldMode<T>,
    tau_i: T,
    tau_f: T,
) -> OscillatoryIntegrand<T> {
    let omega = mode.omega;
    let eta = switching.clone();
    let amp = move |tau: T| Complex::new(eta.eval(tau), T::zero());
    let (gap, traj) = (spec.gap.clone(), trajectory.clone());
    let phase = move |tau: T| gap.phase(tau) + omega * traj.q(tau);
    let f = OscillatoryIntegrand::new(amp, phase, tau_i, tau_f);
    if trajectory.dq(T::zero()).is_some() {
        let (gap, traj) = (spec.gap.clone(), trajectory.clone());
        f.with_derivative(move |tau| gap.at(tau) + omega * traj.dq(tau).unwrap_or(T::nan()))
    } else {
        f
    }
}

/// First-order transition amplitude `b(ω) ∫ η e^{i(∫Ω + ωq)} dτ` over the window
/// `[τ_i, τ_f]` intersected with the switching support.
pub fn transition_amplitude<T: Real>(
    spec: &DetectorSpec<T>,
    trajectory: &Trajectory<T>,
    switching: &SwitchingFunction<T>,
    mode: &FieldMode<T>,
    window: (T, T),
    quad: &QuadConfig<T>,
) -> Result<AmplitudeResult<T>> {
    let (mut lo, mut hi) = window;
    if !(lo < hi) {
        return Err(Error::domain(format!(
            "window must satisfy τ_i < τ_f, got [{lo}, {hi}]"
        )));
    }
    let b = b_coefficient(spec, mode)?;
    if let Some((s0, s1)) = switching.support() {
        lo = lo.max(s0);
        hi = hi.min(s1);
    }
    if lo >= hi {
        return Ok(AmplitudeResult::new(b, zero_quad()));
    }
    let f = window_integrand(spec, trajectory, switching, mode, lo, hi);
    let r = integrate(&f, quad)?;
    Ok(AmplitudeResult::new(b, r))
}

fn zero_quad<T: Real>() -> QuadResult<T> {
    QuadResult {
        value: Complex::new(T::zero(), T::zero()),
        abs_error: T::zero(),
        panels: 1,
        total_phase: T::zero(),
        fallback_panels: 0,
        roundoff_limited: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_coefficient_examples() {
        let m = FieldMode::new(1.0 / (4.0 * std::f64::consts::PI)).unwrap();
        let b = b_coefficient(&DetectorSpec::unit(1.0), &m).unwrap();
        assert!((b - Complex::new(0.0, -1.0)).norm() < 1e-15);

        let zero = DetectorSpec::constant_gap(1.0, 0.0, Complex::new(1.0, 0.0));
        assert_eq!(b_coefficient(&zero, &m).unwrap().norm(), 0.0);

        let spec = DetectorSpec::constant_gap(1.0f64, 1.0, Complex::new(0.0, 1.0));
        let b = b_coefficient(&spec, &FieldMode::new(1.0).unwrap()).unwrap();
        assert!((b.re - 0.28209479177387814).abs() < 1e-15 && b.im.abs() < 1e-16);

        assert!(FieldMode::new(0.0).is_err());
        let bad = FieldMode { omega: -1.0 };
        assert!(b_coefficient(&spec, &bad).is_err());
    }

    #[test]
    fn inertial_q_is_affine() {
        let t = Trajectory::inertial(0.6f64, 2.0).unwrap();
        // γ = 1.25, γ(1 - v) = 0.5
        assert!((t.q(0.0) + 2.0).abs() < 1e-15);
        assert!((t.q(4.0) - 0.0).abs() < 1e-15);
        assert!(Trajectory::inertial(1.0, 0.0).is_err());
    }

    #[test]
    fn accelerated_q_is_negative_and_increasing() {
        let t = Trajectory::uniform_accel(0.7).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in -50..50 {
            let q = t.q(i as f64 * 0.3);
            assert!(q < 0.0 && q > prev);
            prev = q;
        }
    }

    #[test]
    fn switching_kinds() {
        let r = SwitchingFunction::rect(-1.0, 1.0);
        assert_eq!(r.eval(0.5), 1.0);
        assert_eq!(r.eval(1.5), 0.0);
        let p = SwitchingFunction::Plateau {
            start: 0.0f64,
            end: 10.0,
            rise: 1.0,
            fall: 0.0,
        };
        assert_eq!(p.eval(-0.1), 0.0);
        assert!((p.eval(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(p.eval(2.0), 1.0);
        assert_eq!(p.eval(10.0), 1.0);
        let g = SwitchingFunction::Gaussian {
            center: 1.0,
            width: 2.0,
        };
        assert!((g.eval(3.0) - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn detector_off_gives_zero() {
        let spec = DetectorSpec::unit(1.0);
        let traj = Trajectory::inertial(0.2, 0.0).unwrap();
        let off = SwitchingFunction::custom(|_| 0.0);
        let mode = FieldMode::new(2.0).unwrap();
        let a = transition_amplitude(
            &spec,
            &traj,
            &off,
            &mode,
            (-5.0, 5.0),
            &QuadConfig::default(),
        )
        .unwrap();
        assert_eq!(a.amplitude, Complex::new(0.0, 0.0));
        let outside = SwitchingFunction::rect(10.0, 11.0);
        let a = transition_amplitude(
            &spec,
            &traj,
            &outside,
            &mode,
            (-5.0, 5.0),
            &QuadConfig::default(),
        )
        .unwrap();
        assert_eq!(a.amplitude, Complex::new(0.0, 0.0));
    }

    #[test]
    fn time_dependent_gap_phase() {
        let g: Gap<f64> = Gap::TimeDependent {
            omega: Arc::new(|s: f64| 1.0 + s),
            antiderivative: None,
        };
        assert!((g.phase(2.0) - 4.0).abs() < 1e-13);
        assert!((g.phase(-2.0) - 0.0).abs() < 1e-13);
    }
}
