//! Amplitude of a crystal with an exponential relative-inverse-group-velocity
//! gradient, the SPDC analogue of a uniformly accelerated detector.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::oscquad::{integrate, OscillatoryIntegrand, QuadConfig, QuadResult};
use crate::scalar::{sinc, Real};

/// Knobs of [`uniform_accel_amplitude`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelOptions<T> {
    /// Phase-rate ratio `u = (ΔΩ/a)e^{-az/v}` above which the integral is
    /// replaced by its integration-by-parts expansion.
    pub cut_rate: T,
    /// Longest crystal the model accepts (m); `None` disables the check.
    pub length_limit: Option<T>,
    /// `|a|L/v` below which the analytic sinc limit is used.
    pub sinc_threshold: T,
}

impl<T: Real> Default for AccelOptions<T> {
    fn default() -> Self {
        Self {
            cut_rate: T::lit(1e4),
            length_limit: Some(T::lit(100e-6)),
            sinc_threshold: T::lit(1e-8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccelBranch {
    /// Numerical quadrature over the whole crystal.
    Quadrature,
    /// Quadrature plus an asymptotic expansion over `[z_i, z_cut]`.
    Asymptotic,
    /// Closed-form `a → 0` limit.
    SincLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelAmplitude<T> {
    /// `∫_{z_i}^{z_f} exp(i(Ω̃z + ΔΩ q̃(z))) dz` with `q̃(z_i) = 0`, in m.
    /// When `global_phase_lost` is set the overall phase factor could not
    /// be represented and only the modulus is meaningful.
    pub integral: Complex<T>,
    /// `integral / L`, i.e. `A′_S / (iκ̃η̃L)`.
    pub normalized: Complex<T>,
    /// Error bound on `integral`.
    pub abs_error: T,
    pub branch: AccelBranch,
    pub cut: Option<T>,
    pub global_phase_lost: bool,
    pub quad: Option<QuadResult<T>>,
}

impl<T: Real> AccelAmplitude<T> {
    /// `|A′_S / (κ̃η̃L)|²`.
    pub fn normalized_probability(&self) -> T {
        self.normalized.norm_sqr()
    }
}

/// `A′_S / (iκ̃η̃)`: the integral of `exp(iΩ̃z) exp(iΔΩ q̃(z))` over the
/// crystal, with `q̃(z) = (e^{-az_i/v} - e^{-az/v})/a`.
///
/// `gap_tilde` is `Ω̃` (m⁻¹), `delta_omega` is `Ω₃ - Ω₂` (rad/s), `a` the
/// acceleration (s⁻¹) and `v` the scaling velocity (m/s).
#[allow(clippy::too_many_arguments)]
pub fn uniform_accel_amplitude<T: Real>(
    gap_tilde: T,
    delta_omega: T,
    a: T,
    v: T,
    z_i: T,
    z_f: T,
    opts: &AccelOptions<T>,
    quad: &QuadConfig<T>,
) -> Result<AccelAmplitude<T>> {
    let len = z_f - z_i;
    if !(len > T::zero()) {
        return Err(Error::domain(format!(
            "crystal needs z_i < z_f, got [{z_i}, {z_f}]"
        )));
    }
    if !(v > T::zero()) {
        return Err(Error::domain("scaling velocity must be positive"));
    }
    if let Some(limit) = opts.length_limit {
        if len > limit * (T::one() + T::lit(1e-12)) {
            return Err(Error::domain(format!(
                "crystal length {len:e} m exceeds the modelling limit {limit:e} m"
            )));
        }
    }
    let two = T::lit(2.0);

    if (a * len / v).abs() < opts.sinc_threshold {
        let dk = gap_tilde + delta_omega / v;
        let z_m = (z_i + z_f) / two;
        let phase = dk * z_m - delta_omega * z_i / v;
        let integral = Complex::from_polar(len * sinc(dk * len / two), phase);
        return Ok(AccelAmplitude {
            integral,
            normalized: integral / len,
            abs_error: T::epsilon() * len,
            branch: AccelBranch::SincLimit,
            cut: None,
            global_phase_lost: false,
            quad: None,
        });
    }

    let rate = a / v;
    let u_at = move |z: T| delta_omega / a * (-rate * z).exp();
    // cut point where u = cut_rate, only for a > 0 without a stationary
    // point to its left, and only if the crystal accumulates more than
    // cut_rate radians from the trajectory term
    let mut cut = None;
    let swept = u_at(z_i) * -(-rate * len).exp_m1();
    if a > T::zero() && delta_omega > T::zero() && !(swept <= opts.cut_rate) {
        let z_c = (delta_omega / (a * opts.cut_rate)).ln() / rate;
        let monotone = gap_tilde + rate * opts.cut_rate >= rate * opts.cut_rate / two;
        if z_c > z_i && monotone {
            cut = Some(z_c.min(z_f));
        }
    }

    // phases are taken relative to z_ref; φ(z) - φ(z_ref) stays moderate
    let z_ref = cut.unwrap_or(z_i);
    let u_ref = u_at(z_ref);
    let rel_phase = move |z: T| gap_tilde * (z - z_ref) - u_ref * (-rate * (z - z_ref)).exp_m1();
    let rel_deriv = move |z: T| gap_tilde + rate * u_ref * (-rate * (z - z_ref)).exp();

    let mut total = Complex::new(T::zero(), T::zero());
    let mut abs_error = T::zero();
    let mut quad_result = None;
    if let Some(z_c) = cut {
        // three-term integration by parts with boundary terms at z_c and z_i
        let boundary = |z: T| {
            let u = u_at(z);
            let d1 = gap_tilde + rate * u;
            let d2 = -rate * rate * u;
            let d3 = rate * rate * rate * u;
            let i = Complex::new(T::zero(), T::one());
            let h = (i * d1).inv()
                - Complex::new(d2 / (d1 * d1 * d1), T::zero())
                - i * (d3 / d1.powi(4) - T::lit(3.0) * d2 * d2 / d1.powi(5));
            (h, T::one() / (d1 * u * u * u))
        };
        let (h_c, e_c) = boundary(z_c);
        total += h_c;
        abs_error += e_c;
        let u_i = u_at(z_i);
        if u_i.is_finite() && u_i < T::lit(1e15) {
            let (h_i, e_i) = boundary(z_i);
            let p = rel_phase(z_i);
            total -= h_i * Complex::new(p.cos(), p.sin());
            abs_error += e_i;
        }
    }
    if z_ref < z_f {
        let f =
            OscillatoryIntegrand::new(|_| Complex::new(T::one(), T::zero()), rel_phase, z_ref, z_f)
                .with_derivative(rel_deriv);
        let r = integrate(&f, quad)?;
        total += r.value;
        abs_error += r.abs_error;
        quad_result = Some(r);
    }

    // global phase φ(z_ref) = Ω̃ z_ref + ΔΩ q̃(z_ref)
    let q_ref = if cut.is_some() {
        u_at(z_i) - u_ref
    } else {
        T::zero()
    };
    let phi_ref = gap_tilde * z_ref + q_ref;
    let lost = !(phi_ref.is_finite() && phi_ref.abs() < T::lit(1e12));
    let integral = if lost {
        total
    } else {
        total * Complex::new(phi_ref.cos(), phi_ref.sin())
    };
    Ok(AccelAmplitude {
        integral,
        normalized: integral / len,
        abs_error,
        branch: if cut.is_some() {
            AccelBranch::Asymptotic
        } else {
            AccelBranch::Quadrature
        },
        cut,
        global_phase_lost: lost,
        quad: quad_result,
    })
}
