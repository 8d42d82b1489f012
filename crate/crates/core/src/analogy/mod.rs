//! Parameter correspondence between a detector and a waveguide, mediated by
//! the scaling velocity `v = z/τ`.
//!
//! | detector            | waveguide                              |
//! |---------------------|----------------------------------------|
//! | `q(τ)`              | `q̃(z) = ∫_{z_i}^z Δv_g⁻¹`              |
//! | `η(τ)`              | `v η̃(vτ)`, `η̃ = χ⁽²⁾/√(n₁n₂n₃)`         |
//! | `Ω(τ)`              | `v(Δk₀ - Δv_g⁻¹(Ω₃ - Ω₂))`              |
//! | `b(ω)`              | `iκα(Ω₂ + ω)`                          |
//! | `vΔτ`               | `L`                                    |

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::oscquad::{integrate, OscillatoryIntegrand, QuadConfig, QuadResult};
use crate::scalar::{Real, RealFn};
use crate::spdc::{phase_parts, spdc_amplitude, SpdcScenario};
use crate::udw::{window_integrand, DetectorSpec, FieldMode, Gap, SwitchingFunction, Trajectory};

pub type ComplexFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingVelocity<T>(T);

impl<T: Real> ScalingVelocity<T> {
    pub fn new(v: T) -> Result<Self> {
        if !(v > T::zero() && v.is_finite()) {
            return Err(Error::domain(format!(
                "scaling velocity must be positive, got {v}"
            )));
        }
        Ok(Self(v))
    }

    /// `v = L/Δτ`.
    pub fn from_length(length: T, duration: T) -> Result<Self> {
        Self::new(length / duration)
    }

    pub fn get(&self) -> T {
        self.0
    }

    /// `L = vΔτ`.
    pub fn length(&self, duration: T) -> T {
        self.0 * duration
    }

    pub fn duration(&self, length: T) -> T {
        length / self.0
    }
}

/// Detector-side description. `gap_phase` is `∫₀^τ Ω`, `q` vanishes at
/// `window.0`.
#[derive(Clone)]
pub struct UdwSide<T: Real> {
    pub q: RealFn<T>,
    pub dq: Option<RealFn<T>>,
    pub eta: RealFn<T>,
    pub gap: RealFn<T>,
    pub gap_phase: Option<RealFn<T>>,
    pub b: ComplexFn<T>,
    pub window: (T, T),
}

impl<T: Real> fmt::Debug for UdwSide<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UdwSide")
            .field("window", &self.window)
            .field("has_dq", &self.dq.is_some())
            .finish_non_exhaustive()
    }
}

fn check_in<T: Real>(x: T, (lo, hi): (T, T), what: &str) -> Result<()> {
    let slack = T::lit(1e-12) * (hi - lo).abs();
    if x >= lo - slack && x <= hi + slack {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what} = {x:e} outside [{lo:e}, {hi:e}]"
        )))
    }
}

impl<T: Real> UdwSide<T> {
    pub fn q_at(&self, tau: T) -> Result<T> {
        check_in(tau, self.window, "τ")?;
        Ok((self.q)(tau))
    }

    pub fn eta_at(&self, tau: T) -> Result<T> {
        check_in(tau, self.window, "τ")?;
        Ok((self.eta)(tau))
    }

    pub fn gap_at(&self, tau: T) -> Result<T> {
        check_in(tau, self.window, "τ")?;
        Ok((self.gap)(tau))
    }

    pub fn b_at(&self, omega: T) -> Complex<T> {
        (self.b)(omega)
    }

    pub fn duration(&self) -> T {
        self.window.1 - self.window.0
    }

    /// `∫ η(τ) exp(i(∫₀^τ Ω + ωq(τ))) dτ` through the detector engine.
    pub fn integral(&self, omega: T, quad: &QuadConfig<T>) -> Result<QuadResult<T>> {
        let spec = DetectorSpec {
            gap: Gap::TimeDependent {
                omega: self.gap.clone(),
                antiderivative: self.gap_phase.clone(),
            },
            coupling: T::one(),
            monopole: Complex::new(T::one(), T::zero()),
        };
        let traj = Trajectory::Custom {
            q: self.q.clone(),
            dq: self.dq.clone(),
        };
        let switching = SwitchingFunction::Custom {
            eta: self.eta.clone(),
            support: Some(self.window),
        };
        let f = window_integrand(
            &spec,
            &traj,
            &switching,
            &FieldMode::new(omega)?,
            self.window.0,
            self.window.1,
        );
        Ok(integrate(&f, quad)?)
    }
}

/// Waveguide-side description. `normalized_chi2` is `η̃ = χ⁽²⁾/√(n₁n₂n₃)`;
/// `chi2` follows from it when `index_product` (`n₁n₂n₃`) is known.
#[derive(Clone)]
pub struct SpdcSide<T: Real> {
    pub rel_inv_group_velocity: RealFn<T>,
    pub q_tilde: Option<RealFn<T>>,
    pub normalized_chi2: RealFn<T>,
    pub index_product: Option<RealFn<T>>,
    pub delta_k0: RealFn<T>,
    pub gap_phase: Option<RealFn<T>>,
    pub pump: ComplexFn<T>,
    pub kappa: T,
    pub omega2: T,
    pub omega3: T,
    pub z_i: T,
    pub z_f: T,
}

impl<T: Real> fmt::Debug for SpdcSide<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpdcSide")
            .field("z", &(self.z_i, self.z_f))
            .field("kappa", &self.kappa)
            .field("omega2", &self.omega2)
            .field("omega3", &self.omega3)
            .finish_non_exhaustive()
    }
}

impl<T: Real> SpdcSide<T> {
    pub fn from_scenario(scenario: &SpdcScenario<T>) -> Result<Self> {
        let (gap_phase, q) = phase_parts(scenario)?;
        let m = scenario.mismatch.clone();
        let m2 = m.clone();
        let pump = scenario.pump;
        Ok(Self {
            rel_inv_group_velocity: Arc::new(move |z| m.rel_inv_group_velocity(z)),
            q_tilde: Some(q),
            normalized_chi2: scenario.normalized_chi2()?,
            index_product: None,
            delta_k0: Arc::new(move |z| m2.delta_k0(z)),
            gap_phase: Some(gap_phase),
            pump: Arc::new(move |w| Complex::new(pump.spectral(w), T::zero())),
            kappa: scenario.kappa()?,
            omega2: scenario.filter,
            omega3: scenario.pump.center,
            z_i: scenario.waveguide.z_i,
            z_f: scenario.waveguide.z_f,
        })
    }

    pub fn length(&self) -> T {
        self.z_f - self.z_i
    }

    fn span(&self) -> (T, T) {
        (self.z_i, self.z_f)
    }

    pub fn rel_inv_group_velocity_at(&self, z: T) -> Result<T> {
        check_in(z, self.span(), "z")?;
        Ok((self.rel_inv_group_velocity)(z))
    }

    pub fn normalized_chi2_at(&self, z: T) -> Result<T> {
        check_in(z, self.span(), "z")?;
        Ok((self.normalized_chi2)(z))
    }

    /// `χ⁽²⁾(z)`, needs the index product.
    pub fn chi2_at(&self, z: T) -> Result<T> {
        check_in(z, self.span(), "z")?;
        let n = self
            .index_product
            .as_ref()
            .ok_or_else(|| Error::domain("χ⁽²⁾ needs the refractive index product"))?;
        Ok((self.normalized_chi2)(z) * n(z).sqrt())
    }

    pub fn delta_k0_at(&self, z: T) -> Result<T> {
        check_in(z, self.span(), "z")?;
        Ok((self.delta_k0)(z))
    }

    /// `Ω̃(z)`.
    pub fn effective_gap_at(&self, z: T) -> Result<T> {
        Ok(self.delta_k0_at(z)? - (self.rel_inv_group_velocity)(z) * (self.omega3 - self.omega2))
    }

    /// `iκα(Ω₂ + ω)`.
    pub fn b_at(&self, omega: T) -> Complex<T> {
        Complex::new(T::zero(), self.kappa) * (self.pump)(self.omega2 + omega)
    }

    /// `∫ η̃ exp(i(∫₀^z Ω̃ + ωq̃)) dz` over the waveguide.
    pub fn integral(&self, omega: T, quad: &QuadConfig<T>) -> Result<QuadResult<T>> {
        let q = self
            .q_tilde
            .clone()
            .ok_or_else(|| Error::domain("q̃ not available"))?;
        let phi = self
            .gap_phase
            .clone()
            .ok_or_else(|| Error::domain("gap phase not available"))?;
        let eta = self.normalized_chi2.clone();
        let (dk, vg, d) = (
            self.delta_k0.clone(),
            self.rel_inv_group_velocity.clone(),
            self.omega3 - self.omega2,
        );
        let f = OscillatoryIntegrand::new(
            move |z| Complex::new(eta(z), T::zero()),
            move |z| phi(z) + omega * q(z),
            self.z_i,
            self.z_f,
        )
        .with_derivative(move |z| dk(z) - vg(z) * d + omega * vg(z));
        Ok(integrate(&f, quad)?)
    }
}

/// Waveguide → detector through `z = vτ`.
pub fn spdc_to_udw<T: Real>(spdc: &SpdcSide<T>, v: ScalingVelocity<T>) -> Result<UdwSide<T>> {
    let v = v.get();
    let q = spdc
        .q_tilde
        .clone()
        .ok_or_else(|| Error::domain("q̃ not available on the waveguide side"))?;
    let vg = spdc.rel_inv_group_velocity.clone();
    let vg2 = vg.clone();
    let chi = spdc.normalized_chi2.clone();
    let dk = spdc.delta_k0.clone();
    let d = spdc.omega3 - spdc.omega2;
    let gap_phase = spdc
        .gap_phase
        .clone()
        .map(|p| -> RealFn<T> { Arc::new(move |t| p(v * t)) });
    let (pump, kappa, omega2) = (spdc.pump.clone(), spdc.kappa, spdc.omega2);
    Ok(UdwSide {
        q: Arc::new(move |t| q(v * t)),
        dq: Some(Arc::new(move |t| v * vg(v * t))),
        eta: Arc::new(move |t| v * chi(v * t)),
        gap: Arc::new(move |t| v * (dk(v * t) - vg2(v * t) * d)),
        gap_phase,
        b: Arc::new(move |w| Complex::new(T::zero(), kappa) * pump(omega2 + w)),
        window: (spdc.z_i / v, spdc.z_f / v),
    })
}

/// Detector → waveguide. `Ω₂` and `Ω₃` are the frequencies the waveguide
/// is operated at; the pump spectrum is returned with `κ = 1`.
pub fn udw_to_spdc<T: Real>(
    udw: &UdwSide<T>,
    v: ScalingVelocity<T>,
    omega2: T,
    omega3: T,
) -> Result<SpdcSide<T>> {
    let v = v.get();
    if !(omega3 > omega2 && omega2 > T::zero()) {
        return Err(Error::domain("need Ω₃ > Ω₂ > 0"));
    }
    let dq = udw
        .dq
        .clone()
        .ok_or_else(|| Error::domain("q(τ) has no derivative; cannot form Δv_g⁻¹"))?;
    let d = omega3 - omega2;
    let tau_i = udw.window.0;
    let q = udw.q.clone();
    let q_i = q(tau_i);
    let dq2 = dq.clone();
    let (eta, gap, b) = (udw.eta.clone(), udw.gap.clone(), udw.b.clone());
    let gap_phase = udw
        .gap_phase
        .clone()
        .map(|p| -> RealFn<T> { Arc::new(move |z| p(z / v)) });
    Ok(SpdcSide {
        rel_inv_group_velocity: Arc::new(move |z| dq(z / v) / v),
        q_tilde: Some(Arc::new(move |z| q(z / v) - q_i)),
        normalized_chi2: Arc::new(move |z| eta(z / v) / v),
        index_product: None,
        delta_k0: Arc::new(move |z| gap(z / v) / v + dq2(z / v) / v * d),
        gap_phase,
        pump: Arc::new(move |w| b(w - omega2) * Complex::new(T::zero(), -T::one())),
        kappa: T::one(),
        omega2,
        omega3,
        z_i: v * tau_i,
        z_f: v * udw.window.1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport<T> {
    /// `A_S` from the waveguide engine.
    pub spdc: Complex<T>,
    /// `b(ω) ∫ η e^{i(∫Ω + ωq)} dτ` from the detector engine.
    pub udw: Complex<T>,
    pub rel_diff: T,
    /// Sum of both quadrature error bounds, relative to `|A_S|`.
    pub combined_rel_error: T,
}

/// Evaluates the same amplitude on both sides of the correspondence.
pub fn amplitude_equivalence_check<T: Real>(
    scenario: &SpdcScenario<T>,
    v: ScalingVelocity<T>,
    omega: T,
    quad: &QuadConfig<T>,
) -> Result<EquivalenceReport<T>> {
    let direct = spdc_amplitude(scenario, omega, quad)?;
    let udw = spdc_to_udw(&SpdcSide::from_scenario(scenario)?, v)?;
    let mapped = udw.integral(omega, quad)?;
    let b = udw.b_at(omega);
    let a_udw = b * mapped.value;
    let scale = direct.amplitude.norm();
    let diff = (direct.amplitude - a_udw).norm();
    let (rel_diff, combined) = if scale == T::zero() {
        (diff, T::zero())
    } else {
        (
            diff / scale,
            (direct.abs_error + b.norm() * mapped.abs_error) / scale,
        )
    };
    Ok(EquivalenceReport {
        spdc: direct.amplitude,
        udw: a_udw,
        rel_diff,
        combined_rel_error: combined,
    })
}
