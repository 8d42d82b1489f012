//! SPDC transition amplitude in a dispersion-engineered waveguide.

mod accel;
mod poled;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::amplitude::AmplitudeResult;
use crate::dispersion::{refractive_index, Chi2Profile, EpsilonProfile, Modulation, TypeIProfiles};
use crate::error::{Error, Result};
use crate::oscquad::{integrate, integrate_real, OscillatoryIntegrand, QuadConfig, QuadResult};
use crate::scalar::{Real, RealFn};

pub use accel::{uniform_accel_amplitude, AccelAmplitude, AccelBranch, AccelOptions};
pub use poled::{poled_reference, PoledReference};

/// Gaussian pump pulse. `duration` is the pulse time scale `τ_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpPulse<T> {
    /// `Ω₃`, rad/s.
    pub center: T,
    /// `τ_p`, s.
    pub duration: T,
    /// `U₀`, J.
    pub energy: T,
    /// Evaluate `α` at `Ω₃` only.
    pub quasi_monochromatic: bool,
}

impl<T: Real> PumpPulse<T> {
    pub fn new(center: T, duration: T, energy: T) -> Result<Self> {
        if !(center > T::zero() && duration > T::zero() && energy > T::zero()) {
            return Err(Error::domain(
                "pump centre, duration and energy must be positive",
            ));
        }
        Ok(Self {
            center,
            duration,
            energy,
            quasi_monochromatic: false,
        })
    }

    pub fn quasi_monochromatic(mut self) -> Self {
        self.quasi_monochromatic = true;
        self
    }

    /// `α` as seen by the amplitude: `α(Ω₃)` for a quasi-monochromatic pump.
    pub fn spectral(&self, omega3: T) -> T {
        if self.quasi_monochromatic {
            pump_amplitude(self, self.center)
        } else {
            pump_amplitude(self, omega3)
        }
    }
}

/// `α(ω₃) = (τ_p/√π) exp(-τ_p²(ω₃ - Ω₃)²)`, in s.
pub fn pump_amplitude<T: Real>(pump: &PumpPulse<T>, omega3: T) -> T {
    let t = pump.duration;
    let x = t * (omega3 - pump.center);
    t / T::PI().sqrt() * (-x * x).exp()
}

/// `κ = 4π √(√2 U₀ π Ω₁Ω₂ / (√π (4π)³ ε₀ A c³ τ_p))`.
///
/// With U₀ in J, Ω in rad/s, ε₀ in F/m, A in m², c in m/s and τ_p in s the
/// radicand is J/(F m⁴) = V²/m⁴, so κ is in V/m².
pub fn coupling_kappa<T: Real>(
    pump: &PumpPulse<T>,
    waveguide: &WaveguideSpec<T>,
    omega1: T,
    omega2: T,
) -> Result<T> {
    if !(omega1 > T::zero() && omega2 > T::zero()) {
        return Err(Error::domain("Ω₁ and Ω₂ must be positive"));
    }
    if !(pump.energy > T::zero() && pump.duration > T::zero() && waveguide.area > T::zero()) {
        return Err(Error::domain("U₀, τ_p and A must be positive"));
    }
    let pi = T::PI();
    let four_pi = T::lit(4.0) * pi;
    let c = T::lit(crate::SPEED_OF_LIGHT);
    let eps0 = T::lit(crate::EPSILON_0);
    let num = T::lit(2.0).sqrt() * pump.energy * pi * omega1 * omega2;
    // c³ and (4π)³ are split to stay inside f32 range
    let den = pi.sqrt() * four_pi.powi(3) * eps0 * waveguide.area * c * c * c * pump.duration;
    Ok(four_pi * (num / den).sqrt())
}

/// Waveguide from `z_i` to `z_f` with cross-section `area` (m²).
#[derive(Debug, Clone)]
pub struct WaveguideSpec<T: Real> {
    pub z_i: T,
    pub z_f: T,
    pub area: T,
    pub chi2: Chi2Profile<T>,
    pub profiles: TypeIProfiles<T>,
}

impl<T: Real> WaveguideSpec<T> {
    pub fn new(
        z_i: T,
        z_f: T,
        area: T,
        chi2: Chi2Profile<T>,
        profiles: TypeIProfiles<T>,
    ) -> Result<Self> {
        if !(z_i < z_f) {
            return Err(Error::domain(format!("need z_i < z_f, got [{z_i}, {z_f}]")));
        }
        if !(area > T::zero()) {
            return Err(Error::domain("cross-section area must be positive"));
        }
        Ok(Self {
            z_i,
            z_f,
            area,
            chi2,
            profiles,
        })
    }

    pub fn length(&self) -> T {
        self.z_f - self.z_i
    }
}

/// Longitudinal phase-matching data: either an ε(z) construction or the
/// pair `(Δk₀(z), Δv_g⁻¹(z))`.
#[derive(Clone)]
pub enum Mismatch<T: Real> {
    Epsilon(EpsilonProfile<T>),
    Explicit {
        delta_k0: RealFn<T>,
        rel_inv_group_velocity: RealFn<T>,
    },
}

impl<T: Real> fmt::Debug for Mismatch<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Epsilon(e) => f.debug_tuple("Epsilon").field(e).finish(),
            Self::Explicit { .. } => f.write_str("Explicit"),
        }
    }
}

impl<T: Real> Mismatch<T> {
    pub fn explicit<K, V>(delta_k0: K, rel_inv_group_velocity: V) -> Self
    where
        K: Fn(T) -> T + Send + Sync + 'static,
        V: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::Explicit {
            delta_k0: Arc::new(delta_k0),
            rel_inv_group_velocity: Arc::new(rel_inv_group_velocity),
        }
    }

    pub fn delta_k0(&self, z: T) -> T {
        match self {
            Self::Epsilon(e) => e.delta_k0(z),
            Self::Explicit { delta_k0, .. } => delta_k0(z),
        }
    }

    pub fn rel_inv_group_velocity(&self, z: T) -> T {
        match self {
            Self::Epsilon(e) => e.rel_inv_group_velocity(z),
            Self::Explicit {
                rel_inv_group_velocity,
                ..
            } => rel_inv_group_velocity(z),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpdcScenario<T: Real> {
    pub pump: PumpPulse<T>,
    /// `Ω₂`, rad/s.
    pub filter: T,
    pub waveguide: WaveguideSpec<T>,
    pub mismatch: Mismatch<T>,
}

impl<T: Real> SpdcScenario<T> {
    pub fn new(
        pump: PumpPulse<T>,
        filter: T,
        waveguide: WaveguideSpec<T>,
        mismatch: Mismatch<T>,
    ) -> Result<Self> {
        if !(filter > T::zero() && pump.center > filter) {
            return Err(Error::domain(format!(
                "need Ω₃ > Ω₂ > 0, got Ω₃ = {}, Ω₂ = {filter}",
                pump.center
            )));
        }
        if let Mismatch::Epsilon(e) = &mismatch {
            let d = pump.center - filter;
            if (e.pump_filter_diff - d).abs() > T::lit(1e-12) * d {
                return Err(Error::domain("ε profile was built for a different Ω₃ - Ω₂"));
            }
        }
        Ok(Self {
            pump,
            filter,
            waveguide,
            mismatch,
        })
    }

    /// `Ω₁ = Ω₃ - Ω₂`.
    pub fn omega1(&self) -> T {
        self.pump.center - self.filter
    }

    pub fn kappa(&self) -> Result<T> {
        coupling_kappa(&self.pump, &self.waveguide, self.omega1(), self.filter)
    }

    /// `b_S(ω) = iκα(Ω₂ + ω)`.
    pub fn b_coefficient(&self, omega: T) -> Result<Complex<T>> {
        let k = self.kappa()?;
        Ok(Complex::new(
            T::zero(),
            k * self.pump.spectral(self.filter + omega),
        ))
    }

    /// `η̃(z) = χ⁽²⁾(z)/√(n₁(Ω₁; z) n₂(Ω₂; z) n₃(Ω₃; z))` as a shared function.
    pub fn normalized_chi2(&self) -> Result<RealFn<T>> {
        let p = &self.waveguide.profiles;
        let omegas = [self.omega1(), self.filter, self.pump.center];
        let z0 = self.waveguide.z_i;
        let mut product = T::one();
        for (prof, w) in p.as_array().into_iter().zip(omegas) {
            product *= refractive_index(prof, w, z0)?;
        }
        let chi2 = self.waveguide.chi2.clone();
        let uniform = p
            .as_array()
            .iter()
            .all(|prof| matches!(prof.modulation, Modulation::Identity));
        if uniform {
            let norm = product.sqrt();
            return Ok(Arc::new(move |z| chi2.eval(z) / norm));
        }
        let p = p.clone();
        Ok(Arc::new(move |z| {
            let mut prod = T::one();
            for (prof, w) in p.as_array().into_iter().zip(omegas) {
                prod *= refractive_index(prof, w, z).unwrap_or(T::nan());
            }
            chi2.eval(z) / prod.sqrt()
        }))
    }
}

/// `Ω̃(z) = Δk₀(z) - Δv_g⁻¹(z)(Ω₃ - Ω₂)`, in m⁻¹.
pub fn effective_gap_profile<T: Real>(scenario: &SpdcScenario<T>, z: T) -> T {
    match &scenario.mismatch {
        Mismatch::Epsilon(e) => e.constant_gap(),
        m => m.delta_k0(z) - m.rel_inv_group_velocity(z) * scenario.omega1(),
    }
}

/// Running integral `∫_{lo}^{z} f` from a table of panel sums plus one short
/// quadrature from the nearest node.
struct Cumulative<T: Real> {
    f: RealFn<T>,
    lo: T,
    step: T,
    prefix: Vec<T>,
}

impl<T: Real> Cumulative<T> {
    const NODES: usize = 64;

    fn tight() -> QuadConfig<T> {
        QuadConfig {
            rel_tol: T::lit(1e-13),
            abs_tol: T::zero(),
            ..QuadConfig::default()
        }
    }

    fn new(f: RealFn<T>, lo: T, hi: T) -> Result<Self> {
        let step = (hi - lo) / T::lit(Self::NODES as f64);
        let cfg = Self::tight();
        let mut prefix = Vec::with_capacity(Self::NODES + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        for k in 0..Self::NODES {
            let a = lo + step * T::lit(k as f64);
            acc += integrate_real(|z| f(z), a, a + step, &cfg)?.0;
            prefix.push(acc);
        }
        Ok(Self {
            f,
            lo,
            step,
            prefix,
        })
    }

    fn eval(&self, z: T) -> T {
        let k = ((z - self.lo) / self.step)
            .round()
            .max(T::zero())
            .min(T::lit(Self::NODES as f64));
        let node = self.lo + self.step * k;
        let base = self.prefix[k.to_usize().unwrap_or(0)];
        if z == node {
            return base;
        }
        let f = &self.f;
        base + integrate_real(|s| f(s), node, z, &Self::tight())
            .map(|r| r.0)
            .unwrap_or(T::nan())
    }
}

/// `Φ̃(z) = ∫₀^z Ω̃` and `q̃(z) = ∫_{z_i}^z Δv_g⁻¹` as shared closures.
pub(crate) fn phase_parts<T: Real>(scenario: &SpdcScenario<T>) -> Result<(RealFn<T>, RealFn<T>)> {
    let (z_i, z_f) = (scenario.waveguide.z_i, scenario.waveguide.z_f);
    match &scenario.mismatch {
        Mismatch::Epsilon(e) => {
            let gap = e.constant_gap();
            let gap_phase: RealFn<T> = Arc::new(move |z| gap * z);
            let q: RealFn<T> = if e.antiderivative.is_some() {
                let e = e.clone();
                Arc::new(move |z| e.q_tilde(z_i, z).unwrap_or(T::nan()))
            } else {
                let eps = Cumulative::new(e.epsilon.clone(), z_i, z_f)?;
                let (v_inv, d) = (e.v_inv, e.pump_filter_diff);
                Arc::new(move |z| v_inv * (z - z_i) + eps.eval(z) / d)
            };
            Ok((gap_phase, q))
        }
        Mismatch::Explicit {
            delta_k0,
            rel_inv_group_velocity,
        } => {
            let (dk, vg) = (delta_k0.clone(), rel_inv_group_velocity.clone());
            let d = scenario.omega1();
            let gap: RealFn<T> = Arc::new(move |z| dk(z) - vg(z) * d);
            let offset = integrate_real(|z| gap(z), T::zero(), z_i, &Cumulative::<T>::tight())?.0;
            let gap_cum = Cumulative::new(gap, z_i, z_f)?;
            let q_cum = Cumulative::new(rel_inv_group_velocity.clone(), z_i, z_f)?;
            Ok((
                Arc::new(move |z| offset + gap_cum.eval(z)),
                Arc::new(move |z| q_cum.eval(z)),
            ))
        }
    }
}

/// Integrand `η̃(z) exp(i(Φ̃(z) + ω q̃(z)))` over the waveguide.
pub fn spdc_integrand<T: Real>(
    scenario: &SpdcScenario<T>,
    omega: T,
) -> Result<OscillatoryIntegrand<T>> {
    let eta = scenario.normalized_chi2()?;
    let (gap_phase, q) = phase_parts(scenario)?;
    let m = scenario.mismatch.clone();
    let d = scenario.omega1();
    let wg = &scenario.waveguide;
    Ok(OscillatoryIntegrand::new(
        move |z| Complex::new(eta(z), T::zero()),
        move |z| gap_phase(z) + omega * q(z),
        wg.z_i,
        wg.z_f,
    )
    .with_derivative(move |z| {
        let gap = match &m {
            Mismatch::Epsilon(e) => e.constant_gap(),
            m => m.delta_k0(z) - m.rel_inv_group_velocity(z) * d,
        };
        gap + omega * m.rel_inv_group_velocity(z)
    }))
}

/// `A_S(ω) = b_S(ω) ∫ dz η̃(z) e^{iΦ̃(z)} e^{iωq̃(z)}`, Eqs. (6)-(7).
pub fn spdc_amplitude<T: Real>(
    scenario: &SpdcScenario<T>,
    omega: T,
    quad: &QuadConfig<T>,
) -> Result<AmplitudeResult<T>> {
    if !(omega > T::zero()) {
        return Err(Error::domain(format!("ω must be positive, got {omega}")));
    }
    if !(omega < scenario.pump.center) {
        return Err(Error::domain("ω must lie below the pump frequency"));
    }
    let b = scenario.b_coefficient(omega)?;
    let walls = scenario
        .waveguide
        .chi2
        .domain_walls(scenario.waveguide.z_i, scenario.waveguide.z_f);
    let f = spdc_integrand(scenario, omega)?;
    let quad_result = if walls.is_empty() {
        integrate(&f, quad)?
    } else {
        integrate_pieces(&f, &walls, quad)?
    };
    Ok(AmplitudeResult::new(b, quad_result))
}

/// Sums the integral over the pieces between discontinuities.
fn integrate_pieces<T: Real>(
    f: &OscillatoryIntegrand<T>,
    cuts: &[T],
    quad: &QuadConfig<T>,
) -> Result<QuadResult<T>> {
    let (lo, hi) = f.interval();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend_from_slice(cuts);
    edges.push(hi);
    let mut total: Option<QuadResult<T>> = None;
    for w in edges.windows(2) {
        let r = integrate(&f.restricted(w[0], w[1]), quad)?;
        total = Some(match total {
            None => r,
            Some(t) => QuadResult {
                value: t.value + r.value,
                abs_error: t.abs_error + r.abs_error,
                panels: t.panels + r.panels,
                total_phase: t.total_phase + r.total_phase,
                fallback_panels: t.fallback_panels + r.fallback_panels,
                roundoff_limited: t.roundoff_limited || r.roundoff_limited,
            },
        });
    }
    Ok(total.expect("at least one piece"))
}
