//! Refractive indices, wavevectors and group velocities with optional
//! position dependence, plus the engineered mismatch profiles.
//!
//! SI units throughout: rad/s, m, m⁻¹, m/s.

mod ktp;
mod profiles;
mod sellmeier;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oscquad::{integrate_real, QuadConfig};
use crate::scalar::Real;
use crate::SPEED_OF_LIGHT;

pub use ktp::{
    reconcile_ktp, KtpOperatingPoint, TypeIProfiles, FILTER_OMEGA, PUMP_OMEGA, QUOTED_GAP,
};
pub use profiles::{make_exponential_gradient, Chi2Profile, EpsilonProfile, ExponentialGradient};
pub use sellmeier::{SellmeierModel, SellmeierSet};

pub type ModulationFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Position dependence `n(ω; z)` applied on top of the Sellmeier value.
#[derive(Clone, Default)]
pub enum Modulation<T> {
    #[default]
    Identity,
    /// `n(ω; z) = n(ω) + δ(ω, z)`.
    Additive(ModulationFn<T>),
    /// `n(ω; z) = n(ω) · m(ω, z)`.
    Multiplicative(ModulationFn<T>),
}

impl<T> fmt::Debug for Modulation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Identity => "Identity",
            Self::Additive(_) => "Additive",
            Self::Multiplicative(_) => "Multiplicative",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RefractiveProfile<T: Real> {
    pub base: SellmeierModel<T>,
    pub modulation: Modulation<T>,
}

impl<T: Real> RefractiveProfile<T> {
    pub fn new(base: SellmeierModel<T>) -> Self {
        Self {
            base,
            modulation: Modulation::Identity,
        }
    }

    pub fn with_modulation(mut self, modulation: Modulation<T>) -> Self {
        self.modulation = modulation;
        self
    }

    pub fn vacuum() -> Self {
        Self::new(SellmeierModel::vacuum())
    }

    fn apply(&self, n: T, omega: T, z: T) -> T {
        match &self.modulation {
            Modulation::Identity => n,
            Modulation::Additive(f) => n + f(omega, z),
            Modulation::Multiplicative(f) => n * f(omega, z),
        }
    }
}

fn c<T: Real>() -> T {
    T::lit(SPEED_OF_LIGHT)
}

/// Vacuum wavelength in micrometres.
pub fn wavelength_um<T: Real>(omega: T) -> T {
    T::TAU() * c::<T>() / omega * T::lit(1e6)
}

/// Angular frequency of a vacuum wavelength given in nanometres.
pub fn omega_from_nm<T: Real>(lambda_nm: T) -> T {
    T::TAU() * c::<T>() / (lambda_nm * T::lit(1e-9))
}

fn check_omega<T: Real>(omega: T) -> Result<()> {
    if omega > T::zero() && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "angular frequency must be positive, got {omega}"
        )))
    }
}

/// `n_j(ω; z)`.
pub fn refractive_index<T: Real>(profile: &RefractiveProfile<T>, omega: T, z: T) -> Result<T> {
    check_omega(omega)?;
    let n = profile.base.index(wavelength_um(omega))?;
    Ok(profile.apply(n, omega, z))
}

/// `k = ω n(ω; z) / c`; zero at `ω = 0`.
pub fn wavevector<T: Real>(profile: &RefractiveProfile<T>, omega: T, z: T) -> Result<T> {
    if omega == T::zero() {
        return Ok(T::zero());
    }
    Ok(omega * refractive_index(profile, omega, z)? / c())
}

/// `dk/dω` in s/m, analytic for the Sellmeier part.
pub fn inverse_group_velocity<T: Real>(
    profile: &RefractiveProfile<T>,
    omega: T,
    z: T,
) -> Result<T> {
    check_omega(omega)?;
    let lambda = wavelength_um(omega);
    let (n0, dn_dl) = profile.base.index_and_slope(lambda)?;
    // dλ/dω = -λ/ω
    let dn0 = -dn_dl * lambda / omega;
    let (n, dn) = match &profile.modulation {
        Modulation::Identity => (n0, dn0),
        Modulation::Additive(f) => {
            let h = T::epsilon().cbrt() * omega;
            let df = (f(omega + h, z) - f(omega - h, z)) / (h + h);
            (n0 + f(omega, z), dn0 + df)
        }
        Modulation::Multiplicative(f) => {
            let h = T::epsilon().cbrt() * omega;
            let df = (f(omega + h, z) - f(omega - h, z)) / (h + h);
            let m = f(omega, z);
            (n0 * m, dn0 * m + n0 * df)
        }
    };
    Ok((n + omega * dn) / c())
}

/// `v_g = (dk/dω)⁻¹`.
pub fn group_velocity<T: Real>(profile: &RefractiveProfile<T>, omega: T, z: T) -> Result<T> {
    let dk = inverse_group_velocity(profile, omega, z)?;
    if !(dk > T::zero()) {
        return Err(Error::domain(format!(
            "dk/dω = {dk} ≤ 0 at ω = {omega}: anomalous region"
        )));
    }
    Ok(T::one() / dk)
}

/// `Δk₀(z) = k₃(Ω₃; z) - k₂(Ω₂; z) - k₁(Ω₁; z)`.
pub fn phase_mismatch<T: Real>(
    profiles: [&RefractiveProfile<T>; 3],
    omegas: [T; 3],
    z: T,
) -> Result<T> {
    let [o1, o2, o3] = omegas;
    if (o1 + o2 - o3).abs() > T::lit(1e-12) * o3.abs() {
        return Err(Error::domain(format!(
            "frequencies violate Ω₁ + Ω₂ = Ω₃: {o1} + {o2} ≠ {o3}"
        )));
    }
    let [p1, p2, p3] = profiles;
    Ok(wavevector(p3, o3, z)? - wavevector(p2, o2, z)? - wavevector(p1, o1, z)?)
}

/// `1/Δv_g(z) = 1/v₃(z) - 1/v₁(z)`.
pub fn rel_inv_group_velocity<T: Real>(
    p1: &RefractiveProfile<T>,
    p3: &RefractiveProfile<T>,
    omega1: T,
    omega3: T,
    z: T,
) -> Result<T> {
    Ok(inverse_group_velocity(p3, omega3, z)? - inverse_group_velocity(p1, omega1, z)?)
}

/// `∫_{z_lo}^{z} Δk(ζ) dζ`.
pub fn accumulated_phase<T: Real, F: Fn(T) -> T>(
    delta_k: F,
    z_lo: T,
    z: T,
    cfg: &QuadConfig<T>,
) -> Result<T> {
    Ok(integrate_real(delta_k, z_lo, z, cfg)?.0)
}
