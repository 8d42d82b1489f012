//! Type-I (z → y + y) KTP operating point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{
    inverse_group_velocity, phase_mismatch, refractive_index, rel_inv_group_velocity, wavevector,
    RefractiveProfile, SellmeierSet,
};

/// Pump centre frequency of the worked example, rad/s (≈ 523 nm).
pub const PUMP_OMEGA: f64 = 3.6e15;
/// Filter frequency of mode 2, rad/s (≈ 942 nm).
pub const FILTER_OMEGA: f64 = 2.0e15;
/// Detector gap quoted for the worked example, rad/s.
pub const QUOTED_GAP: f64 = 1.8e14;

/// Refractive profiles of modes 1, 2 (y axis) and the pump 3 (z axis).
#[derive(Debug, Clone)]
pub struct TypeIProfiles<T: Real> {
    pub mode1: RefractiveProfile<T>,
    pub mode2: RefractiveProfile<T>,
    pub pump: RefractiveProfile<T>,
}

impl<T: Real> TypeIProfiles<T> {
    pub fn ktp() -> Self {
        let set = SellmeierSet::ktp();
        let y = set.axis("y").expect("KTP y axis");
        let z = set.axis("z").expect("KTP z axis");
        Self {
            mode1: RefractiveProfile::new(y.clone()),
            mode2: RefractiveProfile::new(y),
            pump: RefractiveProfile::new(z),
        }
    }

    pub fn as_array(&self) -> [&RefractiveProfile<T>; 3] {
        [&self.mode1, &self.mode2, &self.pump]
    }
}

/// Derived quantities at an (Ω₃, Ω₂) operating point, z-independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KtpOperatingPoint {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub k3: f64,
    /// `Δk̄₀`, m⁻¹.
    pub mean_mismatch: f64,
    /// `v⁻¹ = 1/v₃ - 1/v₁`, s/m.
    pub v_inv: f64,
    /// `v`, m/s.
    pub v: f64,
    /// `Ω̃ = Δk̄₀ - v⁻¹(Ω₃ - Ω₂)`, m⁻¹.
    pub gap_per_length: f64,
    /// `Ω = Ω̃ v`, rad/s.
    pub gap: f64,
    /// First-order poling period `2π/Δk̄₀`, m.
    pub poling_period: f64,
}

/// Evaluates the Type-I operating point for the given profiles.
pub fn reconcile_ktp<T: Real>(
    profiles: &TypeIProfiles<T>,
    omega3: T,
    omega2: T,
) -> Result<KtpOperatingPoint> {
    let omega1 = omega3 - omega2;
    if !(omega1 > T::zero() && omega2 > T::zero()) {
        return Err(Error::domain("need Ω₃ > Ω₂ > 0"));
    }
    let z = T::zero();
    let dk = phase_mismatch(profiles.as_array(), [omega1, omega2, omega3], z)?;
    let v_inv = rel_inv_group_velocity(&profiles.mode1, &profiles.pump, omega1, omega3, z)?;
    // sanity: the individual group velocities must be physical
    inverse_group_velocity(&profiles.mode1, omega1, z)?;
    let gap_per_length = dk - v_inv * (omega3 - omega2);
    let v = T::one() / v_inv;
    Ok(KtpOperatingPoint {
        omega1: omega1.as_f64(),
        omega2: omega2.as_f64(),
        omega3: omega3.as_f64(),
        n1: refractive_index(&profiles.mode1, omega1, z)?.as_f64(),
        n2: refractive_index(&profiles.mode2, omega2, z)?.as_f64(),
        n3: refractive_index(&profiles.pump, omega3, z)?.as_f64(),
        k3: wavevector(&profiles.pump, omega3, z)?.as_f64(),
        mean_mismatch: dk.as_f64(),
        v_inv: v_inv.as_f64(),
        v: v.as_f64(),
        gap_per_length: gap_per_length.as_f64(),
        gap: (gap_per_length * v).as_f64(),
        poling_period: (T::TAU() / dk).as_f64(),
    })
}

impl KtpOperatingPoint {
    /// The worked example: Ω₃ = 3.6e15 rad/s, Ω₂ = 2e15 rad/s.
    pub fn worked_example() -> Result<Self> {
        reconcile_ktp(&TypeIProfiles::<f64>::ktp(), PUMP_OMEGA, FILTER_OMEGA)
    }
}
