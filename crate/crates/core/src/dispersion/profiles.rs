//! Engineered longitudinal profiles: the ε(z) compensation, the exponential
//! group-velocity gradient and χ⁽²⁾ shapes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oscquad::{integrate_real, QuadConfig};
use crate::scalar::{Real, RealFn};

/// `Δk₀(z) = Δk̄₀ + ε(z)` and `Δv_g⁻¹(z) = v⁻¹ + ε(z)/(Ω₃ - Ω₂)`.
///
/// The sign in front of `ε/(Ω₃ - Ω₂)` is the one for which `ε` drops out of
/// `Ω̃ = Δk₀ - Δv_g⁻¹(Ω₃ - Ω₂)`.
#[derive(Clone)]
pub struct EpsilonProfile<T: Real> {
    pub epsilon: RealFn<T>,
    /// `Δk̄₀`, m⁻¹.
    pub mean_mismatch: T,
    /// `v⁻¹`, s/m.
    pub v_inv: T,
    /// `Ω₃ - Ω₂`, rad/s.
    pub pump_filter_diff: T,
    /// `∫₀^z ε(ζ) dζ`, when known in closed form.
    pub antiderivative: Option<RealFn<T>>,
}

impl<T: Real> fmt::Debug for EpsilonProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EpsilonProfile")
            .field("mean_mismatch", &self.mean_mismatch)
            .field("v_inv", &self.v_inv)
            .field("pump_filter_diff", &self.pump_filter_diff)
            .field("has_antiderivative", &self.antiderivative.is_some())
            .finish_non_exhaustive()
    }
}

impl<T: Real> EpsilonProfile<T> {
    pub fn new<F>(epsilon: F, mean_mismatch: T, v_inv: T, pump_filter_diff: T) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        if pump_filter_diff == T::zero() || !pump_filter_diff.is_finite() {
            return Err(Error::domain("Ω₃ - Ω₂ must be finite and nonzero"));
        }
        if !(mean_mismatch.is_finite() && v_inv.is_finite()) {
            return Err(Error::domain("Δk̄₀ and v⁻¹ must be finite"));
        }
        Ok(Self {
            epsilon: Arc::new(epsilon),
            mean_mismatch,
            v_inv,
            pump_filter_diff,
            antiderivative: None,
        })
    }

    pub fn with_antiderivative<F>(mut self, antiderivative: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        self.antiderivative = Some(Arc::new(antiderivative));
        self
    }

    /// `ε ≡ 0`.
    pub fn uniform(mean_mismatch: T, v_inv: T, pump_filter_diff: T) -> Result<Self> {
        Self::new(|_| T::zero(), mean_mismatch, v_inv, pump_filter_diff)
    }

    /// The ε(z) that makes `Δv_g⁻¹(z) = e^{-az/v}/v`.
    pub fn exponential(a: T, v: T, mean_mismatch: T, pump_filter_diff: T) -> Result<Self> {
        let g = make_exponential_gradient(a, v)?;
        let d = pump_filter_diff;
        // v⁻¹ + ε/ΔΩ = e^{-az/v}/v  ⇒  ε = ΔΩ (e^{-az/v} - 1)/v
        let e = Self::new(
            move |z| d * g.decay_m1(z) / g.v,
            mean_mismatch,
            T::one() / v,
            pump_filter_diff,
        )?;
        Ok(e.with_antiderivative(move |z| {
            if g.a == T::zero() {
                T::zero()
            } else {
                -d * g.decay_m1(z) / g.a - d * z / g.v
            }
        }))
    }

    pub fn delta_k0(&self, z: T) -> T {
        self.mean_mismatch + (self.epsilon)(z)
    }

    pub fn rel_inv_group_velocity(&self, z: T) -> T {
        self.v_inv + (self.epsilon)(z) / self.pump_filter_diff
    }

    /// `Ω̃(z) = Δk₀(z) - Δv_g⁻¹(z)(Ω₃ - Ω₂)`, evaluated from the two profiles.
    pub fn effective_gap(&self, z: T) -> T {
        self.delta_k0(z) - self.rel_inv_group_velocity(z) * self.pump_filter_diff
    }

    /// `q̃(z) = ∫_{z_i}^{z} Δv_g⁻¹`, by quadrature unless the antiderivative
    /// of ε is known.
    pub fn q_tilde(&self, z_i: T, z: T) -> Result<T> {
        let eps = match &self.antiderivative {
            Some(e) => e(z) - e(z_i),
            None => {
                let cfg = QuadConfig {
                    rel_tol: T::lit(1e-13),
                    abs_tol: T::zero(),
                    ..QuadConfig::default()
                };
                integrate_real(|s| (self.epsilon)(s), z_i, z, &cfg)?.0
            }
        };
        Ok(self.v_inv * (z - z_i) + eps / self.pump_filter_diff)
    }

    /// `Δk̄₀ - v⁻¹(Ω₃ - Ω₂)`.
    pub fn constant_gap(&self) -> T {
        self.mean_mismatch - self.v_inv * self.pump_filter_diff
    }
}

/// `Δv_g⁻¹(z) = e^{-az/v}/v` and `q̃(z) = (1 - e^{-az/v})/a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialGradient<T> {
    pub a: T,
    pub v: T,
}

pub fn make_exponential_gradient<T: Real>(a: T, v: T) -> Result<ExponentialGradient<T>> {
    if !(v > T::zero() && v.is_finite()) {
        return Err(Error::domain(format!(
            "scaling velocity must be positive, got {v}"
        )));
    }
    if !a.is_finite() {
        return Err(Error::domain("acceleration must be finite"));
    }
    if a < T::zero() {
        log::warn!("negative gradient a = {a}: decelerating detector");
    }
    Ok(ExponentialGradient { a, v })
}

impl<T: Real> ExponentialGradient<T> {
    /// `e^{-az/v} - 1`.
    fn decay_m1(&self, z: T) -> T {
        (-self.a * z / self.v).exp_m1()
    }

    pub fn rel_inv_group_velocity(&self, z: T) -> T {
        (-self.a * z / self.v).exp() / self.v
    }

    pub fn q_tilde(&self, z: T) -> T {
        if self.a == T::zero() {
            z / self.v
        } else {
            -self.decay_m1(z) / self.a
        }
    }
}

/// Longitudinal χ⁽²⁾ shape (arbitrary units).
#[derive(Clone)]
pub enum Chi2Profile<T: Real> {
    Uniform {
        chi0: T,
    },
    /// `+χ₀` for the first `duty` fraction of each period, `-χ₀` after;
    /// periods start at `origin`.
    Poled {
        chi0: T,
        period: T,
        duty: T,
        origin: T,
    },
    Custom(RealFn<T>),
}

impl<T: Real> fmt::Debug for Chi2Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform { chi0 } => write!(f, "Uniform({chi0})"),
            Self::Poled {
                chi0,
                period,
                duty,
                origin,
            } => write!(f, "Poled({chi0}, {period}, {duty}, {origin})"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl<T: Real> Chi2Profile<T> {
    pub fn poled(chi0: T, period: T, duty: T, origin: T) -> Result<Self> {
        if !(period > T::zero()) {
            return Err(Error::domain("poling period must be positive"));
        }
        if !(duty > T::zero() && duty <= T::one()) {
            return Err(Error::domain(format!(
                "duty must lie in (0, 1], got {duty}"
            )));
        }
        Ok(Self::Poled {
            chi0,
            period,
            duty,
            origin,
        })
    }

    pub fn eval(&self, z: T) -> T {
        match self {
            Self::Uniform { chi0 } => *chi0,
            Self::Poled {
                chi0,
                period,
                duty,
                origin,
            } => {
                let x = (z - *origin) / *period;
                if x - x.floor() < *duty {
                    *chi0
                } else {
                    -*chi0
                }
            }
            Self::Custom(f) => f(z),
        }
    }

    /// Interior points of `(lo, hi)` where a poled profile flips sign.
    pub fn domain_walls(&self, lo: T, hi: T) -> Vec<T> {
        let Self::Poled {
            period,
            duty,
            origin,
            ..
        } = self
        else {
            return Vec::new();
        };
        if *duty >= T::one() {
            return Vec::new();
        }
        let mut walls = Vec::new();
        let mut k = ((lo - *origin) / *period).floor();
        loop {
            let start = *origin + k * *period;
            if start >= hi {
                break;
            }
            for w in [start, start + *duty * *period] {
                if w > lo && w < hi {
                    walls.push(w);
                }
            }
            k += T::one();
        }
        walls
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_gradient_limits() {
        let g = make_exponential_gradient(0.0f64, 2.0).unwrap();
        assert_eq!(g.q_tilde(3.0), 1.5);
        assert_eq!(g.rel_inv_group_velocity(3.0), 0.5);
        let g = make_exponential_gradient(1e-9f64, 2.0).unwrap();
        // second-order term az²/(2v²) ≈ 1.1e-9
        assert!((g.q_tilde(3.0) - 1.5).abs() < 2e-9);
        let g = make_exponential_gradient(2.0f64, 1.0).unwrap();
        assert!((g.q_tilde(1e3) - 0.5).abs() < 1e-15);
        assert_eq!(g.q_tilde(0.0), 0.0);
        assert!(make_exponential_gradient(1.0, 0.0).is_err());
    }

    #[test]
    fn poled_walls_and_values() {
        let p = Chi2Profile::poled(1.0, 2.0, 0.5, 0.0).unwrap();
        assert_eq!(p.eval(0.5), 1.0);
        assert_eq!(p.eval(1.5), -1.0);
        assert_eq!(p.eval(-0.5), -1.0);
        assert_eq!(p.domain_walls(-1.0, 3.0), vec![0.0, 1.0, 2.0]);
        assert!(Chi2Profile::poled(1.0, 2.0, 0.0, 0.0).is_err());
        let unpoled = Chi2Profile::poled(1.0, 2.0, 1.0, 0.0).unwrap();
        assert!(unpoled.domain_walls(0.0, 10.0).is_empty());
        assert_eq!(unpoled.eval(1.9), 1.0);
    }

    #[test]
    fn exponential_epsilon_reproduces_gradient() {
        let (a, v) = (3e14f64, 1e9);
        let e = EpsilonProfile::exponential(a, v, 1.7e6, 1.6e15).unwrap();
        let g = make_exponential_gradient(a, v).unwrap();
        for &z in &[-5e-5, 0.0, 2e-5, 5e-5] {
            let lhs = e.rel_inv_group_velocity(z);
            let rhs = g.rel_inv_group_velocity(z);
            // v⁻¹ + ε/ΔΩ cancels when e^{-az/v} ≪ 1, so the error scales with v⁻¹
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.max(1.0 / v),
                "{z}: {lhs} vs {rhs}"
            );
        }
    }
}
