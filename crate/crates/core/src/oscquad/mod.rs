//! Quadrature for `∫ g(z) exp(i φ(z)) dz` with rapidly varying phase.
//!
//! Two engines share one adaptive driver: a phase-partitioned
//! Gauss-Kronrod rule and a Filon-type rule that integrates the linearised
//! phase exactly. A composite Simpson oracle is kept alongside for testing.

mod adaptive;
mod filon;
mod kronrod;
mod partition;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::QuadError;
use crate::scalar::{KahanSum, Real};

use adaptive::{refine, Outcome, PanelEval, PanelRule};
use partition::{partition, SplitRule};

pub type AmplitudeFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;
pub type PhaseFn<T> = crate::scalar::RealFn<T>;

/// Integrand `g(z) exp(i φ(z))` on `[lo, hi]`.
#[derive(Clone)]
pub struct OscillatoryIntegrand<T: Real> {
    amplitude: AmplitudeFn<T>,
    phase: PhaseFn<T>,
    phase_derivative: Option<PhaseFn<T>>,
    lo: T,
    hi: T,
}

impl<T: Real> fmt::Debug for OscillatoryIntegrand<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OscillatoryIntegrand")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("phase_derivative", &self.phase_derivative.is_some())
            .finish_non_exhaustive()
    }
}

impl<T: Real> OscillatoryIntegrand<T> {
    pub fn new<G, P>(amplitude: G, phase: P, lo: T, hi: T) -> Self
    where
        G: Fn(T) -> Complex<T> + Send + Sync + 'static,
        P: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            amplitude: Arc::new(amplitude),
            phase: Arc::new(phase),
            phase_derivative: None,
            lo,
            hi,
        }
    }

    /// Attaches `φ′`. Needed by the Filon engine.
    pub fn with_derivative<D>(mut self, derivative: D) -> Self
    where
        D: Fn(T) -> T + Send + Sync + 'static,
    {
        self.phase_derivative = Some(Arc::new(derivative));
        self
    }

    pub fn interval(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn has_derivative(&self) -> bool {
        self.phase_derivative.is_some()
    }

    #[inline]
    pub fn amplitude_at(&self, z: T) -> Complex<T> {
        (self.amplitude)(z)
    }

    #[inline]
    pub fn phase_at(&self, z: T) -> T {
        (self.phase)(z)
    }

    pub fn derivative_at(&self, z: T) -> Option<T> {
        self.phase_derivative.as_ref().map(|d| d(z))
    }

    /// Full integrand value at `z`.
    #[inline]
    pub fn eval(&self, z: T) -> Complex<T> {
        let p = (self.phase)(z);
        (self.amplitude)(z) * Complex::new(p.cos(), p.sin())
    }

    /// `(conj g, -φ)`: integrates to the complex conjugate.
    pub fn mirrored(&self) -> Self {
        let g = Arc::clone(&self.amplitude);
        let p = Arc::clone(&self.phase);
        Self {
            amplitude: Arc::new(move |z| g(z).conj()),
            phase: Arc::new(move |z| -p(z)),
            phase_derivative: self.phase_derivative.as_ref().map(|d| {
                let d = Arc::clone(d);
                Arc::new(move |z| -d(z)) as PhaseFn<T>
            }),
            lo: self.lo,
            hi: self.hi,
        }
    }

    /// Same integrand with `φ + c`.
    pub fn with_phase_offset(&self, c: T) -> Self {
        let p = Arc::clone(&self.phase);
        Self {
            phase: Arc::new(move |z| p(z) + c),
            ..self.clone()
        }
    }

    /// Same integrand on a different interval.
    pub fn restricted(&self, lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            ..self.clone()
        }
    }

    /// Compares `φ′` against a central difference of `φ` at `samples`
    /// deterministic interior points, to relative tolerance `rel`.
    pub fn check_phase_derivative(&self, samples: usize, rel: T) -> Result<(), QuadError> {
        let Some(d) = &self.phase_derivative else {
            return Ok(());
        };
        let width = self.hi - self.lo;
        let golden = T::lit(0.618_033_988_749_894_9);
        let mut u = T::lit(0.5);
        for _ in 0..samples {
            u = (u + golden).fract();
            let z = self.lo + width * (T::lit(0.05) + T::lit(0.9) * u);
            let h = T::epsilon().cbrt() * width;
            let fd = ((self.phase)(z + h) - (self.phase)(z - h)) / (h + h);
            let exact = d(z);
            let scale = exact.abs().max(fd.abs()).max(T::epsilon());
            if (fd - exact).abs() > rel * scale {
                return Err(QuadError::InvalidConfig(format!(
                    "phase derivative inconsistent at z = {:e}: supplied {:e}, finite difference {:e}",
                    z.as_f64(),
                    exact.as_f64(),
                    fd.as_f64()
                )));
            }
        }
        Ok(())
    }
}

/// Which panel rule `integrate` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Plain adaptive Gauss-Kronrod starting from the whole interval.
    AdaptiveGk,
    /// Filon panels; falls back to Gauss-Kronrod near stationary points.
    Filon,
    /// Gauss-Kronrod on an initial partition with bounded phase per panel.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_phase_per_panel: T,
    pub max_panels: usize,
    pub method: Method,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-8),
            abs_tol: T::lit(1e-14),
            max_phase_per_panel: T::FRAC_PI_2(),
            max_panels: 200_000,
            method: Method::Auto,
        }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > T::zero()) {
            return Err(QuadError::InvalidConfig("rel_tol must be positive".into()));
        }
        if !(self.abs_tol >= T::zero()) {
            return Err(QuadError::InvalidConfig(
                "abs_tol must be non-negative".into(),
            ));
        }
        if !(self.max_phase_per_panel > T::zero() && self.max_phase_per_panel <= T::PI()) {
            return Err(QuadError::InvalidConfig(
                "max_phase_per_panel must lie in (0, pi]".into(),
            ));
        }
        if self.max_panels < 1 {
            return Err(QuadError::InvalidConfig(
                "max_panels must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    pub abs_error: T,
    pub panels: usize,
    /// Total variation of the phase seen by the initial partition (radians).
    pub total_phase: T,
    /// Panels evaluated by Gauss-Kronrod inside a Filon run.
    pub fallback_panels: usize,
    /// Refinement stopped because panels hit their roundoff floor.
    pub roundoff_limited: bool,
}

impl<T: Real> QuadResult<T> {
    fn zero() -> Self {
        Self {
            value: Complex::new(T::zero(), T::zero()),
            abs_error: T::zero(),
            panels: 1,
            total_phase: T::zero(),
            fallback_panels: 0,
            roundoff_limited: false,
        }
    }

    fn from_outcome(o: Outcome<T>, total_phase: T) -> Self {
        Self {
            value: o.value,
            abs_error: o.abs_error,
            panels: o.bounds.len().max(1),
            total_phase,
            fallback_panels: o.fallback_panels,
            roundoff_limited: o.roundoff_limited,
        }
    }
}

struct GkRule<'a, T: Real>(&'a OscillatoryIntegrand<T>);

impl<T: Real> PanelRule<T> for GkRule<'_, T> {
    fn eval(&self, a: T, b: T) -> Result<PanelEval<T>, QuadError> {
        let f = |z: T| self.0.eval(z);
        kronrod::gk15(&f, a, b)
    }
}

fn check_interval<T: Real>(f: &OscillatoryIntegrand<T>) -> Result<bool, QuadError> {
    let (lo, hi) = f.interval();
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(QuadError::InvalidInterval {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    Ok(lo == hi)
}

/// Integrates with the method selected in `cfg`.
pub fn integrate<T: Real>(
    f: &OscillatoryIntegrand<T>,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>, QuadError> {
    cfg.validate()?;
    if check_interval(f)? {
        return Ok(QuadResult::zero());
    }
    match cfg.method {
        Method::Filon => integrate_filon(f, cfg),
        Method::AdaptiveGk => {
            let (lo, hi) = f.interval();
            let (_, total) = partition(
                f.phase.as_ref(),
                lo,
                hi,
                T::max_value(),
                1,
                SplitRule::PhaseChange,
            )?;
            let out = refine(&GkRule(f), &[(lo, hi)], cfg)?;
            Ok(QuadResult::from_outcome(out, total))
        }
        Method::Auto => integrate_gk_partitioned(f, cfg),
    }
}

fn integrate_gk_partitioned<T: Real>(
    f: &OscillatoryIntegrand<T>,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>, QuadError> {
    let (lo, hi) = f.interval();
    let (panels, total) = partition(
        f.phase.as_ref(),
        lo,
        hi,
        cfg.max_phase_per_panel,
        cfg.max_panels,
        SplitRule::PhaseChange,
    )?;
    let out = refine(&GkRule(f), &panels, cfg)?;
    Ok(QuadResult::from_outcome(out, total))
}

/// Filon integration. Without a phase derivative the whole interval goes
/// through the Gauss-Kronrod engine and every panel counts as a fallback.
pub fn integrate_filon<T: Real>(
    f: &OscillatoryIntegrand<T>,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>, QuadError> {
    cfg.validate()?;
    if check_interval(f)? {
        return Ok(QuadResult::zero());
    }
    let Some(deriv) = f.phase_derivative.as_ref() else {
        log::debug!("no phase derivative supplied, Filon falls back to Gauss-Kronrod");
        let mut r = integrate_gk_partitioned(f, cfg)?;
        r.fallback_panels = r.panels;
        return Ok(r);
    };
    let (lo, hi) = f.interval();
    let (panels, total) = partition(
        f.phase.as_ref(),
        lo,
        hi,
        cfg.max_phase_per_panel,
        cfg.max_panels,
        SplitRule::Linearity(deriv.as_ref()),
    )?;
    let rule = filon::FilonRule {
        integrand: f,
        derivative: deriv.as_ref(),
    };
    let out = refine(&rule, &panels, cfg)?;
    // total variation is measured by the sampled partition; the Linearity
    // rule can leave long panels so recompute it over the final layout
    let mut variation = KahanSum::new();
    for &(a, b) in &out.bounds {
        variation.add((f.phase_at(b) - f.phase_at(a)).abs());
    }
    let total = total.max(variation.value());
    Ok(QuadResult::from_outcome(out, total))
}

struct FnRule<F>(F);

impl<T: Real, F: Fn(T) -> Complex<T>> PanelRule<T> for FnRule<F> {
    fn eval(&self, a: T, b: T) -> Result<PanelEval<T>, QuadError> {
        kronrod::gk15(&self.0, a, b)
    }
}

/// Adaptive Gauss-Kronrod for a smooth real integrand. Returns
/// `(value, abs_error)`; `hi < lo` flips the sign.
pub fn integrate_real<T: Real, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    cfg: &QuadConfig<T>,
) -> Result<(T, T), QuadError> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(QuadError::InvalidInterval {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    if lo == hi {
        return Ok((T::zero(), T::zero()));
    }
    let (a, b, sign) = if lo < hi {
        (lo, hi, T::one())
    } else {
        (hi, lo, -T::one())
    };
    let rule = FnRule(|z: T| Complex::new(f(z), T::zero()));
    let out = refine(&rule, &[(a, b)], cfg)?;
    Ok((sign * out.value.re, out.abs_error))
}

/// Composite Simpson rule with `panels` (even, ≥ 2) subintervals.
pub fn oracle_brute<T: Real>(
    f: &OscillatoryIntegrand<T>,
    panels: usize,
) -> Result<Complex<T>, QuadError> {
    if panels < 2 || panels % 2 != 0 {
        return Err(QuadError::InvalidConfig(format!(
            "Simpson panel count must be even and >= 2, got {panels}"
        )));
    }
    if check_interval(f)? {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let (lo, hi) = f.interval();
    let h = (hi - lo) / T::lit(panels as f64);
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for i in 0..=panels {
        let z = if i == panels {
            hi
        } else {
            lo + h * T::lit(i as f64)
        };
        let v = f.eval(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(QuadError::NonFinite { z: z.as_f64() });
        }
        let w = if i == 0 || i == panels {
            T::one()
        } else if i % 2 == 1 {
            T::lit(4.0)
        } else {
            T::lit(2.0)
        };
        re.add(v.re * w);
        im.add(v.im * w);
    }
    Ok(Complex::new(re.value(), im.value()) * (h / T::lit(3.0)))
}

/// Richardson-extrapolated Simpson: `S_2n + (S_2n - S_n) / 15`.
pub fn oracle_richardson<T: Real>(
    f: &OscillatoryIntegrand<T>,
    panels: usize,
) -> Result<Complex<T>, QuadError> {
    let coarse = oracle_brute(f, panels)?;
    let fine = oracle_brute(f, 2 * panels)?;
    Ok(fine + (fine - coarse) / T::lit(15.0))
}

/// Total variation of `φ` sampled on `samples` equally spaced points.
pub fn phase_extent<T: Real>(f: &OscillatoryIntegrand<T>, samples: usize) -> Result<T, QuadError> {
    if samples < 2 {
        return Err(QuadError::InvalidConfig(
            "phase_extent needs at least 2 samples".into(),
        ));
    }
    let (lo, hi) = f.interval();
    let h = (hi - lo) / T::lit((samples - 1) as f64);
    let mut acc = KahanSum::new();
    let mut prev = f.phase_at(lo);
    if !prev.is_finite() {
        return Err(QuadError::NonFinite { z: lo.as_f64() });
    }
    for i in 1..samples {
        let z = if i == samples - 1 {
            hi
        } else {
            lo + h * T::lit(i as f64)
        };
        let p = f.phase_at(z);
        if !p.is_finite() {
            return Err(QuadError::NonFinite { z: z.as_f64() });
        }
        acc.add((p - prev).abs());
        prev = p;
    }
    Ok(acc.value())
}
