//! Initial panel layouts driven by the phase function.

use crate::error::QuadError;
use crate::scalar::Real;

fn finite<T: Real>(v: T, z: T) -> Result<T, QuadError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::NonFinite { z: z.as_f64() })
    }
}

/// Criterion deciding whether a panel needs splitting.
pub(crate) enum SplitRule<'a, T> {
    /// Total phase variation (endpoint/midpoint sampled) must not exceed the budget.
    PhaseChange,
    /// Deviation of the phase from its midpoint tangent must not exceed the budget.
    Linearity(&'a (dyn Fn(T) -> T + Send + Sync)),
}

/// Recursive bisection of `[lo, hi]` until every panel satisfies `rule`.
///
/// Panels come out ordered left to right. Regions where the phase changes
/// quickly end up with proportionally more panels, which for an
/// exponentially varying phase rate gives a geometric layout.
pub(crate) fn partition<T: Real>(
    phase: &(dyn Fn(T) -> T + Send + Sync),
    lo: T,
    hi: T,
    max_phase: T,
    max_panels: usize,
    rule: SplitRule<'_, T>,
) -> Result<(Vec<(T, T)>, T), QuadError> {
    let two = T::lit(2.0);
    let mut out = Vec::new();
    let mut total = T::zero();
    let phi_lo = finite(phase(lo), lo)?;
    let phi_hi = finite(phase(hi), hi)?;
    let mut stack = vec![(lo, hi, phi_lo, phi_hi)];

    while let Some((a, b, pa, pb)) = stack.pop() {
        let m = a + (b - a) / two;
        let pm = finite(phase(m), m)?;
        let variation = (pm - pa).abs() + (pb - pm).abs();
        let scale = a.abs().max(b.abs());
        let tiny = b - a <= T::lit(64.0) * T::epsilon() * scale;
        let ok = match &rule {
            SplitRule::PhaseChange => variation <= max_phase,
            SplitRule::Linearity(deriv) => {
                let d = finite(deriv(m), m)?;
                let ra = (pa - pm - d * (a - m)).abs();
                let rb = (pb - pm - d * (b - m)).abs();
                ra.max(rb) <= max_phase && (pm - (pa + pb) / two).abs() <= max_phase
            }
        };
        if ok || tiny {
            out.push((a, b));
            total += variation;
            if out.len() > max_panels {
                let pending: f64 = stack
                    .iter()
                    .map(|&(_, _, x, y)| ((y - x).abs() / max_phase).as_f64().ceil().max(1.0))
                    .sum();
                let seen = total.as_f64()
                    + stack
                        .iter()
                        .map(|&(_, _, x, y)| (y - x).abs().as_f64())
                        .sum::<f64>();
                return Err(QuadError::PhaseBudget {
                    required_panels: out.len() + pending as usize,
                    max_panels,
                    total_phase: seen,
                });
            }
        } else {
            stack.push((m, b, pm, pb));
            stack.push((a, m, pa, pm));
        }
    }
    Ok((out, total))
}
