//! Special functions used by the closed-form oracles.

use num_complex::Complex;

use crate::scalar::Real;

// B_{2k} / (2k (2k - 1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln |Γ(z)|` for complex `z` away from the poles.
///
/// Shifts `z` right with the recurrence until the Stirling series converges.
pub fn ln_abs_gamma<T: Real>(z: Complex<T>) -> T {
    if z.re < T::lit(0.5) && z.im.abs() < T::lit(1e-3) {
        // reflection keeps the real-axis neighbourhood of the poles accurate
        let pi = T::PI();
        let s = (z * pi).sin();
        return pi.ln() - s.norm().ln() - ln_abs_gamma(Complex::new(T::one(), T::zero()) - z);
    }
    let mut w = z;
    let mut shift = T::zero();
    let threshold = T::lit(16.0);
    while w.re < threshold {
        shift += w.norm().ln();
        w += T::one();
    }
    let half = T::lit(0.5);
    let lead = (w - half) * w.ln() - w;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex::new(T::zero(), T::zero());
    for c in STIRLING {
        series += term * T::lit(c);
        term *= inv2;
    }
    lead.re + half * (T::TAU()).ln() + series.re - shift
}
