//! Canonical oscillatory integrands on [0, 1], shared with the cli acceptance target.

use num_complex::Complex;
use udwsim::oscquad::{oracle_richardson, OscillatoryIntegrand};

pub type C = Complex<f64>;

pub fn amplitudes() -> Vec<(&'static str, fn(f64) -> C)> {
    vec![
        ("one", |_| C::new(1.0, 0.0)),
        ("poly", |z| C::new(z * z + 0.5 * z - 0.2, 0.3 * z)),
        ("gauss", |z| C::new((-(z - 0.5).powi(2) / 0.05).exp(), 0.0)),
        ("cubic", |z| C::new(1.0 - z * z * z, 2.0 * z - 1.0)),
    ]
}

pub type Phase = (&'static str, fn(f64) -> f64, fn(f64) -> f64);

pub fn phases() -> Vec<Phase> {
    vec![
        ("linear", |z| 40.0 * z, |_| 40.0),
        ("quadratic", |z| 50.0 * z * z, |z| 100.0 * z),
        (
            "exp_up",
            |z| 5.0 * (4.0 * z).exp(),
            |z| 20.0 * (4.0 * z).exp(),
        ),
        (
            "exp_down",
            |z| -200.0 * (-3.0 * z).exp(),
            |z| 600.0 * (-3.0 * z).exp(),
        ),
        (
            "cubic",
            |z| 30.0 * (z - 0.3).powi(3) + 10.0 * z,
            |z| 90.0 * (z - 0.3).powi(2) + 10.0,
        ),
    ]
}

pub fn suite() -> Vec<(String, OscillatoryIntegrand<f64>)> {
    let mut out = Vec::new();
    for (gn, g) in amplitudes() {
        for (pn, p, d) in phases() {
            out.push((
                format!("{gn}/{pn}"),
                OscillatoryIntegrand::new(g, p, 0.0, 1.0).with_derivative(d),
            ));
        }
    }
    out
}

pub fn reference(f: &OscillatoryIntegrand<f64>) -> C {
    oracle_richardson(f, 500_000).unwrap()
}
