//! Quick invariant suite behind `udwsim check`.

use std::f64::consts::PI;

use udwsim::analogy::{amplitude_equivalence_check, ScalingVelocity};
use udwsim::dispersion::{Chi2Profile, EpsilonProfile, KtpOperatingPoint, TypeIProfiles};
use udwsim::oscquad::QuadConfig;
use udwsim::sinc;
use udwsim::spdc::{
    poled_reference, uniform_accel_amplitude, AccelOptions, Mismatch, PumpPulse, SpdcScenario,
    WaveguideSpec,
};
use udwsim::udw::accel_closed_form;

use crate::config::SweepSection;
use crate::output::write_sweep;
use crate::sweep::fig2_sweep;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn failed(name: &'static str, e: impl std::fmt::Display) -> CheckOutcome {
    outcome(name, false, e.to_string())
}

fn tight() -> QuadConfig<f64> {
    QuadConfig {
        abs_tol: 0.0,
        ..QuadConfig::default()
    }
}

fn reconciliation() -> CheckOutcome {
    match KtpOperatingPoint::worked_example() {
        Ok(op) => {
            let ratio = op.gap / udwsim::dispersion::QUOTED_GAP;
            outcome(
                "ktp reconciliation",
                op.mean_mismatch > 0.0 && (0.5..=2.0).contains(&ratio),
                format!(
                    "Δk̄₀ = {:.4e} /m, Ω = {:.4e} rad/s ({ratio:.3} of quoted)",
                    op.mean_mismatch, op.gap
                ),
            )
        }
        Err(e) => failed("ktp reconciliation", e),
    }
}

fn epsilon_cancellation(op: &KtpOperatingPoint) -> CheckOutcome {
    let mut worst = 0.0f64;
    for k in 1..=5 {
        let amp = 1e5 * k as f64;
        let freq = 3e4 * k as f64;
        let e = match EpsilonProfile::new(
            move |z: f64| amp * (freq * z).sin() + amp * (z * 1e4).powi(2),
            op.mean_mismatch,
            op.v_inv,
            op.omega1,
        ) {
            Ok(e) => e,
            Err(e) => return failed("epsilon cancellation", e),
        };
        let g0 = e.constant_gap();
        for j in 0..50 {
            let z = -5e-5 + 1e-4 * j as f64 / 49.0;
            worst = worst.max(((e.effective_gap(z) - g0) / g0).abs());
        }
    }
    outcome(
        "epsilon cancellation",
        worst < 1e-12,
        format!("max rel deviation {worst:.2e}"),
    )
}

fn dual_formula() -> CheckOutcome {
    let mut worst = 0.0f64;
    for k in 0..=12 {
        let b = 10f64.powf(-3.0 + 0.5 * k as f64);
        match accel_closed_form(b, 1.0, 1.0) {
            Ok(c) => {
                worst = worst.max(((c.ln_planck - c.ln_gamma) / c.ln_planck.abs().max(1.0)).abs())
            }
            Err(e) => return failed("planck vs gamma", e),
        }
    }
    outcome(
        "planck vs gamma",
        worst < 1e-12,
        format!("max rel ln difference {worst:.2e}"),
    )
}

fn sinc_limit(op: &KtpOperatingPoint) -> CheckOutcome {
    let len = 1e-5;
    let a = 1e-6 * op.v / len;
    match uniform_accel_amplitude(
        op.gap_per_length,
        op.omega1,
        a,
        op.v,
        -len / 2.0,
        len / 2.0,
        &AccelOptions::default(),
        &QuadConfig::default(),
    ) {
        Ok(r) => {
            let expected = sinc(op.mean_mismatch * len / 2.0).abs();
            let rel = (r.normalized.norm() - expected).abs() / expected;
            outcome(
                "a → 0 sinc limit",
                rel < 1e-4,
                format!("rel error {rel:.2e}"),
            )
        }
        Err(e) => failed("a → 0 sinc limit", e),
    }
}

fn equivalence(op: &KtpOperatingPoint) -> CheckOutcome {
    let build = || -> udwsim::Result<SpdcScenario<f64>> {
        let e = EpsilonProfile::exponential(6e13, op.v, op.mean_mismatch, op.omega1)?;
        let wg = WaveguideSpec::new(
            -1.5e-5,
            1.5e-5,
            25e-12,
            Chi2Profile::Uniform { chi0: 1e-11 },
            TypeIProfiles::ktp(),
        )?;
        let pump = PumpPulse::new(op.omega3, 1e-12, 1e-9)?.quasi_monochromatic();
        SpdcScenario::new(pump, op.omega2, wg, Mismatch::Epsilon(e))
    };
    let r = build().and_then(|s| {
        amplitude_equivalence_check(&s, ScalingVelocity::new(op.v)?, op.omega1, &tight())
    });
    match r {
        Ok(r) => outcome(
            "udw/spdc equivalence",
            r.rel_diff < 1e-8,
            format!("rel diff {:.2e}", r.rel_diff),
        ),
        Err(e) => failed("udw/spdc equivalence", e),
    }
}

fn poled(op: &KtpOperatingPoint) -> CheckOutcome {
    match poled_reference(
        op.mean_mismatch,
        op.poling_period,
        0.5,
        40.0 * op.poling_period,
    ) {
        Ok(p) => outcome(
            "poled reference",
            (p.amplitude - 2.0 / PI).abs() < 1e-10,
            format!(
                "amplitude {:.12}, probability {:.12}",
                p.amplitude, p.probability
            ),
        ),
        Err(e) => failed("poled reference", e),
    }
}

fn parallel_determinism() -> CheckOutcome {
    let section = SweepSection {
        lengths_um: vec![5.0, 20.0],
        a_points: 6,
        ..SweepSection::default()
    };
    let quad = QuadConfig::default();
    let mut bodies = Vec::new();
    for workers in [1, 4] {
        let mut buf = Vec::new();
        match fig2_sweep(&section, &quad, workers).and_then(|r| Ok(write_sweep(&mut buf, &r.rows)?))
        {
            Ok(()) => bodies.push(buf),
            Err(e) => return failed("parallel determinism", e),
        }
    }
    outcome(
        "parallel determinism",
        bodies[0] == bodies[1],
        format!("{} bytes", bodies[0].len()),
    )
}

pub fn run_checks() -> Vec<CheckOutcome> {
    let op = match KtpOperatingPoint::worked_example() {
        Ok(op) => op,
        Err(e) => return vec![failed("ktp reconciliation", e)],
    };
    vec![
        reconciliation(),
        epsilon_cancellation(&op),
        dual_formula(),
        sinc_limit(&op),
        equivalence(&op),
        poled(&op),
        parallel_determinism(),
    ]
}
