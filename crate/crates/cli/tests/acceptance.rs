//! Acceptance criteria 1-9. Prints one line per criterion and exits non-zero
//! if any of them fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use udwsim::analogy::{amplitude_equivalence_check, ScalingVelocity};
use udwsim::dispersion::{
    Chi2Profile, EpsilonProfile, KtpOperatingPoint, TypeIProfiles, QUOTED_GAP,
};
use udwsim::oscquad::{integrate, integrate_filon, QuadConfig};
use udwsim::sinc;
use udwsim::spdc::{
    uniform_accel_amplitude, AccelOptions, Mismatch, PumpPulse, SpdcScenario, WaveguideSpec,
};
use udwsim::udw::{
    accel_closed_form, accel_infinite_window, b_coefficient, inertial_window_integral,
    transition_amplitude, AccelWindowConfig, DetectorSpec, FieldMode, SwitchingFunction,
    Trajectory,
};
use udwsim_cli::config::{QuadSection, SweepSection};
use udwsim_cli::run::sweep_summary;
use udwsim_cli::stats::spearman;
use udwsim_cli::sweep::fig2_sweep;

#[path = "../../core/tests/common/canonical.rs"]
mod canonical;

type Outcome = Result<String, String>;

fn op() -> KtpOperatingPoint {
    KtpOperatingPoint::worked_example().expect("KTP operating point")
}

fn within(name: &str, rel: f64, tol: f64) -> Result<(), String> {
    if rel < tol {
        Ok(())
    } else {
        Err(format!("{name}: rel {rel:.3e} >= {tol:e}"))
    }
}

fn planckian() -> Outcome {
    let a = 1.0f64;
    let cfg = QuadConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        ..QuadConfig::default()
    };
    let mut worst_window = 0.0f64;
    for ratio in [0.2, 1.0, 5.0] {
        let spec = DetectorSpec::unit(ratio * a);
        let mode = FieldMode::new(a).map_err(|e| e.to_string())?;
        let exact = accel_closed_form(ratio * a, a, a)
            .map_err(|e| e.to_string())?
            .probability;
        let r = accel_infinite_window(
            &spec,
            a,
            &mode,
            40.0 / a,
            &AccelWindowConfig::default(),
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        let rel = (r.probability() - exact).abs() / exact;
        within(&format!("Ω/a = {ratio}"), rel, 1e-2)?;
        worst_window = worst_window.max(rel);
    }
    let mut worst_dual = 0.0f64;
    for i in 0..=600 {
        let ratio = 10f64.powf(-3.0 + i as f64 / 100.0);
        let c = accel_closed_form(ratio, 2.0, 1.0).map_err(|e| e.to_string())?;
        let rel = if c.planck > 1e-300 {
            (c.planck - c.gamma).abs() / c.planck
        } else {
            (c.ln_planck - c.ln_gamma).abs() / c.ln_planck.abs()
        };
        within(&format!("dual formula at Ω/a = {ratio:e}"), rel, 1e-12)?;
        worst_dual = worst_dual.max(rel);
    }
    Ok(format!(
        "window rel {worst_window:.2e}, dual rel {worst_dual:.2e}"
    ))
}

fn inertial() -> Outcome {
    let cfg = QuadConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        ..QuadConfig::default()
    };
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let gap = rng.gen_range(0.1..5.0);
        let w = rng.gen_range(0.1..5.0);
        let v = rng.gen_range(-0.9..0.9);
        let x0 = rng.gen_range(-3.0..3.0);
        let t = rng.gen_range(0.5..20.0);
        let run = || -> udwsim::Result<f64> {
            let spec = DetectorSpec::unit(gap);
            let mode = FieldMode::new(w)?;
            let traj = Trajectory::inertial(v, x0)?;
            let num = transition_amplitude(
                &spec,
                &traj,
                &SwitchingFunction::rect(-t, t),
                &mode,
                (-t, t),
                &cfg,
            )?;
            let exact = b_coefficient(&spec, &mode)? * inertial_window_integral(gap, w, v, x0, t)?;
            Ok((num.amplitude - exact).norm() / exact.norm())
        };
        let rel = run().map_err(|e| e.to_string())?;
        within(
            &format!("Ω={gap:.3} ω={w:.3} v={v:.3} x₀={x0:.3} T={t:.3}"),
            rel,
            1e-8,
        )?;
        worst = worst.max(rel);
    }
    Ok(format!("50 cases, worst rel {worst:.2e}"))
}

fn quadrature_suite() -> Outcome {
    let cfg = QuadConfig::default();
    let (mut cases, mut honest) = (0usize, 0usize);
    let mut worst = 0.0f64;
    for (name, f) in canonical::suite() {
        let exact = canonical::reference(&f);
        for (method, r) in [
            ("gk", integrate(&f, &cfg)),
            ("filon", integrate_filon(&f, &cfg)),
        ] {
            let r = r.map_err(|e| format!("{name} {method}: {e}"))?;
            let rel = (r.value - exact).norm() / exact.norm().max(1e-3);
            within(&format!("{name} {method}"), rel, 1e-6)?;
            worst = worst.max(rel);
            cases += 1;
            if (r.value - exact).norm() <= 10.0 * r.abs_error + 1e-12 {
                honest += 1;
            }
        }
    }
    if cases != 40 || honest * 100 < 95 * cases {
        return Err(format!("error honesty {honest}/{cases}"));
    }
    Ok(format!(
        "{} integrands x 2 methods, worst rel {worst:.2e}, honesty {honest}/{cases}",
        cases / 2
    ))
}

fn equivalence() -> Outcome {
    let p = op();
    let quad = QuadConfig {
        abs_tol: 0.0,
        ..QuadConfig::default()
    };
    let mut rng = rand::rngs::StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let a = 10f64.powf(rng.gen_range(13.0..14.2));
        let len = rng.gen_range(5e-6..5e-5);
        let run = || -> udwsim::Result<f64> {
            let e = EpsilonProfile::exponential(a, p.v, p.mean_mismatch, p.omega1)?;
            let wg = WaveguideSpec::new(
                -len / 2.0,
                len / 2.0,
                25e-12,
                Chi2Profile::Uniform { chi0: 1e-11 },
                TypeIProfiles::ktp(),
            )?;
            let pump = PumpPulse::new(p.omega3, 1e-12, 1e-9)?.quasi_monochromatic();
            let s = SpdcScenario::new(pump, p.omega2, wg, Mismatch::Epsilon(e))?;
            Ok(
                amplitude_equivalence_check(&s, ScalingVelocity::new(p.v)?, p.omega1, &quad)?
                    .rel_diff,
            )
        };
        let rel = run().map_err(|e| e.to_string())?;
        within(&format!("a = {a:.3e} L = {len:.3e}"), rel, 1e-8)?;
        worst = worst.max(rel);
    }
    Ok(format!("5 scenarios, worst rel {worst:.2e}"))
}

fn sinc_limit() -> Outcome {
    let p = op();
    let mut parts = Vec::new();
    for len in [10e-6, 100e-6] {
        let a = 1e-6 * p.v / len;
        let r = uniform_accel_amplitude(
            p.gap_per_length,
            p.omega1,
            a,
            p.v,
            -len / 2.0,
            len / 2.0,
            &AccelOptions::default(),
            &QuadConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        let expected = sinc(p.mean_mismatch * len / 2.0).abs();
        let rel = (r.normalized.norm() - expected).abs() / expected;
        within(&format!("L = {} μm", len * 1e6), rel, 1e-4)?;
        parts.push(format!("L={}μm rel {rel:.2e}", len * 1e6));
    }
    Ok(parts.join(", "))
}

fn fig2_shape() -> Outcome {
    let quad = QuadSection::default()
        .to_config()
        .map_err(|e| e.to_string())?;
    let result = fig2_sweep(&SweepSection::default(), &quad, 0).map_err(|e| e.to_string())?;
    if result.failures() > 0 {
        return Err(format!("{} sweep rows failed", result.failures()));
    }
    let curve = |um: f64| {
        let rows = result.curve(um * 1e-6);
        let p: Vec<f64> = rows.iter().map(|r| r.probability).collect();
        let planck: Vec<f64> = rows.iter().map(|r| r.planck_reference).collect();
        (p, planck)
    };
    let (p100, planck100) = curve(100.0);
    let rho = spearman(&p100, &planck100);
    let (p5, _) = curve(5.0);
    let upper = &p5[p5.len() / 2..];
    let rises: Vec<usize> = upper
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] >= w[0])
        .map(|(i, _)| i + p5.len() / 2)
        .collect();
    let detail = format!(
        "ρ(100 μm) = {rho:.4}, 5 μm upper half non-decreasing steps {}/{}",
        rises.len(),
        upper.len() - 1
    );
    if rho > 0.9 && rises.is_empty() && !p100.is_empty() && p5.len() >= 4 {
        Ok(detail)
    } else {
        let summary = sweep_summary(&result);
        Err(format!("{detail}; per-curve summary {}", summary["curves"]))
    }
}

fn reconciliation() -> Outcome {
    let p = KtpOperatingPoint::worked_example().map_err(|e| e.to_string())?;
    let gap = p.mean_mismatch * p.v + p.omega2 - p.omega3;
    let ratio = gap / QUOTED_GAP;
    let detail = format!(
        "Δk̄₀ = {:.6e} /m, Ω = {gap:.4e} rad/s, ratio {ratio:.3}",
        p.mean_mismatch
    );
    if p.mean_mismatch > 0.0 && (0.5..=2.0).contains(&ratio) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn epsilon_cancellation() -> Outcome {
    let p = op();
    let mut rng = rand::rngs::StdRng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let amp = rng.gen_range(1e4..1e6);
        let freq = rng.gen_range(1e4..1e6);
        let quad_coef = rng.gen_range(-1e13..1e13);
        let shift = rng.gen_range(0.0..6.3);
        let e = EpsilonProfile::new(
            move |z: f64| amp * (freq * z + shift).sin() + quad_coef * z * z,
            p.mean_mismatch,
            p.v_inv,
            p.omega1,
        )
        .map_err(|e| e.to_string())?;
        let g0 = e.constant_gap();
        for j in 0..200 {
            let z = -5e-5 + 1e-4 * j as f64 / 199.0;
            let rel = ((e.effective_gap(z) - g0) / g0).abs();
            within(&format!("z = {z:.3e}"), rel, 1e-12)?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("5 profiles x 200 points, worst rel {worst:.2e}"))
}

fn fig2_csv(dir: &Path, workers: usize) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_udwsim"))
        .args(["--workers", &workers.to_string(), "fig2", "--out"])
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    std::fs::read(dir.join("fig2.csv")).map_err(|e| format!("{}: {e}", dir.display()))
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [("a", 1), ("b", 1), ("c", 4)];
    let mut bodies = Vec::new();
    for (sub, workers) in runs {
        bodies.push(fig2_csv(&tmp.path().join(sub), workers)?);
    }
    if bodies[0] != bodies[1] {
        return Err("two single-worker runs differ".into());
    }
    if bodies[0] != bodies[2] {
        return Err("1 and 4 workers differ".into());
    }
    Ok(format!(
        "3 runs (workers 1, 1, 4) identical, {} bytes",
        bodies[0].len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("planckian oracle", planckian, Duration::from_secs(10)),
        ("inertial oracle", inertial, Duration::from_secs(5)),
        (
            "quadrature suite",
            quadrature_suite,
            Duration::from_secs(30),
        ),
        ("udw/spdc equivalence", equivalence, Duration::from_secs(30)),
        ("a -> 0 sinc limit", sinc_limit, Duration::from_secs(10)),
        ("fig2 shape", fig2_shape, Duration::from_secs(300)),
        ("ktp reconciliation", reconciliation, Duration::from_secs(1)),
        (
            "epsilon cancellation",
            epsilon_cancellation,
            Duration::from_secs(1),
        ),
        ("determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()))
            .and_then(|detail| {
                let took = start.elapsed();
                if took > *budget {
                    Err(format!("{detail}; took {took:.1?}, budget {budget:?}"))
                } else {
                    Ok(detail)
                }
            });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({took:.2?}) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}) {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
