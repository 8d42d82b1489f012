//! Scenario execution and on-disk artifacts.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};
use udwsim::analogy::{amplitude_equivalence_check, ScalingVelocity};
use udwsim::dispersion::{
    reconcile_ktp, Chi2Profile, EpsilonProfile, KtpOperatingPoint, SellmeierSet, TypeIProfiles,
    QUOTED_GAP,
};
use udwsim::oscquad::QuadConfig;
use udwsim::spdc::{spdc_amplitude, Mismatch, PumpPulse, SpdcScenario, WaveguideSpec};
use udwsim::udw::{
    accel_closed_form, accel_infinite_window, b_coefficient, inertial_closed_form,
    inertial_window_integral, transition_amplitude, AccelWindowConfig, DetectorSpec, FieldMode,
    SwitchingFunction, Trajectory,
};

use crate::config::{Kind, ScenarioConfig, SpdcSection, TrajectoryName, UdwSection};
use crate::error::CliError;
use crate::output::{num, write_sweep, write_table, write_timings};
use crate::stats::spearman;
use crate::sweep::{fig2_sweep, SweepResult};

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub rows: usize,
    pub failures: usize,
}

#[derive(Debug, Serialize)]
struct Provenance {
    name: String,
    citation: String,
    version: u32,
    window_nm: [f64; 2],
}

fn provenance() -> Provenance {
    let set = SellmeierSet::<f64>::ktp();
    let w = set.axes.first().map(|a| a.window_um).unwrap_or((0.0, 0.0));
    Provenance {
        name: set.name,
        citation: set.citation,
        version: set.version,
        window_nm: [w.0 * 1e3, w.1 * 1e3],
    }
}

fn reconciliation(op: &KtpOperatingPoint) -> Value {
    let ratio = op.gap / QUOTED_GAP;
    json!({
        "operating_point": op,
        "quoted_gap_rad_per_s": QUOTED_GAP,
        "gap_ratio": ratio,
        "within_factor_two": (0.5..=2.0).contains(&ratio),
        "note": "the quoted gap and the quoted v, mismatch values are mutually inconsistent in \
                 their exponents; the gap is therefore only checked to within a factor of two",
    })
}

fn complex_cells(z: Complex<f64>) -> [String; 2] {
    [num(z.re), num(z.im)]
}

fn udw_rows(s: &UdwSection, quad: &QuadConfig<f64>) -> Result<Vec<Vec<String>>, CliError> {
    let spec = DetectorSpec::constant_gap(
        s.gap_rad_per_s,
        s.coupling_dimensionless,
        Complex::new(1.0, 0.0),
    );
    let mode = FieldMode::new(s.field_omega_rad_per_s)?;
    let b = b_coefficient(&spec, &mode)?;
    let [lo, hi] = s.window_s;
    let symmetric = (lo + hi).abs() <= 1e-12 * (hi - lo);
    let nan = Complex::new(f64::NAN, f64::NAN);
    let (r, reference, reference_prob, printed) = match s.trajectory {
        TrajectoryName::Inertial => {
            let traj = Trajectory::inertial(s.velocity_c, s.offset_s)?;
            let r = transition_amplitude(
                &spec,
                &traj,
                &SwitchingFunction::rect(lo, hi),
                &mode,
                (lo, hi),
                quad,
            )?;
            if symmetric {
                let w = s.field_omega_rad_per_s;
                let exact =
                    b * inertial_window_integral(s.gap_rad_per_s, w, s.velocity_c, s.offset_s, hi)?;
                let printed =
                    inertial_closed_form(s.gap_rad_per_s, w, w, s.velocity_c, s.offset_s, hi)?;
                (r, exact, exact.norm_sqr(), printed)
            } else {
                (r, nan, f64::NAN, nan)
            }
        }
        TrajectoryName::Accelerated => {
            let a = s.accel_per_s.unwrap_or(f64::NAN);
            if s.infinite_window {
                let r = accel_infinite_window(
                    &spec,
                    a,
                    &mode,
                    hi,
                    &AccelWindowConfig::default(),
                    quad,
                )?;
                let c = accel_closed_form(s.gap_rad_per_s, s.field_omega_rad_per_s, a)?;
                (r, nan, c.planck * b.norm_sqr(), nan)
            } else {
                let traj = Trajectory::uniform_accel(a)?;
                let r = transition_amplitude(
                    &spec,
                    &traj,
                    &SwitchingFunction::rect(lo, hi),
                    &mode,
                    (lo, hi),
                    quad,
                )?;
                (r, nan, f64::NAN, nan)
            }
        }
    };
    let mut row = Vec::new();
    row.extend(complex_cells(r.amplitude));
    row.push(num(r.probability()));
    row.push(num(r.abs_error));
    row.extend(complex_cells(reference));
    row.push(num(reference_prob));
    row.extend(complex_cells(printed));
    Ok(vec![row])
}

/// Builds the waveguide scenario and its operating point.
pub fn spdc_scenario(s: &SpdcSection) -> Result<(SpdcScenario<f64>, KtpOperatingPoint), CliError> {
    let profiles = TypeIProfiles::ktp();
    let op = reconcile_ktp(&profiles, s.omega3_rad_per_s, s.omega2_rad_per_s)?;
    let mismatch = if s.accel_per_s == 0.0 {
        EpsilonProfile::uniform(op.mean_mismatch, op.v_inv, op.omega1)?
    } else {
        EpsilonProfile::exponential(s.accel_per_s, op.v, op.mean_mismatch, op.omega1)?
    };
    let chi0 = s.chi2_pm_per_v * 1e-12;
    let chi2 = match s.poling_period_um {
        Some(p) => Chi2Profile::poled(chi0, p * 1e-6, s.duty, 0.0)?,
        None => Chi2Profile::Uniform { chi0 },
    };
    let len = s.length_um * 1e-6;
    let z_i = s.z_start_um.map(|z| z * 1e-6).unwrap_or(-len / 2.0);
    let wg = WaveguideSpec::new(z_i, z_i + len, s.area_um2 * 1e-12, chi2, profiles)?;
    let mut pump = PumpPulse::new(s.omega3_rad_per_s, s.pulse_duration_s, s.pulse_energy_j)?;
    pump.quasi_monochromatic = s.quasi_monochromatic;
    let scenario = SpdcScenario::new(pump, s.omega2_rad_per_s, wg, Mismatch::Epsilon(mismatch))?;
    Ok((scenario, op))
}

fn spdc_rows(
    s: &SpdcSection,
    quad: &QuadConfig<f64>,
) -> Result<(Vec<Vec<String>>, Value), CliError> {
    let (sc, op) = spdc_scenario(s)?;
    let omega = s.omega_rad_per_s.unwrap_or(sc.omega1());
    let r = spdc_amplitude(&sc, omega, quad)?;
    let eta = s.chi2_pm_per_v * 1e-12 / (op.n1 * op.n2 * op.n3).sqrt();
    let normalized = if eta == 0.0 {
        0.0
    } else {
        (r.integral.norm() / (eta * sc.waveguide.length())).powi(2)
    };
    let kappa = sc.kappa()?;
    let mut row = vec![num(omega)];
    row.extend(complex_cells(r.amplitude));
    row.push(num(r.probability()));
    row.push(num(r.abs_error));
    row.push(num(normalized));
    row.push(num(kappa));
    Ok((vec![row], reconciliation(&op)))
}

fn analogy_rows(
    s: &SpdcSection,
    quad: &QuadConfig<f64>,
) -> Result<(Vec<Vec<String>>, Value), CliError> {
    let (sc, op) = spdc_scenario(s)?;
    let omega = s.omega_rad_per_s.unwrap_or(sc.omega1());
    let v = ScalingVelocity::new(s.scaling_velocity_m_per_s.unwrap_or(op.v))?;
    let r = amplitude_equivalence_check(&sc, v, omega, quad)?;
    let mut row = vec![num(omega), num(v.get())];
    row.extend(complex_cells(r.spdc));
    row.extend(complex_cells(r.udw));
    row.push(num(r.rel_diff));
    row.push(num(r.combined_rel_error));
    Ok((vec![row], reconciliation(&op)))
}

/// Shape statistics of the sweep curves.
pub fn sweep_summary(result: &SweepResult) -> Value {
    let mut lengths: Vec<f64> = result.rows.iter().map(|r| r.length_m).collect();
    lengths.dedup();
    let curves: Vec<Value> = lengths
        .iter()
        .map(|&l| {
            let c = result.curve(l);
            let p: Vec<f64> = c.iter().map(|r| r.probability).collect();
            let planck: Vec<f64> = c.iter().map(|r| r.planck_reference).collect();
            let upper = &p[p.len() / 2..];
            json!({
                "length_m": l,
                "spearman_vs_planck": spearman(&p, &planck),
                "decreasing_upper_half": upper.windows(2).all(|w| w[1] < w[0]),
                "smallest_a_probability": p.first(),
            })
        })
        .collect();
    json!({
        "curves": curves,
        "two_over_pi": result.two_over_pi,
        "two_over_pi_squared": result.two_over_pi_squared,
        "poled": result.poled,
        "failures": result.failures(),
    })
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes `<kind>.csv` and `manifest.json` into the output directory.
pub fn run(cfg: &ScenarioConfig, workers: usize) -> Result<RunSummary, CliError> {
    cfg.validate()?;
    let started = unix_now();
    let clock = Instant::now();
    let quad = cfg.quad.to_config()?;
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir)?;
    let stem = match cfg.kind {
        Kind::Udw => "udw",
        Kind::Spdc => "spdc",
        Kind::AnalogyCheck => "analogy",
        Kind::Fig2Sweep => "fig2",
    };
    let csv = dir.join(format!("{stem}.csv"));
    let (rows, failures, extra) = match cfg.kind {
        Kind::Udw => {
            let s = cfg.udw.as_ref().expect("validated");
            let body = udw_rows(s, &quad)?;
            write_table(
                create(&csv)?,
                &[
                    "amplitude_re",
                    "amplitude_im",
                    "probability",
                    "abs_error",
                    "reference_re",
                    "reference_im",
                    "reference_probability",
                    "printed_form_re",
                    "printed_form_im",
                ],
                &body,
            )?;
            (body.len(), 0, Value::Null)
        }
        Kind::Spdc => {
            let (body, rec) = spdc_rows(cfg.spdc.as_ref().expect("validated"), &quad)?;
            write_table(
                create(&csv)?,
                &[
                    "omega_rad_per_s",
                    "amplitude_re",
                    "amplitude_im",
                    "probability",
                    "abs_error",
                    "normalized_probability",
                    "kappa_v_per_m2",
                ],
                &body,
            )?;
            (body.len(), 0, json!({ "reconciliation": rec }))
        }
        Kind::AnalogyCheck => {
            let (body, rec) = analogy_rows(cfg.spdc.as_ref().expect("validated"), &quad)?;
            write_table(
                create(&csv)?,
                &[
                    "omega_rad_per_s",
                    "scaling_velocity_m_per_s",
                    "spdc_re",
                    "spdc_im",
                    "udw_re",
                    "udw_im",
                    "rel_diff",
                    "combined_rel_error",
                ],
                &body,
            )?;
            (body.len(), 0, json!({ "reconciliation": rec }))
        }
        Kind::Fig2Sweep => {
            let section = cfg.sweep.clone().unwrap_or_default();
            let result = fig2_sweep(&section, &quad, workers)?;
            write_sweep(create(&csv)?, &result.rows)?;
            write_timings(create(&dir.join("fig2_timings.csv"))?, &result.timings)?;
            let extra = json!({
                "reconciliation": reconciliation(&result.operating_point),
                "summary": sweep_summary(&result),
            });
            (result.rows.len(), result.failures(), extra)
        }
    };
    let manifest = dir.join("manifest.json");
    let body = json!({
        "tool": "udwsim",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": cfg.kind,
        "config": cfg,
        "sellmeier": provenance(),
        "results": extra,
        "rows": rows,
        "failed_rows": failures,
        "workers": workers,
        "started_unix_s": started,
        "wall_time_s": clock.elapsed().as_secs_f64(),
    });
    serde_json::to_writer_pretty(create(&manifest)?, &body).map_err(|e| CliError::Io(e.into()))?;
    Ok(RunSummary {
        csv,
        manifest,
        rows,
        failures,
    })
}
