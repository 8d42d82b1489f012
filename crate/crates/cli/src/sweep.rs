//! Acceleration sweep of the exponential-gradient crystal.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use udwsim::dispersion::KtpOperatingPoint;
use udwsim::oscquad::QuadConfig;
use udwsim::spdc::{poled_reference, uniform_accel_amplitude, AccelOptions};
use udwsim::udw::planck_response;

use crate::config::SweepSection;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub length_m: f64,
    pub accel_per_s: f64,
    /// `2πΩ/a`.
    pub planck_x: f64,
    /// `|A′_S/(κ̃η̃L)|²`; NaN when the point failed.
    pub probability: f64,
    pub abs_error: f64,
    /// `x/(e^x - 1)` with `x = 2πΩ/a`.
    pub planck_reference: f64,
    pub status: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepTiming {
    pub length_m: f64,
    pub accel_per_s: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoledLine {
    pub length_m: f64,
    pub amplitude: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    #[serde(skip)]
    pub timings: Vec<SweepTiming>,
    pub operating_point: KtpOperatingPoint,
    pub two_over_pi: f64,
    pub two_over_pi_squared: f64,
    pub poled: Vec<PoledLine>,
}

impl SweepResult {
    /// Rows of one crystal length, in increasing `a`.
    pub fn curve(&self, length_m: f64) -> Vec<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.length_m == length_m)
            .collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status != "ok").count()
    }
}

/// `points` log-spaced values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| {
            if k + 1 == points {
                hi
            } else {
                (l0 + (l1 - l0) * k as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

/// Acceleration grid: explicit bounds, or `2πΩ/a` from 50 down to 0.05.
pub fn accel_grid(section: &SweepSection, gap: f64) -> Vec<f64> {
    let tau_gap = std::f64::consts::TAU * gap;
    let lo = section.a_min_per_s.unwrap_or(tau_gap / 50.0);
    let hi = section.a_max_per_s.unwrap_or(tau_gap / 0.05);
    log_grid(lo, hi, section.a_points)
}

fn evaluate(
    op: &KtpOperatingPoint,
    length: f64,
    a: f64,
    opts: &AccelOptions<f64>,
    quad: &QuadConfig<f64>,
) -> (SweepRow, SweepTiming) {
    let start = Instant::now();
    let x = std::f64::consts::TAU * op.gap / a;
    let planck = planck_response(op.gap, a).unwrap_or(f64::NAN);
    let r = uniform_accel_amplitude(
        op.gap_per_length,
        op.omega1,
        a,
        op.v,
        -length / 2.0,
        length / 2.0,
        opts,
        quad,
    );
    let (probability, abs_error, status) = match r {
        Ok(r) => (
            r.normalized_probability(),
            2.0 * r.normalized.norm() * r.abs_error / length,
            "ok".to_string(),
        ),
        Err(e) => {
            log::warn!("L = {length:e} m, a = {a:e} /s: {e}");
            (f64::NAN, f64::NAN, e.to_string())
        }
    };
    let row = SweepRow {
        length_m: length,
        accel_per_s: a,
        planck_x: x,
        probability,
        abs_error,
        planck_reference: planck,
        status,
    };
    let timing = SweepTiming {
        length_m: length,
        accel_per_s: a,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    (row, timing)
}

/// Runs the sweep on a pool of `workers` threads (0 picks the default).
pub fn fig2_sweep(
    section: &SweepSection,
    quad: &QuadConfig<f64>,
    workers: usize,
) -> Result<SweepResult, CliError> {
    section.validate()?;
    let op = KtpOperatingPoint::worked_example()?;
    let opts = AccelOptions {
        cut_rate: section.cut_rate_rad,
        length_limit: Some(section.length_limit_um * 1e-6),
        ..AccelOptions::default()
    };
    let accels = accel_grid(section, op.gap);
    let items: Vec<(f64, f64)> = section
        .lengths_um
        .iter()
        .flat_map(|&l| accels.iter().map(move |&a| (l * 1e-6, a)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let mut out: Vec<(SweepRow, SweepTiming)> = pool.install(|| {
        items
            .par_iter()
            .map(|&(l, a)| evaluate(&op, l, a, &opts, quad))
            .collect()
    });
    out.sort_by(|x, y| {
        x.0.length_m
            .total_cmp(&y.0.length_m)
            .then(x.0.accel_per_s.total_cmp(&y.0.accel_per_s))
    });
    let (rows, timings) = out.into_iter().unzip();
    let mut lengths: Vec<f64> = section.lengths_um.iter().map(|l| l * 1e-6).collect();
    lengths.sort_by(f64::total_cmp);
    lengths.dedup();
    let poled = lengths
        .iter()
        .map(|&l| {
            poled_reference(op.mean_mismatch, op.poling_period, 0.5, l).map(|p| PoledLine {
                length_m: l,
                amplitude: p.amplitude,
                probability: p.probability,
            })
        })
        .collect::<Result<_, _>>()?;
    let two_over_pi = 2.0 / std::f64::consts::PI;
    Ok(SweepResult {
        rows,
        timings,
        operating_point: op,
        two_over_pi,
        two_over_pi_squared: two_over_pi * two_over_pi,
        poled,
    })
}
