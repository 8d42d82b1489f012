//! Scenario files. Every physical quantity carries its unit in the key name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use udwsim::oscquad::{Method, QuadConfig};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Udw,
    Spdc,
    AnalogyCheck,
    Fig2Sweep,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: Kind,
    #[serde(default)]
    pub quad: QuadSection,
    #[serde(default)]
    pub output: OutputSection,
    pub udw: Option<UdwSection>,
    pub spdc: Option<SpdcSection>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_phase_per_panel_rad: f64,
    pub max_panels: usize,
    pub method: MethodName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Auto,
    AdaptiveGk,
    Filon,
}

impl Default for QuadSection {
    fn default() -> Self {
        let q = QuadConfig::<f64>::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_phase_per_panel_rad: q.max_phase_per_panel,
            max_panels: q.max_panels,
            method: MethodName::Auto,
        }
    }
}

impl QuadSection {
    pub fn to_config(&self) -> Result<QuadConfig<f64>, CliError> {
        let cfg = QuadConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_phase_per_panel: self.max_phase_per_panel_rad,
            max_panels: self.max_panels,
            method: match self.method {
                MethodName::Auto => Method::Auto,
                MethodName::AdaptiveGk => Method::AdaptiveGk,
                MethodName::Filon => Method::Filon,
            },
        };
        cfg.validate()
            .map_err(|e| CliError::Config(format!("[quad]: {e}")))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Relative paths resolve against the config file's directory.
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryName {
    Inertial,
    Accelerated,
}

/// Detector scenario in units with c = 1 (lengths in light-seconds).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UdwSection {
    pub gap_rad_per_s: f64,
    pub field_omega_rad_per_s: f64,
    #[serde(default = "one")]
    pub coupling_dimensionless: f64,
    pub trajectory: TrajectoryName,
    #[serde(default)]
    pub velocity_c: f64,
    #[serde(default)]
    pub offset_s: f64,
    pub accel_per_s: Option<f64>,
    pub window_s: [f64; 2],
    /// Accelerated only: extrapolate the window to infinite time.
    #[serde(default)]
    pub infinite_window: bool,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

/// Waveguide scenario in SI units.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpdcSection {
    pub omega3_rad_per_s: f64,
    pub omega2_rad_per_s: f64,
    pub pulse_duration_s: f64,
    pub pulse_energy_j: f64,
    #[serde(default)]
    pub quasi_monochromatic: bool,
    pub area_um2: f64,
    pub length_um: f64,
    /// Defaults to a crystal centred on z = 0.
    pub z_start_um: Option<f64>,
    pub chi2_pm_per_v: f64,
    pub poling_period_um: Option<f64>,
    #[serde(default = "half")]
    pub duty: f64,
    /// Exponential relative-inverse-group-velocity gradient; 0 is uniform.
    #[serde(default)]
    pub accel_per_s: f64,
    /// Frequency of mode 1; defaults to Ω₃ - Ω₂.
    pub omega_rad_per_s: Option<f64>,
    /// Analogy check only; defaults to the reconciled v.
    pub scaling_velocity_m_per_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_lengths")]
    pub lengths_um: Vec<f64>,
    pub a_min_per_s: Option<f64>,
    pub a_max_per_s: Option<f64>,
    #[serde(default = "default_points")]
    pub a_points: usize,
    #[serde(default = "default_limit")]
    pub length_limit_um: f64,
    #[serde(default = "default_cut")]
    pub cut_rate_rad: f64,
}

pub fn default_lengths() -> Vec<f64> {
    vec![5.0, 10.0, 25.0, 50.0, 100.0]
}

fn default_points() -> usize {
    60
}

fn default_limit() -> f64 {
    100.0
}

fn default_cut() -> f64 {
    1e4
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            lengths_um: default_lengths(),
            a_min_per_s: None,
            a_max_per_s: None,
            a_points: default_points(),
            length_limit_um: default_limit(),
            cut_rate_rad: default_cut(),
        }
    }
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

impl SweepSection {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.lengths_um.is_empty() {
            return Err(CliError::Config("sweep.lengths_um is empty".into()));
        }
        for &l in &self.lengths_um {
            positive("sweep.lengths_um entry", l)?;
        }
        if self.a_points < 2 {
            return Err(CliError::Config("sweep.a_points must be at least 2".into()));
        }
        for (name, a) in [
            ("sweep.a_min_per_s", self.a_min_per_s),
            ("sweep.a_max_per_s", self.a_max_per_s),
        ] {
            if let Some(a) = a {
                positive(name, a)?;
            }
        }
        if let (Some(lo), Some(hi)) = (self.a_min_per_s, self.a_max_per_s) {
            if lo >= hi {
                return Err(CliError::Config(
                    "sweep.a_min_per_s must be below a_max_per_s".into(),
                ));
            }
        }
        positive("sweep.length_limit_um", self.length_limit_um)?;
        positive("sweep.cut_rate_rad", self.cut_rate_rad)
    }
}

impl UdwSection {
    pub fn validate(&self) -> Result<(), CliError> {
        positive("udw.field_omega_rad_per_s", self.field_omega_rad_per_s)?;
        if !(self.window_s[0] < self.window_s[1]) {
            return Err(CliError::Config("udw.window_s must be increasing".into()));
        }
        match self.trajectory {
            TrajectoryName::Inertial => {
                if !(self.velocity_c.abs() < 1.0) {
                    return Err(CliError::Config(
                        "udw.velocity_c must satisfy |v| < 1".into(),
                    ));
                }
            }
            TrajectoryName::Accelerated => {
                let a = self.accel_per_s.ok_or_else(|| {
                    CliError::Config(
                        "udw.accel_per_s is required for an accelerated trajectory".into(),
                    )
                })?;
                positive("udw.accel_per_s", a)?;
            }
        }
        Ok(())
    }
}

impl SpdcSection {
    pub fn validate(&self) -> Result<(), CliError> {
        positive("spdc.omega3_rad_per_s", self.omega3_rad_per_s)?;
        positive("spdc.omega2_rad_per_s", self.omega2_rad_per_s)?;
        if self.omega2_rad_per_s >= self.omega3_rad_per_s {
            return Err(CliError::Config("spdc: need omega2 < omega3".into()));
        }
        positive("spdc.pulse_duration_s", self.pulse_duration_s)?;
        positive("spdc.pulse_energy_j", self.pulse_energy_j)?;
        positive("spdc.area_um2", self.area_um2)?;
        positive("spdc.length_um", self.length_um)?;
        if let Some(p) = self.poling_period_um {
            positive("spdc.poling_period_um", p)?;
        }
        if !(self.duty > 0.0 && self.duty <= 1.0) {
            return Err(CliError::Config("spdc.duty must lie in (0, 1]".into()));
        }
        if !self.accel_per_s.is_finite() || !self.chi2_pm_per_v.is_finite() {
            return Err(CliError::Config("spdc: non-finite value".into()));
        }
        Ok(())
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if cfg.output.dir.is_relative() {
            if let Some(parent) = path.parent() {
                cfg.output.dir = parent.join(&cfg.output.dir);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.quad.to_config()?;
        let missing = |s: &str| CliError::Config(format!("kind needs a [{s}] section"));
        match self.kind {
            Kind::Udw => self.udw.as_ref().ok_or_else(|| missing("udw"))?.validate(),
            Kind::Spdc | Kind::AnalogyCheck => self
                .spdc
                .as_ref()
                .ok_or_else(|| missing("spdc"))?
                .validate(),
            Kind::Fig2Sweep => match &self.sweep {
                Some(s) => s.validate(),
                None => Ok(()),
            },
        }
    }
}
