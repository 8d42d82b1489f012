use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn udwsim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udwsim"))
        .args(args)
        .current_dir(dir)
        .env("UDWSIM_WORKERS", "2")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn csv_row(path: &Path) -> Vec<(String, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    header.into_iter().zip(row).collect()
}

fn cell(row: &[(String, f64)], name: &str) -> f64 {
    row.iter().find(|(h, _)| h == name).unwrap().1
}

const SPDC: &str = r#"
[spdc]
omega3_rad_per_s = 3.6e15
omega2_rad_per_s = 2.0e15
pulse_duration_s = 1e-12
pulse_energy_j = 1e-9
quasi_monochromatic = true
area_um2 = 25.0
length_um = 20.0
chi2_pm_per_v = 10.0
accel_per_s = 5e13
"#;

#[test]
fn udw_inertial_run_matches_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"
kind = "udw"

[quad]
rel_tol = 1e-12
abs_tol = 1e-15

[udw]
gap_rad_per_s = 1.3
field_omega_rad_per_s = 0.7
trajectory = "inertial"
velocity_c = 0.4
offset_s = 0.5
window_s = [-6.0, 6.0]
"#,
    );
    let out = udwsim(&["run", &cfg], tmp.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let row = csv_row(&tmp.path().join("out/udw.csv"));
    let p = cell(&row, "probability");
    let exact = cell(&row, "reference_probability");
    assert!((p - exact).abs() < 1e-8 * exact, "{p} vs {exact}");
    let (re, rr) = (cell(&row, "amplitude_re"), cell(&row, "reference_re"));
    assert!((re - rr).abs() < 1e-8 * exact.sqrt());

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["kind"], "udw");
    assert_eq!(manifest["config"]["udw"]["velocity_c"], 0.4);
}

#[test]
fn spdc_and_analogy_kinds() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &format!("kind = \"spdc\"\n{SPDC}"));
    let out = udwsim(&["run", &cfg], tmp.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let row = csv_row(&tmp.path().join("out/spdc.csv"));
    assert!(cell(&row, "probability") > 0.0);
    assert!(cell(&row, "kappa_v_per_m2") > 0.0);
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/manifest.json")).unwrap())
            .unwrap();
    let rec = &manifest["results"]["reconciliation"];
    assert_eq!(rec["within_factor_two"], true);
    assert!(rec["operating_point"]["mean_mismatch"].as_f64().unwrap() > 0.0);

    let cfg = write_config(
        tmp.path(),
        &format!("kind = \"analogy-check\"\n[quad]\nabs_tol = 0.0\n{SPDC}"),
    );
    let out = udwsim(&["run", &cfg], tmp.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let row = csv_row(&tmp.path().join("out/analogy.csv"));
    assert!(cell(&row, "rel_diff") < 1e-8);
}

#[test]
fn empty_length_list_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "kind = \"fig2-sweep\"\n[sweep]\nlengths_um = []\n",
    );
    let out = udwsim(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("out/fig2.csv").exists());
}

#[test]
fn unknown_key_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "kind = \"udw\"\n[udw]\ngap = 1.0\nfield_omega_rad_per_s = 1.0\ntrajectory = \"inertial\"\nwindow_s = [-1.0, 1.0]\n",
    );
    let out = udwsim(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gap"));
}

#[test]
fn physics_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    // ω above the pump frequency passes validation but not the model
    let cfg = write_config(
        tmp.path(),
        &format!("kind = \"spdc\"\n{SPDC}omega_rad_per_s = 4e15\n"),
    );
    let out = udwsim(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(1));

    let cfg = write_config(
        tmp.path(),
        "kind = \"udw\"\n[udw]\ngap_rad_per_s = 1.0\nfield_omega_rad_per_s = -1.0\ntrajectory = \"inertial\"\nwindow_s = [-1.0, 1.0]\n",
    );
    let out = udwsim(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.matches("config error").count(), 1, "{err}");
}

#[test]
fn small_fig2_sweep_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (sub, workers) in [("a", "1"), ("b", "3")] {
        let out = udwsim(
            &[
                "--workers",
                workers,
                "fig2",
                "--out",
                sub,
                "--lengths",
                "5,40",
                "--a-points",
                "8",
            ],
            tmp.path(),
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        bodies.push(fs::read(tmp.path().join(sub).join("fig2.csv")).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let text = String::from_utf8(bodies.pop().unwrap()).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 8);
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("b/manifest.json")).unwrap())
            .unwrap();
    let two_over_pi = manifest["results"]["summary"]["two_over_pi"]
        .as_f64()
        .unwrap();
    assert!((two_over_pi - 2.0 / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn check_subcommand_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = udwsim(&["check"], tmp.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).matches("PASS").count(),
        7
    );
}
