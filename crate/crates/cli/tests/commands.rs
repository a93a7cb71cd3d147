use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gup_jcm_cli::commands::wigner_summary;
use gup_jcm_cli::config::{Preset, RunConfig};
use serde_json::Value;

fn gupjcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gupjcm"))
        .args(args)
        .output()
        .expect("spawn gupjcm")
}

fn run_ok(args: &[&str]) {
    let out = gupjcm(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn csv_column(path: &Path, name: &str) -> Vec<f64> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rabi_default_and_zero_gamma() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("rabi");
    run_ok(&["rabi", "--out", dir.to_str().unwrap()]);
    let shift = csv_column(&dir.join("rabi_shift.csv"), "delta_omega");
    assert!((1e-12..1e-11).contains(&shift[1]), "{}", shift[1]);
    let manifest = json(&dir.join("manifest.json"));
    assert_eq!(manifest["command"], "rabi");
    assert!(manifest["constants"]["hbar"].as_f64().unwrap() > 0.0);

    let zero = tmp.path().join("zero");
    run_ok(&[
        "rabi",
        "--set",
        "gup.gamma=0",
        "--out",
        zero.to_str().unwrap(),
    ]);
    assert!(csv_column(&zero.join("rabi_shift.csv"), "delta_omega")
        .iter()
        .all(|&d| d == 0.0));
}

#[test]
fn dispersive_fig1_and_standard_limit() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("fig1");
    run_ok(&[
        "dispersive",
        "--preset",
        "fig1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    let report = json(&dir.join("decomposition.json"));
    let scaled = report["pacs1_scaled"].as_f64().unwrap();
    assert!((2.9e-5..3.1e-5).contains(&scaled), "{scaled}");

    let flat = tmp.path().join("flat");
    run_ok(&[
        "dispersive",
        "--set",
        "gup.gamma=0",
        "--out",
        flat.to_str().unwrap(),
    ]);
    let report = json(&flat.join("decomposition.json"));
    for key in ["pacs1_amp", "pacs2_amp"] {
        assert_eq!(report["decomposition"][key], serde_json::json!([0.0, 0.0]));
    }
    assert!(report["infidelity"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn dispersive_reports_linearity_bound() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gupjcm(&[
        "dispersive",
        "--set",
        "dispersive.t=1e12",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("linear expansion invalid") && err.contains("time bound"),
        "{err}"
    );
}

#[test]
fn wigner_self_reference_is_zero() {
    let mut cfg = RunConfig::preset(Preset::Fig1);
    cfg.wigner.self_reference = true;
    cfg.wigner.grid = gup_jcm::wigner::GridSpec::square(4.0, 41);
    let (summary, grid) = wigner_summary(&cfg).unwrap();
    assert!(grid.values.iter().flatten().all(|&v| v == 0.0));
    assert_eq!(summary.max_abs_delta, 0.0);
}

#[test]
fn wigner_max_is_grid_converged() {
    let cfg = RunConfig::preset(Preset::Fig1);
    let (coarse, _) = wigner_summary(&cfg).unwrap();
    let mut fine_cfg = cfg.clone();
    fine_cfg.wigner.grid = cfg.wigner.grid.refined();
    let (fine, _) = wigner_summary(&fine_cfg).unwrap();
    let change = (fine.max_abs_delta / coarse.max_abs_delta - 1.0).abs();
    assert!(change < 0.01, "{change}");
}

#[test]
fn wigner_diff_writes_grid() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&[
        "wigner-diff",
        "--set",
        "wigner.grid.nx=21",
        "--set",
        "wigner.grid.ny=21",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(
        csv_column(&tmp.path().join("wigner_diff.csv"), "delta_w").len(),
        21 * 21
    );
    assert!(
        json(&tmp.path().join("wigner_summary.json"))["max_abs_delta"]
            .as_f64()
            .unwrap()
            > 0.0
    );
}

#[test]
fn zeta_presets_and_degenerate_model() {
    let tmp = tempfile::tempdir().unwrap();
    for preset in ["fig2", "fig3"] {
        let dir = tmp.path().join(preset);
        run_ok(&[
            "zeta-maps",
            "--preset",
            preset,
            "--out",
            dir.to_str().unwrap(),
        ]);
        let s = json(&dir.join("zeta_summary.json"));
        assert_eq!(s["slice_omega"].as_f64().unwrap(), 1e16);
        let key = if preset == "fig2" {
            "max_zeta_lq_on_slice"
        } else {
            "max_zeta_rq_on_slice"
        };
        assert!(s[key].as_f64().unwrap() < 1.0);
    }
    let out = gupjcm(&[
        "zeta-maps",
        "--set",
        "zeta.epsilon=1.5",
        "--out",
        tmp.path().join("d").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate GUP model"));
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!gupjcm(&["rabi", "--preset", "fig4"]).status.success());
    assert!(!gupjcm(&["rabi", "--set", "gup.nope=1"]).status.success());
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("cfg.json");
    fs::write(
        &path,
        RunConfig::default()
            .to_json()
            .unwrap()
            .replace("\"schema_version\": 1", "\"schema_version\": 9"),
    )
    .unwrap();
    let out = gupjcm(&[
        "rabi",
        "--config",
        path.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema version"));
}
