//! End-to-end checks of the installed binary: exit codes, JSON output, and
//! the sweep artifact set.

use std::fs;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn swingby(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swingby"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn help_exits_zero() {
    let out = swingby(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("swingby"));
}

#[test]
fn unknown_subcommand_exits_one_with_usage() {
    let out = swingby(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn missing_config_file_is_a_usage_error() {
    let out = swingby(&["run", "--config", "/nonexistent/maneuver.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read config"));
}

#[test]
fn invalid_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"planet": "venus", "kind": "gam", "psi_deg": 270.0,
        "altitude_km": 250.0, "wings": 2}"#).unwrap();
    let out = swingby(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_rejects_a_sweep_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    fs::write(&path, r#"{"planet": "venus", "kinds": ["agam"]}"#).unwrap();
    let out = swingby(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep subcommand"));
}

#[test]
fn bands_reports_the_documented_mars_window() {
    let out = swingby(&["bands", "--planet", "mars"]);
    let report = stdout_json(&out);
    let floor = report["floor_km"].as_f64().unwrap();
    let ceiling = report["ceiling_km"].as_f64().unwrap();
    assert!((floor - 72.25).abs() < 0.05, "floor {floor}");
    assert!((ceiling - 97.81).abs() < 0.05, "ceiling {ceiling}");
}

#[test]
fn planets_lists_the_three_worlds() {
    let out = swingby(&["planets"]);
    let catalog = stdout_json(&out);
    let names: Vec<&str> = catalog["planets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["venus", "earth", "mars"]);
}

#[test]
fn gam_behind_the_planet_gains_energy() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gam.json");
    fs::write(&config, r#"{"planet": "venus", "kind": "gam", "psi_deg": 270.0,
        "altitude_km": 250.0}"#).unwrap();
    let out_file = dir.path().join("result.json");
    let out = swingby(&[
        "run",
        "--config", config.to_str().unwrap(),
        "--out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(result["status"], "Ok");
    assert!(result["voe_km2_s2"].as_f64().unwrap() > 0.0);
}

#[test]
fn truncated_stdout_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gam.json");
    fs::write(&config, r#"{"planet": "venus", "kind": "gam", "psi_deg": 270.0,
        "altitude_km": 250.0}"#).unwrap();
    // The trajectory JSON far exceeds the pipe buffer, so closing the read
    // end before the child finishes guarantees a write against a closed
    // pipe. That must truncate the stream quietly, not panic the process.
    let mut child = Command::new(env!("CARGO_BIN_EXE_swingby"))
        .args(["run", "--config", config.to_str().unwrap()])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    drop(child.stdout.take());
    let out = child.wait_with_output().expect("child exits");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn catalog_override_renames_a_world() {
    let dir = tempfile::tempdir().unwrap();
    let base = swingby(&["planets"]);
    let mut catalog = stdout_json(&base);
    catalog["planets"][0]["name"] = "cytherea".into();
    let path = dir.path().join("planets.json");
    fs::write(&path, serde_json::to_string(&catalog).unwrap()).unwrap();

    let out = swingby(&["--planets", path.to_str().unwrap(), "bands", "--planet", "cytherea"]);
    let report = stdout_json(&out);
    assert_eq!(report["planet"], "cytherea");

    let gone = swingby(&["--planets", path.to_str().unwrap(), "bands", "--planet", "venus"]);
    assert_eq!(gone.status.code(), Some(1));
}

#[test]
fn sweep_writes_csv_figures_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    fs::write(&config, r#"{"planet": "venus",
        "altitude_km": {"min": 240.0, "max": 241.0, "step": 1.0},
        "ld_list": [-0.5, 0.5], "psi_list": [270.0], "kinds": ["agam"]}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = swingby(&[
        "sweep",
        "--config", config.to_str().unwrap(),
        "--out", out_dir.to_str().unwrap(),
        "--workers", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("planet,kind,psi_deg,altitude_km,signed_ld"));
    // One header, one baseline per altitude, one row per cell.
    assert_eq!(csv.lines().count(), 1 + 2 + 4);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["planet"]["name"], "venus");
    assert_eq!(manifest["grid"]["cells"], 4);

    let svg_count = fs::read_dir(&out_dir)
        .unwrap()
        .filter(|e| {
            Path::new(&e.as_ref().unwrap().file_name())
                .extension()
                .is_some_and(|ext| ext == "svg")
        })
        .count();
    // Eight metrics, one kind, one approach angle.
    assert_eq!(svg_count, 8);
    for figure in manifest["figures"].as_array().unwrap() {
        assert!(out_dir.join(figure["file"].as_str().unwrap()).exists());
    }
}
