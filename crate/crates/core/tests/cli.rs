//! End-to-end checks of the `cssrad` binary: exit codes, artifacts,
//! determinism of the on-disk outputs.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cssrad"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cssrad-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn kminus_preset_runs_and_writes_artifacts() {
    let out = tmp("kminus");
    let st = bin()
        .args(["simulate", "--preset", "kminus-blowup", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    for f in ["manifest.json", "trajectory.csv", "run.json", "summary.json"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let run: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("run.json")).unwrap()).unwrap();
    assert_eq!(run["termination"], "blowup_detected");
    // the M column of the CSV is exactly conserved until the trigger
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let masses: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let m0: f64 = masses[0];
    for m in &masses[..masses.len() - 1] {
        assert!((m - m0).abs() / m0 < 1e-10);
    }
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn groundstate_writes_result_json_with_bounded_d() {
    let out = tmp("gs");
    let st = bin()
        .args(["groundstate", "--p", "5", "--n", "512", "--rmax", "24", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let gs: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("groundstate.json")).unwrap()).unwrap();
    let d = gs["d_value"].as_f64().unwrap();
    assert!(d > 0.0 && d < 5.24, "d = {d}");
    assert!(out.join("profile.csv").exists());
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn usage_errors_exit_2() {
    // empty config file
    let out = tmp("usage");
    fs::create_dir_all(&out).unwrap();
    let cfg = out.join("empty.json");
    fs::write(&cfg, "").unwrap();
    let st = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(out.join("run"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(!out.join("run").join("trajectory.csv").exists(), "no partial outputs");
    // unknown preset
    let st = bin()
        .args(["simulate", "--preset", "does-not-exist", "--out"])
        .arg(out.join("run2"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
    // clap-level parse failure
    let st = bin().args(["simulate", "--dt", "not-a-number"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn config_file_round_trips_through_manifest() {
    let out = tmp("cfg");
    fs::create_dir_all(&out).unwrap();
    let manifest = serde_json::json!({
        "experiment": "simulate",
        "config": {
            "sim": {
                "p": 5.0, "dt": 0.005, "t_end": 0.05, "n": 128, "r_max": 16.0,
                "nonlinear_on": true, "log_stride": 5,
                "boundary_mass_tol": 1e-6
            },
            "initial": { "amplitude": 0.4 }
        },
        "seed": 9,
        "out": "ignored"
    });
    let cfg = out.join("m.json");
    fs::write(&cfg, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    let st = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(out.join("run"))
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let echoed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("run/manifest.json")).unwrap()).unwrap();
    assert!(echoed["config_hash"].is_string());
    assert!(echoed["version"].is_string());
    let _ = fs::remove_dir_all(&out);
}
