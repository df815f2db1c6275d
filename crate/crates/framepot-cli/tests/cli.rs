//! End-to-end checks of the command-line surface: schemas, determinism,
//! exit codes, and file outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn framepot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framepot"))
        .args(args)
        .env_remove("FRAMEPOT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("framepot-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn construct_and_eval_half_circle() {
    let file = temp_path("hc4.json");
    let out = framepot(&["construct", "--kind", "half-circle", "--n", "4", "--out"]);
    assert!(!out.status.success(), "missing value for --out must fail");

    let out = framepot(&[
        "construct",
        "--kind",
        "half-circle",
        "--n",
        "4",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    let config = framepot::Configuration::from_json(&text).unwrap();
    assert_eq!(config.len(), 4);

    let eval = framepot(&["eval", "--config", file.to_str().unwrap(), "--p", "2"]);
    let value: f64 = stdout(&eval).trim().parse().unwrap();
    assert_eq!(value, 4.0);

    let coh = framepot(&["eval", "--config", file.to_str().unwrap(), "--p", "inf"]);
    let value: f64 = stdout(&coh).trim().parse().unwrap();
    assert!((value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

    let record_path = format!("{}.run.json", file.display());
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&record_path).unwrap()).unwrap();
    assert_eq!(record["command"], "construct");
    assert_eq!(record["outputs"][0], file.to_str().unwrap());

    std::fs::remove_file(&file).ok();
    std::fs::remove_file(&record_path).ok();
}

#[test]
fn bounds_reports_welch_for_infinite_p() {
    let out = framepot(&["bounds", "--n", "3", "--d", "2", "--p", "inf"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["welch"]["value"], 0.5);
    assert!(record["design"].is_null());
}

#[test]
fn bounds_reports_design_and_lifted_for_even_p() {
    let out = framepot(&["bounds", "--n", "4", "--d", "3", "--p", "2"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let design = record["design"]["value"].as_f64().unwrap();
    assert!((design - (16.0 / 3.0 - 4.0)).abs() < 1e-12);
    // N = d + 1: the best lifted value at p = 2 is the simplex (k = d).
    assert_eq!(record["lifted_etf"]["k"], 3);
    assert_eq!(record["tau"].as_f64(), Some(1.0 / 3.0));
}

#[test]
fn minimize_output_is_deterministic_and_seeded() {
    let args = [
        "minimize",
        "--n",
        "4",
        "--d",
        "2",
        "--p",
        "3",
        "--restarts",
        "6",
        "--seed",
        "11",
    ];
    let a = stdout(&framepot(&args));
    let b = stdout(&framepot(&args));
    assert_eq!(a, b, "identical argv and seed must give identical bytes");

    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["seed"], 11);
    assert_eq!(parsed["per_restart_values"].as_array().unwrap().len(), 6);

    // the env var supplies the master seed when --seed is absent
    let env_run = Command::new(env!("CARGO_BIN_EXE_framepot"))
        .args([
            "minimize",
            "--n",
            "4",
            "--d",
            "2",
            "--p",
            "3",
            "--restarts",
            "6",
        ])
        .env("FRAMEPOT_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a, String::from_utf8(env_run.stdout).unwrap());
}

#[test]
fn sweep_csv_round_trips() {
    let out = framepot(&[
        "sweep",
        "--n",
        "4",
        "--d",
        "2",
        "--pmin",
        "2.5",
        "--pmax",
        "3.5",
        "--steps",
        "3",
        "--restarts",
        "4",
        "--seed",
        "5",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,value,invariant_digest,seed"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    let mut previous_p = f64::NEG_INFINITY;
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        let p: f64 = fields[0].parse().unwrap();
        let value: f64 = fields[1].parse().unwrap();
        assert!(p > previous_p);
        previous_p = p;
        // 17 significant digits round-trip exactly
        assert_eq!(format!("{p:.16e}"), fields[0]);
        assert_eq!(format!("{value:.16e}"), fields[1]);
        assert_eq!(fields[2].len(), 16, "digest is 8 bytes hex");
    }
}

#[test]
fn conjecture_reports_fifty_trials() {
    let out = framepot(&["conjecture", "--d", "2", "--k", "2", "--seed", "7"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["trials"], 50);
    assert_eq!(record["seed"], 7);
    assert!(record["max_gap"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn certify_reports_zero_gap() {
    let out = framepot(&["certify", "--n", "5", "--p", "6"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(record["certificate"]["pd_ok"].as_bool().unwrap());
    assert!(record["gap"].as_f64().unwrap().abs() < 1e-8);
    assert!((record["certificate"]["lower_bound"].as_f64().unwrap() - 2.8125).abs() < 1e-8);
}

#[test]
fn design_check_full_circle() {
    let file = temp_path("sym6.json");
    let out = framepot(&[
        "construct",
        "--kind",
        "sym-half-circle",
        "--n",
        "3",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let check = framepot(&[
        "design-check",
        "--config",
        file.to_str().unwrap(),
        "--t",
        "6",
    ]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&check)).unwrap();
    assert_eq!(record["max_strength"], 5);
    std::fs::remove_file(&file).ok();
    std::fs::remove_file(format!("{}.run.json", file.display())).ok();
}

#[test]
fn exit_codes() {
    let usage = framepot(&["no-such-command"]);
    assert_eq!(usage.status.code(), Some(2));

    let missing_file = framepot(&["eval", "--config", "/nonexistent.json", "--p", "2"]);
    assert_eq!(missing_file.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing_file.stderr).contains("error"));

    let bad_kind = framepot(&["construct", "--kind", "dodecahedron", "--n", "5"]);
    assert_eq!(bad_kind.status.code(), Some(1));
}
