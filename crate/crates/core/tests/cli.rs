//! End-to-end runs of the `qjd` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn qjd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qjd"))
        .args(args)
        .env("QJD_THREADS", "2")
        .output()
        .expect("qjd runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn poly_smallest_case_has_eigenvalue() {
    let out = qjd(&["poly", "--lambda", "1", "--N", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    let p = &v["polynomials"][0];
    assert_eq!(p["lambda"], serde_json::json!([1]));
    assert!(p["mu"]["exact"].as_str().unwrap().starts_with('-'));
    assert_eq!(p["phi"]["terms"][0]["partition"], serde_json::json!([1]));
}

#[test]
fn poly_stability_flag() {
    let out = qjd(&["poly", "--lambda", "2,1", "--N", "3", "--check-stability"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["polynomials"][0]["stable"], Value::Bool(true));
}

#[test]
fn poly_without_lambda_is_the_constant() {
    let v = json(&qjd(&["poly", "--N", "2"]));
    let polys = v["polynomials"].as_array().unwrap();
    assert_eq!(polys.len(), 1);
    let terms = polys[0]["phi_symfunc"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["partition"], serde_json::json!([]));
    assert_eq!(terms[0]["num"], "1");
}

#[test]
fn poly_too_many_parts_is_a_config_error() {
    let out = qjd(&["poly", "--lambda", "1,1,1", "--N", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "invalid_partition");
}

#[test]
fn constraint_violation_names_the_constraint() {
    let out = qjd(&["verify", "ct", "--b", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"], "constraint");
    assert!(v["message"].as_str().unwrap().contains("b < 0"));
}

#[test]
fn verify_eigen_passes() {
    let out = qjd(&["verify", "eigen", "--N", "2", "--maxdeg", "4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["max_residual"], 0.0);
    assert_eq!(v["provenance"], "exact");
    for key in ["check", "params", "N", "K", "tolerance", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_ct_up_to_five() {
    let out = qjd(&["verify", "ct", "--N", "5"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["details"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_pmp_reports_trials() {
    let out = qjd(&["verify", "pmp", "--N", "2", "--K", "6", "--trials", "200"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["details"]["trials"], 200);
    assert!(v["details"]["interior_trials"].as_u64().unwrap() > 0);
}

#[test]
fn failing_suite_exits_two() {
    // at t = 1/2 the norm gap at N = 4 is far above 10⁻²
    let out = qjd(&["verify", "norm", "--N", "3", "--K", "6", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn simulate_writes_files_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "simulate",
        "--N",
        "2",
        "--K",
        "6",
        "--horizon",
        "20",
        "--seed",
        "3",
        "--out",
        d,
    ];
    let first = qjd(&args);
    assert!(first.status.success());
    let second = qjd(&args);
    assert_eq!(first.stdout, second.stdout);
    let traj = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("time,state\n0.000000000000e0,N=2;"));
    let measure = std::fs::read_to_string(dir.path().join("measure.csv")).unwrap();
    assert!(measure.starts_with("state,weight_num,weight_den,weight_float\n"));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("comparison.json")).unwrap())
            .unwrap();
    assert!(v["comparison"]["total_variation"].as_f64().unwrap() < 1.0);
}

#[test]
fn simulate_zero_horizon_keeps_the_start() {
    let v = json(&qjd(&[
        "simulate",
        "--N",
        "1",
        "--K",
        "6",
        "--horizon",
        "0",
    ]));
    assert_eq!(v["trajectory"]["jumps"], 0);
    assert_eq!(v["trajectory"]["start"], "N=1;+[1];-[];z=0");
}
