use std::path::PathBuf;
use std::process::{Command, Output};

fn fde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fde")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fde-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn analyze_distributed_sine() {
    let path = scratch("sine2.json");
    let out = fde(&["example", "distributed-sine", "--m", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = fde(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["K"], serde_json::json!([-2, 2]));
    for flag in ["L1", "L2", "L3", "L4"] {
        assert_eq!(v[flag], true, "{flag}");
    }
}

#[test]
fn check_ll_passes_and_fails_across_the_threshold() {
    let out = fde(&["check-ll", "duffing-delay"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["ll_margin"].as_f64().unwrap() - 0.13662).abs() < 1e-4);
    assert_eq!(v["degree"], -1);

    let path = scratch("strong.json");
    fde(&["example", "duffing-delay", "--c", "2", "--out", path.to_str().unwrap()]);
    let out = fde(&["check-ll", path.to_str().unwrap(), "--samples", "32"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["ll_margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn solve_then_verify() {
    let sol = scratch("duffing-solution.json");
    let out = fde(&["solve", "duffing-delay", "--kmax", "32", "--out", sol.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(report["converged"], true);

    let out = fde(&["verify", "duffing-delay", sol.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["pointwise_residual"].as_f64().unwrap() < 1e-8);

    let out = fde(&["verify", "duffing-delay", sol.to_str().unwrap(), "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_as_csv() {
    let out = fde(&["solve", "beam", "--format", "csv", "--kmax", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,u1"));
    assert_eq!(lines.count(), 8 * 16);
}

#[test]
fn iteration_budget_exhaustion_is_reported_as_divergence() {
    let path = scratch("starved.json");
    fde(&["example", "duffing-delay", "--out", path.to_str().unwrap()]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["solve"]["max_iter"] = 1.into();
    std::fs::write(&path, v.to_string()).unwrap();
    let out = fde(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["converged"], false);
}

#[test]
fn errors_exit_with_code_four() {
    let out = fde(&["example", "pendulum"]);
    assert_eq!(out.status.code(), Some(4));

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"n": 1, "P": [[[1.0]], [[1.0]]], "Lambda": 3}"#).unwrap();
    let out = fde(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Lambda"));

    let out = fde(&["analyze", "duffing-delay", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(4));
}
