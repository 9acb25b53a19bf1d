//! Black-box tests of the `onesided` binary: output contracts, determinism,
//! and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_onesided"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("onesided-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn tau_prints_the_identity_value() {
    let output = run(&["tau", "--fn", "identity", "--k", "1", "--delta", "0.2", "--p", "1"]);
    assert!(output.status.success(), "{output:?}");
    let value: f64 = stdout(&output).trim().parse().expect("a bare number");
    assert!((value - 0.19).abs() < 5e-3, "tau {value}");
}

#[test]
fn tau_accepts_expressions() {
    let output = run(&["tau", "--fn", "abs(x - 0.3)", "--delta", "0.1"]);
    assert!(output.status.success(), "{output:?}");
    let value: f64 = stdout(&output).trim().parse().expect("a bare number");
    assert!(value > 0.0 && value < 1.0);
}

#[test]
fn sandwich_step_writes_the_documented_csv() {
    let path = temp_path("gap.csv");
    let output =
        run(&["sandwich-step", "--k", "16", "--out", path.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let text = std::fs::read_to_string(&path).expect("output file");
    std::fs::remove_file(&path).ok();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema=1");
    assert_eq!(lines[1], "k,gap,bound");
    let fields: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(fields[0], "16");
    let gap: f64 = fields[1].parse().unwrap();
    let bound: f64 = fields[2].parse().unwrap();
    assert!((bound - 4.0 * std::f64::consts::PI.powi(2) / 18.0).abs() < 1e-12);
    assert!(gap > 0.0 && gap <= bound);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args =
        ["oracle", "--fn", "sin10", "--k", "2,3", "--grid", "128", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn unknown_function_id_exits_two() {
    let output = run(&["tau", "--fn", "identty", "--delta", "0.1"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr).to_string();
    assert!(stderr.contains("unknown function id"), "{stderr}");
}

#[test]
fn unparsable_expression_exits_two() {
    let output = run(&["tau", "--fn", "sin(x", "--delta", "0.1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn clap_usage_errors_exit_two() {
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["tau", "--fn", "identity"]);
    assert_eq!(output.status.code(), Some(2), "missing --delta must be a usage error");
}

#[test]
fn help_exits_zero() {
    let output = run(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("sandwich-step"));
}

#[test]
fn unknown_suite_exits_two() {
    let output = run(&["verify", "--suite", "exotic"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn dump_config_round_trips_through_the_binary() {
    let output = run(&[
        "approximate",
        "--fn",
        "exp",
        "--k",
        "2,4",
        "--y",
        "0.25",
        "--dump-config",
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = stdout(&output);
    let config: serde_json::Value = serde_json::from_str(&text).expect("config json");
    assert_eq!(config["command"], "approximate");
    assert_eq!(config["function"], "exp");
    assert_eq!(config["k_values"], serde_json::json!([2, 4]));
    assert_eq!(config["y"], 0.25);
}

#[test]
fn approximate_emits_ordered_error_columns() {
    let output = run(&["approximate", "--fn", "identity", "--k", "4", "--format", "json"]);
    assert!(output.status.success(), "{output:?}");
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(rows.len(), 1);
    let pair_gap = rows[0]["pair_gap"].as_f64().unwrap();
    let lower_error = rows[0]["lower_error"].as_f64().unwrap();
    let upper_error = rows[0]["upper_error"].as_f64().unwrap();
    // Both one-sided errors are parts of the gap between the envelopes.
    assert!(lower_error <= pair_gap + 1e-12);
    assert!(upper_error <= pair_gap + 1e-12);
    assert!(pair_gap > 0.0);
}

#[test]
fn verify_writes_reports_and_exits_zero_on_a_small_suite() {
    let path = temp_path("verify.csv");
    let output = run(&["verify", "--k", "3", "--out", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).expect("report file");
    std::fs::remove_file(&path).ok();
    assert!(output.status.success(), "{output:?}");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema=1");
    assert_eq!(lines[1], "check_id,function_id,k,y,p,lhs,rhs,ratio,min_margin,pass,grid_n");
    assert!(lines.len() > 10);
    assert!(lines[2..].iter().all(|l| l.ends_with(",true,1001") || l.contains(",true,")));
}
