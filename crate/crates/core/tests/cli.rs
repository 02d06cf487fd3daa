//! Command-line behaviour: exit codes, JSON shape and banners.

mod common;

use act::cli::{execute, Cli, Outcome, Style, EXIT_COUNTEREXAMPLE, EXIT_IO, EXIT_OK, EXIT_TYPE};
use clap::Parser;
use serde_json::Value;

fn act(args: &[&str]) -> Outcome {
    let argv = std::iter::once("act").chain(args.iter().copied());
    execute(&Cli::try_parse_from(argv).expect("arguments parse"), Style::plain())
}

fn corpus(name: &str) -> String {
    common::corpus_path(name).display().to_string()
}

fn json(out: &Outcome) -> Value {
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{}: {}", e, out.stdout));
    assert_eq!(v["schemaVersion"], 1);
    v
}

#[test]
fn check_accepts_the_counter() {
    let out = act(&["check", &corpus("counter")]);
    assert_eq!(out.code, EXIT_OK, "{:?}", out);
    assert!(out.stdout.contains("ok"));
}

#[test]
fn check_reports_type_errors_with_rule_names() {
    let out = act(&["check", &corpus("bad-uint8"), "--json"]);
    assert_eq!(out.code, EXIT_TYPE);
    let v = json(&out);
    assert_eq!(v["files"][0]["diagnostics"][0]["rule"], "T-Int");
    assert_eq!(v["files"][0]["diagnostics"][0]["line"], 4);
}

#[test]
fn check_exits_2_on_a_counterexample() {
    let out = act(&["check", &corpus("obligation-cex")]);
    assert_eq!(out.code, EXIT_COUNTEREXAMPLE);
    assert!(out.stdout.contains("counterexample: x = 5"), "{}", out.stdout);
    let out = act(&["check", &corpus("obligation-cex"), "--assume-obligations"]);
    assert_eq!(out.code, EXIT_OK);
}

#[test]
fn missing_files_exit_3() {
    let out = act(&["check", "/nonexistent/spec.act"]);
    assert_eq!(out.code, EXIT_IO);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn obligations_json_and_smt_export() {
    let out = act(&["obligations", &corpus("erc20-ish"), "--json", "--smt"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let v = json(&out);
    let obs = v["obligations"].as_array().unwrap();
    assert!(!obs.is_empty());
    assert!(obs.iter().all(|o| o["verdict"] == "valid-within-bounds"));
    assert!(obs.iter().any(|o| o["smt"].as_str().is_some_and(|s| s.contains("(check-sat)"))));
}

#[test]
fn run_constructor_on_the_empty_state() {
    let out = act(&["run", &corpus("counter"), "--entry", "Counter", "--json"]);
    assert_eq!(out.code, EXIT_OK, "{:?}", out);
    let v = json(&out);
    assert_eq!(v["step"]["loc"], "0");
    assert_eq!(v["state"][0]["contract"], "Counter");
}

#[test]
fn run_rejects_malformed_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = act(&[
        "run",
        &corpus("counter"),
        "--entry",
        "Counter.incr",
        "--loc",
        "0",
        "--state",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_IO, "{:?}", out);
}

#[test]
fn verify_depth_zero_is_vacuous() {
    let out = act(&["verify", &corpus("counter"), "--max-depth", "0"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("bound: 0"), "{}", out.stdout);
}

#[test]
fn verify_exits_2_on_a_broken_invariant() {
    let out = act(&["verify", &corpus("broken-invariant"), "--max-depth", "3", "--json"]);
    assert_eq!(out.code, EXIT_COUNTEREXAMPLE);
    assert_eq!(json(&out)["holds"], false);
}

#[test]
fn verify_json_is_byte_identical_across_runs() {
    let path = corpus("swap");
    let args = ["verify", &path, "--max-depth", "2", "--json"];
    assert_eq!(act(&args).stdout, act(&args).stdout);
}

#[test]
fn explore_reports_states() {
    let out = act(&["explore", &corpus("counter"), "--max-depth", "3", "--json"]);
    assert_eq!(out.code, EXIT_OK);
    json(&out);
}

#[test]
fn metatheory_with_no_cases_passes() {
    let out = act(&["metatheory", "-n", "0"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("PASS"));
}

#[test]
fn metatheory_failure_exits_1_with_a_reproducer() {
    let out = act(&["metatheory", "-n", "20", "--mutation", "first-case-wins"]);
    assert_eq!(out.code, EXIT_TYPE, "{}", out.stdout);
    assert!(out.stdout.contains("FAIL") && out.stdout.contains("spec:"), "{}", out.stdout);
}

#[test]
fn dump_prec_prints_dot() {
    let out = act(&["check", &corpus("two-contract"), "--dump-prec", "--assume-obligations"]);
    assert!(out.stdout.contains("digraph prec {"));
    assert!(out.stdout.contains("\"A\" -> \"B\";"));
}
