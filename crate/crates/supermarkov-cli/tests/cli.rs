//! End-to-end tests of the `supermarkov` binary: output shapes, file
//! formats, exit codes, and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supermarkov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supermarkov"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn markov_text_output_and_agreement() {
    let out = run(&["markov", "-p", "2", "-q", "3", "--method", "all"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("matrix: 29 + 74*sigma*theta"));
    assert!(text.contains("dimer: 29 + 74*sigma*theta"));
    assert!(text.contains("ptolemy: 29 + 74*sigma*theta"));
    assert!(text.contains("agreement: true"));

    let out = run(&["markov", "-p", "1", "-q", "1"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("2 + sigma*theta"));
}

#[test]
fn markov_json_output() {
    let out = run(&[
        "markov", "-p", "2", "-q", "3", "--method", "all", "--format", "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["request"]["p"], 2);
    assert_eq!(v["results"]["matrix"]["body"], "29");
    assert_eq!(v["results"]["dimer"]["soul"]["sigma*theta"], "74");
    assert_eq!(v["agreement"], true);
}

#[test]
fn markov_rejects_invalid_slopes() {
    let out = run(&["markov", "-p", "2", "-q", "4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("invalid slope"));

    let out = run(&["markov", "-p", "3", "-q", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn markov_weighted_mode() {
    let out = run(&["markov", "-p", "1", "-q", "1", "--mode", "weighted"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("x^2*z^(-1) + y^2*z^(-1) + x*y*z^(-1)*sigma*theta"));
}

#[test]
fn table_csv_rows() {
    let out = run(&["table", "--max-sum", "10", "--format", "csv"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,q,body,soul");
    assert_eq!(lines[1], "1,1,2,1");
    assert!(lines.iter().any(|l| l.starts_with("1,2,5,6")));
    assert!(lines.iter().any(|l| l.starts_with("1,6,") && l.ends_with(",1076")));
    assert!(lines.iter().any(|l| l.starts_with("2,7,") && l.ends_with(",7714")));
}

#[test]
fn table_json_and_thread_cap() {
    let out = run_with_env(
        &["table", "--max-sum", "6", "--format", "json"],
        "SUPERMARKOV_THREADS",
        "1",
    );
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = v.as_array().expect("array of rows");
    assert!(rows.iter().any(|r| r["p"] == 1
        && r["q"] == 2
        && r["body"] == "5"
        && r["soul"] == "6"
        && r["dimer_checked"] == true));
}

#[test]
fn table_rejects_oversize_requests() {
    let out = run(&["table", "--max-sum", "33"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn annulus_both_methods_agree() {
    let out = run(&["annulus", "--q", "2", "--n", "12", "--method", "both"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text
        .contains("x_12 = 362 + 342*theta2*theta1 + 969*sigma3*theta1 + 760*sigma3*theta2"));
    assert!(text.contains("agreement: true"));

    let out = run(&["annulus", "--q", "1", "--n", "5", "--method", "both"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("x_4 = 5 + 6*sigma*theta"));
    assert!(text.contains("x_5 = 13 + 26*sigma*theta"));
    assert!(text.contains("agreement: true"));
}

#[test]
fn annulus_dimer_bound() {
    let out = run(&["annulus", "--q", "3", "--n", "8", "--method", "dimer"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("q in {1, 2}"));

    // The recurrence alone supports any q >= 1.
    let out = run(&["annulus", "--q", "3", "--n", "8", "--method", "recurrence"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn check_suites() {
    for suite in ["osp", "markov-eq", "cross", "conserved", "oracle", "positivity"] {
        let bound = if suite == "oracle" { "4" } else { "6" };
        let out = run(&["check", "--suite", suite, "--bound", bound]);
        assert_eq!(exit_code(&out), 0, "suite {suite}: {}", stderr(&out));
        assert!(stdout(&out).contains("result: pass"), "suite {suite}");
    }
    // Suites that lean on the dimer enumeration reject oversize bounds.
    let out = run(&["check", "--suite", "cross", "--bound", "13"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn export_formats_and_determinism() {
    let out = run(&["export", "snake-dot", "-p", "3", "-q", "5"]);
    assert_eq!(exit_code(&out), 0);
    let dot = stdout(&out);
    assert_eq!(dot.matches("subgraph cluster_tile_").count(), 13);
    let again = run(&["export", "snake-dot", "-p", "3", "-q", "5"]);
    assert_eq!(dot, stdout(&again), "exports must be byte-identical");

    let out = run(&["export", "matrix-json", "-p", "1", "-q", "2"]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v[0][1]["body"], "5");
    assert_eq!(v[0][1]["soul"]["sigma*theta"], "6");

    let out = run(&["export", "snake-json", "--annulus", "--n", "7"]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["tiles"].as_array().expect("tiles").len(), 5);

    // Holonomies only exist for torus slopes.
    let out = run(&["export", "matrix-json", "--annulus", "--n", "7"]);
    assert_eq!(exit_code(&out), 2);

    // Target flags must be consistent.
    let out = run(&["export", "snake-dot", "-p", "3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn scan_monotonicity_reports() {
    let out = run(&["scan-monotonicity", "--bound", "10"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("monotonicity scan"));
    assert!(text.contains("total violations: 0"));
}

#[test]
fn usage_errors_from_clap() {
    let out = run(&["markov", "-p", "2"]);
    assert_eq!(exit_code(&out), 2, "missing required argument");
    let out = run(&["nonsense"]);
    assert_eq!(exit_code(&out), 2, "unknown subcommand");
}
