//! End-to-end tests of the binary: output formats, exit codes, report
//! determinism, and file output resolution.

use std::process::{Command, Output};

fn rbcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbcalc"))
        .args(args)
        .env_remove("RBCALC_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("reports are UTF-8")
}

#[test]
fn latex_bch_prints_the_degree_two_element() {
    let out = rbcalc(&["bch", "--order", "2", "--format", "latex"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\\frac{1}{2}\\,(1,2) - \\frac{1}{2}\\,(2,1)"), "got: {text}");
    assert!(text.contains("\\begin{align*}"));
}

#[test]
fn text_report_carries_the_command_header() {
    let out = rbcalc(&["shuffle", "ab", "c"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("rbcalc shuffle (left=(a,b), right=(c))"), "got: {text}");
    assert!(text.contains("1/1*(a,b,c) + 1/1*(a,c,b) + 1/1*(c,a,b)"), "got: {text}");
}

#[test]
fn json_report_is_well_formed() {
    let out = rbcalc(&["bch", "--order", "3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(doc["command"], "bch");
    assert_eq!(doc["parameters"]["order"], "3");
    let terms = doc["elements"][0]["value"].as_array().expect("term array");
    assert_eq!(terms.len(), 6);
    assert_eq!(terms[0]["basis"], "(1,2,3)");
    assert_eq!(terms[0]["coeff"], "1/3");
}

#[test]
fn quasishuffle_accepts_negative_weights_and_merges_letters() {
    let out = rbcalc(&["quasishuffle", "z1", "z2", "--theta", "-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1/1*(z3)"), "merged letter should appear with +1: {text}");
}

#[test]
fn identity_checks_are_reported_and_exit_zero() {
    let out = rbcalc(&[
        "magnus", "--order", "4", "--instance", "triangular", "--size", "3", "--seed", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("magnus expansion:"), "got: {text}");
    assert!(
        text.contains("ok   exponential of the operator image equals the factorization series"),
        "got: {text}"
    );
}

#[test]
fn verify_all_passes_at_small_order() {
    let out = rbcalc(&["verify", "all", "--order", "1", "--seed", "1"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for suite in rbcalc::verify::suite_names() {
        assert!(text.contains(&format!("suite {suite} ")), "missing suite {suite}");
    }
    assert!(!text.contains("FAIL"), "got: {text}");
}

#[test]
fn unknown_names_are_usage_errors() {
    for args in [
        ["magnus", "--order", "2", "--instance", "sideways", "--seed", "1"].as_slice(),
        ["verify", "nonsense", "--order", "1", "--seed", "1"].as_slice(),
    ] {
        let out = rbcalc(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_words_are_usage_errors() {
    let out = rbcalc(&["quasishuffle", "ab", "z1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("not in alphabet"), "got: {err}");
}

#[test]
fn caps_exit_with_status_three() {
    for args in [
        ["bch", "--order", "9"].as_slice(),
        ["bohnenblust", "--order", "8", "--seed", "1"].as_slice(),
        ["atkinson", "--order", "7", "--instance", "laurent-pole", "--seed", "1"].as_slice(),
        ["basis", "--letters", "7"].as_slice(),
        ["shuffle", "abcde", "abcd"].as_slice(),
    ] {
        let out = rbcalc(args);
        assert_eq!(out.status.code(), Some(3), "args: {args:?}");
    }
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = [
        "atkinson", "--order", "4", "--instance", "summation", "--seed", "13", "--format",
        "json",
    ];
    let first = rbcalc(&args);
    let second = rbcalc(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());
}

#[test]
fn relative_output_paths_resolve_inside_the_env_dir() {
    let dir = std::env::temp_dir().join(format!("rbcalc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let out = Command::new(env!("CARGO_BIN_EXE_rbcalc"))
        .args(["bch", "--order", "2", "--output", "report.txt"])
        .env("RBCALC_OUTPUT_DIR", &dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "report should go to the file");
    let written = std::fs::read_to_string(dir.join("report.txt")).expect("report file");
    assert!(written.contains("1/2*(1,2) - 1/2*(2,1)"), "got: {written}");
    std::fs::remove_dir_all(&dir).expect("cleanup");
}
