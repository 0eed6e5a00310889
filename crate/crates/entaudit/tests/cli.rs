//! End-to-end checks of the command-line binary: exit codes, diagnostics,
//! determinism, and the witness contract — every failing audit's report
//! carries state files that `compute` can re-evaluate to the reported
//! violation.

use entaudit::cli::AuditDocument;
use entaudit::states::StateFile;
use entaudit::Witness;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const LN_2: f64 = std::f64::consts::LN_2;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entaudit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn write_bell(dir: &Path) -> PathBuf {
    let path = dir.join("bell.json");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &path,
        format!(
            r#"{{"kind":"pure","d1":2,"d2":2,"amplitudes":[[{s},0.0],[0.0,0.0],[0.0,0.0],[{s},0.0]]}}"#
        ),
    )
    .expect("state written");
    path
}

fn write_state_file(dir: &Path, name: &str, file: &StateFile) -> PathBuf {
    let path = dir.join(name);
    let json = serde_json::to_string(file).expect("state serializes");
    std::fs::write(&path, json).expect("state written");
    path
}

/// Runs `compute` and parses the value from the first output line.
fn compute_value(measure: &str, state: &Path) -> f64 {
    let output = run(&[
        "compute",
        "--measure",
        measure,
        "--state",
        state.to_str().expect("utf8 path"),
    ]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "compute failed: {}",
        stderr_of(&output)
    );
    let stdout = stdout_of(&output);
    let first = stdout.lines().next().expect("value line");
    first
        .split_whitespace()
        .next()
        .expect("leading value")
        .parse()
        .expect("numeric value")
}

#[test]
fn compute_matches_the_documented_bell_values() {
    let dir = tempfile::tempdir().expect("temp dir");
    let bell = write_bell(dir.path());

    let output = run(&[
        "compute",
        "--measure",
        "svn",
        "--state",
        bell.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = stdout_of(&output);
    assert!(stdout.starts_with("0.6931471806 (nat)\n"), "{stdout}");
    assert!(stdout.contains("schmidt coefficients: 0.5000000000 0.5000000000"));

    let output = run(&[
        "compute",
        "--measure",
        "svn",
        "--state",
        bell.to_str().unwrap(),
        "--base",
        "bit",
    ]);
    assert!(stdout_of(&output).starts_with("1.000000000 (bit)\n"));

    let output = run(&[
        "compute",
        "--measure",
        "gamma",
        "--state",
        bell.to_str().unwrap(),
    ]);
    assert!(stdout_of(&output).starts_with("1.386294361 (nat)\n"));
}

#[test]
fn config_errors_exit_2_with_one_line_field_diagnostics() {
    let dir = tempfile::tempdir().expect("temp dir");
    let bell = write_bell(dir.path());

    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec![
                "compute",
                "--measure",
                "negativity",
                "--state",
                bell.to_str().unwrap(),
            ],
            "--measure",
        ),
        (
            vec!["audit", "--measure", "svn", "--axioms", "P9"],
            "--axioms",
        ),
        (
            vec![
                "audit",
                "--measure",
                "svn",
                "--axioms",
                "P2",
                "--samples",
                "0",
            ],
            "--samples",
        ),
        (
            vec!["audit", "--measure", "svn", "--axioms", "P2", "--tol=-1.0"],
            "--tol",
        ),
        (
            vec![
                "compute",
                "--measure",
                "svn",
                "--state",
                "/nonexistent/state.json",
            ],
            "--state",
        ),
        (vec!["demo", "p5-violation"], "demo"),
    ];
    for (args, field) in cases {
        let output = run(&args);
        assert_eq!(output.status.code(), Some(2), "args {args:?}");
        let stderr = stderr_of(&output);
        let diagnostic_lines = stderr.lines().filter(|l| !l.trim().is_empty()).count();
        assert_eq!(
            diagnostic_lines, 1,
            "expected one-line diagnostic: {stderr}"
        );
        assert!(
            stderr.contains(field),
            "diagnostic for {args:?} should name {field}: {stderr}"
        );
    }
}

#[test]
fn malformed_state_json_names_the_state_field() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"kind\": \"pure\"").expect("file written");
    let output = run(&[
        "compute",
        "--measure",
        "svn",
        "--state",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = stderr_of(&output);
    assert!(stderr.contains("--state"), "{stderr}");
    assert!(stderr.contains("malformed JSON"), "{stderr}");
}

#[test]
fn dimension_mismatch_in_state_files_is_diagnosed() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("short.json");
    std::fs::write(
        &path,
        r#"{"kind":"pure","d1":2,"d2":3,"amplitudes":[[1.0,0.0],[0.0,0.0]]}"#,
    )
    .expect("file written");
    let output = run(&[
        "compute",
        "--measure",
        "svn",
        "--state",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("--state"));
}

#[test]
fn demo_exit_codes_and_stdout_are_deterministic() {
    for name in ["p4-violation", "m5-violation", "trace-asymmetry"] {
        let first = run(&["demo", name]);
        let second = run(&["demo", name]);
        assert_eq!(first.status.code(), Some(1), "demo {name}");
        assert_eq!(first.stdout, second.stdout, "demo {name} output drifted");
    }
}

#[test]
fn gen_compute_round_trip_and_mixed_rejection() {
    let dir = tempfile::tempdir().expect("temp dir");
    let pure = dir.path().join("pure.json");
    let separable = dir.path().join("separable.json");

    let output = run(&[
        "gen",
        "--d1",
        "3",
        "--d2",
        "2",
        "--kind",
        "pure",
        "--seed",
        "11",
        "--out",
        pure.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let value = compute_value("svn", &pure);
    assert!(value.is_finite() && value >= 0.0);

    let output = run(&[
        "gen",
        "--d1",
        "2",
        "--d2",
        "2",
        "--kind",
        "separable",
        "--seed",
        "11",
        "--out",
        separable.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let value = compute_value("svn", &separable);
    assert!(value.is_finite() && value >= 0.0);

    let output = run(&[
        "compute",
        "--measure",
        "gamma",
        "--state",
        separable.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("no mixed-state evaluator"));

    // Same seed, same file bytes.
    let again = dir.path().join("pure_again.json");
    let output = run(&[
        "gen",
        "--d1",
        "3",
        "--d2",
        "2",
        "--kind",
        "pure",
        "--seed",
        "11",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&pure).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

fn audit_document(dir: &Path, measure: &str, axioms: &str, expect_code: i32) -> AuditDocument {
    let out = dir.join(format!("{measure}-{}.json", axioms.replace(',', "-")));
    let output = run(&[
        "audit",
        "--measure",
        measure,
        "--axioms",
        axioms,
        "--samples",
        "40",
        "--seed",
        "42",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        output.status.code(),
        Some(expect_code),
        "{}",
        stderr_of(&output)
    );
    serde_json::from_str(&std::fs::read_to_string(&out).expect("report file"))
        .expect("report parses")
}

#[test]
fn failing_l7_witness_is_re_evaluated_by_compute() {
    let dir = tempfile::tempdir().expect("temp dir");
    let document = audit_document(dir.path(), "svn", "L7", 1);
    let report = &document.reports[0];
    assert!(!report.passed);
    let Some(Witness::SeparableState { state, value }) = report.witness.as_ref() else {
        panic!("separable witness expected");
    };
    let path = write_state_file(dir.path(), "witness.json", state);
    let recomputed = compute_value("svn", &path);
    assert!(
        (recomputed - report.worst_violation).abs() < 1e-9,
        "compute gives {recomputed}, report says {}",
        report.worst_violation
    );
    assert!((value - LN_2).abs() < 1e-9);
}

#[test]
fn failing_m5_witness_reconstructs_the_violation_from_its_files() {
    let dir = tempfile::tempdir().expect("temp dir");
    let document = audit_document(dir.path(), "svn", "M5", 1);
    let report = &document.reports[0];
    let Some(Witness::Mixing {
        sigma,
        tau,
        eta,
        mixture,
        ..
    }) = report.witness.as_ref()
    else {
        panic!("mixing witness expected");
    };
    let sigma_value = compute_value("svn", &write_state_file(dir.path(), "sigma.json", sigma));
    let tau_value = compute_value("svn", &write_state_file(dir.path(), "tau.json", tau));
    let mixture_value = compute_value(
        "svn",
        &write_state_file(dir.path(), "mixture.json", mixture),
    );
    let violation = (mixture_value - eta * sigma_value - (1.0 - eta) * tau_value).max(0.0);
    assert!(
        (violation - report.worst_violation).abs() < 1e-9,
        "reconstructed {violation}, report says {}",
        report.worst_violation
    );
}

#[test]
fn failing_p4_witness_reconstructs_the_violation_from_its_files() {
    let dir = tempfile::tempdir().expect("temp dir");
    let document = audit_document(dir.path(), "gamma", "P4", 1);
    let report = &document.reports[0];
    let Some(Witness::Superposition {
        superposed,
        components,
        amplitudes,
        profile_value,
        ..
    }) = report.witness.as_ref()
    else {
        panic!("superposition witness expected");
    };
    let lhs = compute_value(
        "gamma",
        &write_state_file(dir.path(), "superposed.json", superposed),
    );
    let mut rhs = *profile_value;
    for (i, component) in components.iter().enumerate() {
        let value = compute_value(
            "gamma",
            &write_state_file(dir.path(), &format!("component{i}.json"), component),
        );
        let weight = amplitudes[i][0].powi(2) + amplitudes[i][1].powi(2);
        rhs += weight * value;
    }
    // The profile term is itself a measure value: the canonical diagonal
    // state carrying the amplitude weights, evaluated through compute.
    let weights: Vec<f64> = amplitudes
        .iter()
        .map(|[re, im]| re.powi(2) + im.powi(2))
        .collect();
    let n = weights.len();
    let mut diagonal = vec![[0.0_f64, 0.0]; n * n];
    for (i, w) in weights.iter().enumerate() {
        diagonal[i * n + i] = [w.sqrt(), 0.0];
    }
    let profile_state = serde_json::json!({
        "kind": "pure",
        "d1": n,
        "d2": n,
        "amplitudes": diagonal,
    });
    let profile_path = dir.path().join("profile.json");
    std::fs::write(&profile_path, profile_state.to_string()).expect("state written");
    let recomputed_profile = compute_value("gamma", &profile_path);
    assert!(
        (recomputed_profile - profile_value).abs() < 1e-9,
        "profile term: compute gives {recomputed_profile}, report says {profile_value}"
    );
    let violation = (lhs - rhs).abs();
    assert!(
        (violation - report.worst_violation).abs() < 1e-8,
        "reconstructed {violation}, report says {}",
        report.worst_violation
    );
}

#[test]
fn failing_prop6_witness_is_re_evaluated_by_compute() {
    let dir = tempfile::tempdir().expect("temp dir");
    let document = audit_document(dir.path(), "gamma", "PROP6", 1);
    let report = &document.reports[0];
    let Some(Witness::RatioPair {
        state,
        c_mean,
        entropy,
        ..
    }) = report.witness.as_ref()
    else {
        panic!("ratio witness expected");
    };
    let path = write_state_file(dir.path(), "ratio.json", state);
    let value = compute_value("gamma", &path);
    let svn = compute_value("svn", &path);
    assert!((svn - entropy).abs() < 1e-9);
    let deviation = (value / svn - c_mean).abs();
    assert!(
        (deviation - report.worst_violation).abs() < 1e-8,
        "reconstructed {deviation}, report says {}",
        report.worst_violation
    );
}

#[test]
fn scaled_measure_names_resolve_end_to_end() {
    let dir = tempfile::tempdir().expect("temp dir");
    let bell = write_bell(dir.path());
    let value = compute_value("svn-scaled:2.5", &bell);
    assert!((value - 2.5 * LN_2).abs() < 1e-9);

    let output = run(&[
        "compute",
        "--measure",
        "svn-scaled:zero",
        "--state",
        bell.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("--measure"));
}

#[test]
fn audit_order_follows_the_request_and_all_expands() {
    let dir = tempfile::tempdir().expect("temp dir");
    let document = audit_document(dir.path(), "svn", "P4,P2,L4", 0);
    let order: Vec<&str> = document.reports.iter().map(|r| r.axiom.name()).collect();
    assert_eq!(order, vec!["P4", "P2", "L4"]);

    let document = audit_document(dir.path(), "svn", "all", 1);
    assert_eq!(document.reports.len(), 12);
    assert_eq!(document.summary.requested, 12);
    assert_eq!(document.summary.failed, 2);
    let failed: Vec<&str> = document
        .reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.axiom.name())
        .collect();
    assert_eq!(failed, vec!["M5", "L7"]);
}
