//! Release acceptance checklist.
//!
//! One test per criterion; each prints a single `criterion N: pass/FAIL`
//! line so that `cargo test --test acceptance -- --nocapture` reads as a
//! checklist. The whole target is sized to finish in seconds.

use entaudit::axioms::{
    audit_l4, audit_l7, audit_m5, audit_p1_continuity, audit_p2, audit_p3, audit_p4,
    estimate_constant, reevaluate_witness, DEFAULT_TOLERANCE,
};
use entaudit::entropy::{
    audit_khinchin, recursion_gap, renyi2_functional, shannon_functional, svn_pure, Base,
};
use entaudit::linalg::hermitian_eigensystem;
use entaudit::measures::{
    gamma_measure, gamma_norm_pure, schmidt_profile_value, svn_measure, svn_scaled_measure,
};
use entaudit::schmidt::schmidt_decompose;
use entaudit::states::{random_pure_state, seeded_rng, ProbabilityDistribution};
use entaudit::{AxiomId, StateVector, TracedSide, Witness};
use num_complex::Complex64;
use rand::Rng;
use std::process::Command;

const LN_2: f64 = std::f64::consts::LN_2;

/// Prints the checklist line and asserts the criterion.
fn report(number: u8, passed: bool, detail: &str) {
    let verdict = if passed { "pass" } else { "FAIL" };
    println!("criterion {number}: {verdict} — {detail}");
    assert!(passed, "criterion {number} failed: {detail}");
}

fn bell_state() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(
        2,
        2,
        vec![
            Complex64::new(s, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(s, 0.0),
        ],
    )
    .expect("unit norm")
}

#[test]
fn criterion_01_bell_state_pipeline() {
    let bell = bell_state();
    let form = schmidt_decompose(&bell);
    let coefficients = form.coefficients();
    let coefficients_ok = coefficients.len() == 2
        && (coefficients[0] - 0.5).abs() < 1e-12
        && (coefficients[1] - 0.5).abs() < 1e-12;
    let entropy = svn_pure(&bell, Base::Nat);
    let entropy_ok = (entropy - LN_2).abs() < 1e-12;
    let norm = gamma_norm_pure(&bell);
    let norm_ok = (norm - 2.0).abs() < 1e-12;
    report(
        1,
        coefficients_ok && entropy_ok && norm_ok,
        &format!(
            "Bell state: coefficients {coefficients:?}, svn {entropy:.12}, cross norm {norm:.12}"
        ),
    );
}

#[test]
fn criterion_02_reduced_spectrum_oracle() {
    let mut worst = 0.0_f64;
    let mut rng = seeded_rng(90210);
    for sample in 0..300 {
        let (d1, d2) = (2 + sample % 3, 2 + (sample / 3) % 3);
        let psi = random_pure_state(d1, d2, &mut rng).expect("dims within caps");
        let coefficients = schmidt_decompose(&psi).coefficients().to_vec();
        let rho = psi.projector();
        for side in [TracedSide::First, TracedSide::Second] {
            let reduced = rho.reduced(side);
            let spectrum = hermitian_eigensystem(&reduced)
                .expect("reduced operators are Hermitian")
                .eigenvalues;
            for (i, &eigenvalue) in spectrum.iter().enumerate() {
                let coefficient = coefficients.get(i).copied().unwrap_or(0.0);
                worst = worst.max((eigenvalue - coefficient).abs());
            }
        }
    }
    report(
        2,
        worst < 1e-10,
        &format!("300 states, both reduction sides, worst spectrum mismatch {worst:.3e}"),
    );
}

#[test]
fn criterion_03_lemma5_suite() {
    let m = svn_measure();
    let mut all = true;
    let mut detail = String::new();
    for seed in [1_u64, 2, 3] {
        let reports = [
            audit_p1_continuity(&m, 200, seed),
            audit_p2(&m, 200, seed, 1e-9),
            audit_p3(&m, 200, seed, 1e-9),
            audit_p4(&m, 200, seed, 1e-9),
        ];
        for r in &reports {
            all &= r.passed;
        }
        detail.push_str(&format!(
            "seed {seed}: worst {:.2e}; ",
            reports
                .iter()
                .map(|r| r.worst_violation)
                .fold(0.0_f64, f64::max)
        ));
    }
    report(
        3,
        all,
        &format!("P1-P4 on svn, 200 samples each — {detail}"),
    );
}

#[test]
fn criterion_04_lemma4_and_lemma7_suite() {
    let m = svn_measure();
    let l4 = audit_l4(&m, 200, 44, 1e-9);
    let l7 = audit_l7(&m, 200, 44, 1e-9);
    let witness_value = match l7.witness.as_ref() {
        Some(Witness::SeparableState { value, .. }) => *value,
        _ => f64::NAN,
    };
    let ok = l4.passed
        && !l7.passed
        && (witness_value - LN_2).abs() < 1e-9
        && (l7.worst_violation - LN_2).abs() < 1e-9;
    report(
        4,
        ok,
        &format!(
            "L4 worst {:.3e} (pass), L7 documented failure with witness value {witness_value:.12}",
            l4.worst_violation
        ),
    );
}

#[test]
fn criterion_05_example_reproduction_via_cli() {
    let output = Command::new(env!("CARGO_BIN_EXE_entaudit"))
        .args(["demo", "p4-violation"])
        .output()
        .expect("binary runs");
    let exit_ok = output.status.code() == Some(1);
    let stdout = String::from_utf8(output.stdout).expect("utf8 output");
    let json_line = stdout
        .lines()
        .find(|line| line.starts_with('{'))
        .expect("JSON report line");
    let parsed: entaudit::AxiomReport = serde_json::from_str(json_line).expect("report parses");
    let (lhs, rhs) = match parsed.witness.as_ref() {
        Some(Witness::Superposition { lhs, rhs, .. }) => (*lhs, *rhs),
        _ => (f64::NAN, f64::NAN),
    };
    let numbers_ok = (lhs - 4.0 * 4.0_f64.ln()).abs() < 1e-9
        && (rhs - 4.0 * LN_2).abs() < 1e-9
        && (parsed.worst_violation - 4.0 * LN_2).abs() < 1e-9;
    report(
        5,
        exit_ok && numbers_ok,
        &format!(
            "demo p4-violation: exit {:?}, lhs {lhs:.9} (4 ln 4), rhs {rhs:.9} (4 ln 2), violation {:.9}",
            output.status.code(),
            parsed.worst_violation
        ),
    );
}

#[test]
fn criterion_06_uniqueness_constant_consistency() {
    let mut ok = true;
    let mut detail = String::new();
    for c in [0.5, 1.0, 2.5] {
        let m = svn_scaled_measure(c).expect("positive constant");
        let estimate = estimate_constant(&m, 300, 66).expect("entangled samples exist");
        ok &= (estimate.c_mean - c).abs() < 1e-8 && estimate.c_max_deviation < 1e-8;
        detail.push_str(&format!(
            "c={c}: mean {:.10}, dev {:.2e}; ",
            estimate.c_mean, estimate.c_max_deviation
        ));
    }
    let gamma = estimate_constant(&gamma_measure(), 300, 66).expect("entangled samples exist");
    ok &= gamma.c_max_deviation > 0.1;
    detail.push_str(&format!("gamma dev {:.4} (flagged)", gamma.c_max_deviation));
    report(6, ok, &detail);
}

#[test]
fn criterion_07_entropy_axiom_suite() {
    let shannon_reports = audit_khinchin(&shannon_functional());
    let shannon_ok = shannon_reports.iter().all(|r| r.passed)
        && shannon_reports
            .iter()
            .filter(|r| r.axiom != AxiomId::KfContinuity)
            .all(|r| r.tolerance == 1e-9);

    let renyi_reports = audit_khinchin(&renyi2_functional());
    let recursion = renyi_reports
        .iter()
        .find(|r| r.axiom == AxiomId::KfRecursion)
        .expect("recursion report present");
    let fair = ProbabilityDistribution::new(vec![0.5, 0.5]).expect("unit mass");
    let check = recursion_gap(&renyi2_functional(), &fair, 0.5);
    let gap_ok = (check.gap - 0.0589).abs() < 1e-4
        && (check.lhs - 0.98083).abs() < 1e-4
        && (check.rhs - 1.03972).abs() < 1e-4;
    let ok = shannon_ok && !recursion.passed && gap_ok;
    report(
        7,
        ok,
        &format!(
            "Shannon passes all four; Rényi-2 fails recursion, hand witness gap |{:.5} - {:.5}| = {:.5}",
            check.lhs, check.rhs, check.gap
        ),
    );
}

#[test]
fn criterion_08_mixing_exhibit() {
    let m = svn_measure();
    let audit = audit_m5(&m, 200, 88, DEFAULT_TOLERANCE);
    let replayed = audit
        .witness
        .as_ref()
        .and_then(|w| reevaluate_witness(&m, w))
        .unwrap_or(f64::NAN);
    let ok = !audit.passed
        && audit.worst_violation >= LN_2 - 1e-9
        && (replayed - audit.worst_violation).abs() < 1e-12
        && matches!(audit.witness, Some(Witness::Mixing { eta, .. }) if eta == 0.5);
    report(
        8,
        ok,
        &format!(
            "naive functional: worst violation {:.12} >= ln 2, witness replays to {replayed:.12}",
            audit.worst_violation
        ),
    );
}

#[test]
fn criterion_09_byte_identical_reports() {
    let dir = tempfile::tempdir().expect("temp dir");
    let paths = [
        dir.path().join("first.json"),
        dir.path().join("second.json"),
    ];
    for path in &paths {
        let output = Command::new(env!("CARGO_BIN_EXE_entaudit"))
            .args([
                "audit",
                "--measure",
                "svn",
                "--axioms",
                "P2,P3,P4",
                "--samples",
                "200",
                "--seed",
                "42",
                "--out",
                path.to_str().expect("utf8 path"),
            ])
            .output()
            .expect("binary runs");
        assert_eq!(output.status.code(), Some(0), "audit run failed");
    }
    let first = std::fs::read(&paths[0]).expect("first report");
    let second = std::fs::read(&paths[1]).expect("second report");
    report(
        9,
        first == second,
        &format!("two identical audit runs, {} bytes each", first.len()),
    );
}

#[test]
fn criterion_10_split_identity_cascade() {
    let m = svn_measure();
    let mut worst = 0.0_f64;
    let mut rng = seeded_rng(1010);
    for _ in 0..100 {
        let len = rng.random_range(2..=5usize);
        let p = ProbabilityDistribution::random(len, &mut rng);
        let eta: f64 = rng.random_range(0.0..1.0);
        let last = *p.values().last().expect("non-empty");
        let mut split = p.values().to_vec();
        split.pop();
        split.push(eta * last);
        split.push((1.0 - eta) * last);
        let split = ProbabilityDistribution::new(split).expect("mass preserved");
        let two_point = ProbabilityDistribution::new(vec![eta, 1.0 - eta]).expect("unit mass");
        let lhs = schmidt_profile_value(&m, &split);
        let rhs = schmidt_profile_value(&m, &p) + last * schmidt_profile_value(&m, &two_point);
        worst = worst.max((lhs - rhs).abs());
    }
    report(
        10,
        worst < 1e-9,
        &format!("100 random (distribution, eta) splits, worst identity gap {worst:.3e}"),
    );
}
