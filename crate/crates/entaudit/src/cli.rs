//! Command-line front end.
//!
//! Four subcommands:
//!
//! * `compute --measure <name> --state <file> [--base nat|bit]` — evaluate a
//!   measure on a state file, printing the value (and the Schmidt
//!   coefficients for pure inputs);
//! * `audit --measure <name> --axioms <list> [--samples N] [--seed S]
//!   [--tol T] [--out <file>]` — run the requested postulate audits and emit
//!   one report per axiom plus a summary;
//! * `demo <name>` — run a named deterministic demonstration
//!   (`p4-violation`, `m5-violation`, `trace-asymmetry`);
//! * `gen --d1 <n> --d2 <m> [--kind pure|separable] [--seed S] --out <file>`
//!   — write a random state file.
//!
//! Exit codes: 0 — everything requested passed or completed; 1 — at least
//! one audit or demo reported a violation (reports are still written);
//! 2 — configuration or input error, diagnosed on stderr in one line naming
//! the offending field. Identical `(config, input)` pairs produce
//! byte-identical artifacts: all randomness flows through the `--seed`
//! argument.
//!
//! Values are printed with 10 significant digits; the JSON artifacts carry
//! full precision. `--base bit` rescales *displayed* values by 1/ln 2;
//! audits always compare in nats, so tolerances are unit-independent.

use crate::axioms::{
    audit_l4, audit_l7, audit_m1_continuity, audit_m2, audit_m3, audit_m4, audit_m5,
    audit_p1_continuity, audit_p2, audit_p3, audit_p4, audit_prop6, demo, DemoKind,
    DEFAULT_SAMPLES, DEFAULT_TOLERANCE,
};
use crate::entropy::Base;
use crate::measures::{EntanglementMeasure, MeasureError, MeasureRegistry};
use crate::report::{AxiomId, AxiomReport, Witness};
use crate::schmidt::schmidt_decompose;
use crate::states::{
    random_pure_state_seeded, seeded_rng, SeparableDecomposition, State, StateFile,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

/// The axiom identifiers the `audit` subcommand accepts, in canonical
/// order. `--axioms all` expands to this list.
pub const AUDITABLE_AXIOMS: [AxiomId; 12] = [
    AxiomId::P1,
    AxiomId::P2,
    AxiomId::P3,
    AxiomId::P4,
    AxiomId::M1,
    AxiomId::M2,
    AxiomId::M3,
    AxiomId::M4,
    AxiomId::M5,
    AxiomId::L4,
    AxiomId::L7,
    AxiomId::Prop6,
];

/// A configuration or input problem; rendered as a one-line diagnostic
/// naming the offending field, and mapped to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    /// `--measure` failed to resolve.
    #[error("--measure: {0}")]
    Measure(#[from] MeasureError),
    /// `--state` (or a generated input) failed to load or validate.
    #[error("--state {path}: {message}")]
    State {
        /// The offending path.
        path: String,
        /// What went wrong.
        message: String,
    },
    /// `--axioms` contained an unknown name.
    #[error(
        "--axioms: unknown axiom '{0}' (expected P1, P2, P3, P4, M1, M2, M3, M4, M5, L4, L7, PROP6, or all)"
    )]
    UnknownAxiom(String),
    /// `--axioms` resolved to an empty list.
    #[error("--axioms: at least one axiom is required")]
    EmptyAxioms,
    /// `--samples` was zero.
    #[error("--samples: must be at least 1")]
    BadSamples,
    /// `--tol` was not a positive finite number.
    #[error("--tol: must be a positive finite number (got {0})")]
    BadTolerance(f64),
    /// The measure cannot evaluate the supplied mixed state.
    #[error("--measure {name}: no mixed-state evaluator, but --state {path} holds a mixed state")]
    MixedUnsupported {
        /// The measure name.
        name: String,
        /// The offending state path.
        path: String,
    },
    /// `demo` received an unknown name.
    #[error("demo: {0}")]
    Demo(#[from] crate::axioms::AxiomsError),
    /// `gen` received unusable dimensions.
    #[error("--d1/--d2: {0}")]
    Gen(String),
    /// A file or stream could not be written.
    #[error("writing {target}: {err}")]
    Write {
        /// The destination (path or "stdout").
        target: String,
        /// The underlying error.
        err: std::io::Error,
    },
}

/// Display unit for printed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    /// Natural logarithm units.
    Nat,
    /// Binary logarithm units.
    Bit,
}

impl From<BaseArg> for Base {
    fn from(value: BaseArg) -> Self {
        match value {
            BaseArg::Nat => Base::Nat,
            BaseArg::Bit => Base::Bit,
        }
    }
}

/// Kinds of state the `gen` subcommand can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// A Haar-random pure state.
    Pure,
    /// A random separable density operator (mixture of products).
    Separable,
}

#[derive(Debug, Parser)]
#[command(
    name = "entaudit",
    version,
    about = "Bipartite entanglement measures and numerical audits of their defining postulates"
)]
struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Evaluate a measure on a state file.
    Compute {
        /// Measure name: svn, gamma, shannon-schmidt, or svn-scaled:<c>.
        #[arg(long)]
        measure: String,
        /// Path to a state JSON file (pure or mixed).
        #[arg(long)]
        state: PathBuf,
        /// Display unit (audits and JSON always use nats).
        #[arg(long, value_enum, default_value_t = BaseArg::Nat)]
        base: BaseArg,
    },
    /// Run postulate audits against a measure.
    Audit {
        /// Measure name: svn, gamma, shannon-schmidt, or svn-scaled:<c>.
        #[arg(long)]
        measure: String,
        /// Comma-separated axioms (P1..P4, M1..M5, L4, L7, PROP6) or "all".
        #[arg(long, value_delimiter = ',', required = true)]
        axioms: Vec<String>,
        /// Random samples per audit.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Seed for all sampled inputs.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance for the exact-identity audits (P2-P4, M2-M5, L4, L7);
        /// the continuity audits (P1, M1) and PROP6 use fixed thresholds.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Write the JSON report document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named deterministic demonstration.
    Demo {
        /// One of: p4-violation, m5-violation, trace-asymmetry.
        name: String,
    },
    /// Generate a random state file.
    Gen {
        /// First factor dimension.
        #[arg(long)]
        d1: usize,
        /// Second factor dimension.
        #[arg(long)]
        d2: usize,
        /// Kind of state to generate.
        #[arg(long, value_enum, default_value_t = GenKind::Pure)]
        kind: GenKind,
        /// Seed for the generated state.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Destination path for the state JSON.
        #[arg(long)]
        out: PathBuf,
    },
}

/// A fully parsed and semantically validated invocation.
#[derive(Debug, Clone)]
pub enum RunConfig {
    /// Evaluate a measure on one state.
    Compute {
        /// Resolved measure name.
        measure: String,
        /// State file to read.
        input_path: PathBuf,
        /// Display unit.
        base: Base,
    },
    /// Run audits.
    Audit {
        /// Resolved measure name.
        measure: String,
        /// Axioms to audit, deduplicated, in request order.
        axioms: Vec<AxiomId>,
        /// Samples per audit (≥ 1).
        samples: usize,
        /// Seed for all sampled inputs.
        seed: u64,
        /// Tolerance for the exact-identity audits (> 0).
        tolerance: f64,
        /// Report destination; stdout when absent.
        output_path: Option<PathBuf>,
    },
    /// Run a named demonstration.
    Demo {
        /// Which demonstration.
        kind: DemoKind,
    },
    /// Generate a state file.
    Gen {
        /// First factor dimension.
        d1: usize,
        /// Second factor dimension.
        d2: usize,
        /// Kind of state.
        kind: GenKind,
        /// Seed for the generated state.
        seed: u64,
        /// Destination path.
        output_path: PathBuf,
    },
}

/// Parses an axiom name as accepted by `--axioms` (case-insensitive).
pub fn parse_axiom(name: &str) -> Result<AxiomId, CliError> {
    let upper = name.trim().to_ascii_uppercase();
    AUDITABLE_AXIOMS
        .iter()
        .copied()
        .find(|axiom| axiom.name() == upper)
        .ok_or_else(|| CliError::UnknownAxiom(name.trim().to_string()))
}

fn parse_axiom_list(names: &[String]) -> Result<Vec<AxiomId>, CliError> {
    let mut axioms = Vec::new();
    for name in names {
        if name.trim().eq_ignore_ascii_case("all") {
            for axiom in AUDITABLE_AXIOMS {
                if !axioms.contains(&axiom) {
                    axioms.push(axiom);
                }
            }
            continue;
        }
        let axiom = parse_axiom(name)?;
        if !axioms.contains(&axiom) {
            axioms.push(axiom);
        }
    }
    if axioms.is_empty() {
        return Err(CliError::EmptyAxioms);
    }
    Ok(axioms)
}

impl RunConfig {
    fn from_args(args: CliArgs) -> Result<Self, CliError> {
        match args.command {
            CliCommand::Compute {
                measure,
                state,
                base,
            } => Ok(RunConfig::Compute {
                measure,
                input_path: state,
                base: base.into(),
            }),
            CliCommand::Audit {
                measure,
                axioms,
                samples,
                seed,
                tol,
                out,
            } => {
                if samples == 0 {
                    return Err(CliError::BadSamples);
                }
                if !(tol.is_finite() && tol > 0.0) {
                    return Err(CliError::BadTolerance(tol));
                }
                Ok(RunConfig::Audit {
                    measure,
                    axioms: parse_axiom_list(&axioms)?,
                    samples,
                    seed,
                    tolerance: tol,
                    output_path: out,
                })
            }
            CliCommand::Demo { name } => Ok(RunConfig::Demo {
                kind: DemoKind::from_str(&name)?,
            }),
            CliCommand::Gen {
                d1,
                d2,
                kind,
                seed,
                out,
            } => Ok(RunConfig::Gen {
                d1,
                d2,
                kind,
                seed,
                output_path: out,
            }),
        }
    }
}

/// The summary block of an audit report document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditSummary {
    /// Number of axioms requested.
    pub requested: usize,
    /// Number of passing reports.
    pub passed: usize,
    /// Number of failing reports.
    pub failed: usize,
    /// Whether every requested audit passed.
    pub all_passed: bool,
}

/// The JSON document the `audit` subcommand emits: one report per
/// requested axiom, in request order, plus a summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditDocument {
    /// The audited measure's name.
    pub measure: String,
    /// Samples per audit.
    pub samples: usize,
    /// Seed for all sampled inputs.
    pub seed: u64,
    /// Tolerance applied to the exact-identity audits.
    pub tolerance: f64,
    /// One report per requested axiom.
    pub reports: Vec<AxiomReport>,
    /// Aggregate outcome.
    pub summary: AuditSummary,
}

/// Formats a value with 10 significant digits, the display precision of
/// every number the CLI prints. JSON artifacts keep full precision.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Take the magnitude from the correctly rounded scientific form so
    // that values like 0.9999999999999999 print as 1.000000000 rather
    // than picking up an eleventh digit.
    let scientific = format!("{x:.9e}");
    let e = scientific.find('e').expect("scientific notation");
    let magnitude: i32 = scientific[e + 1..].parse().expect("integer exponent");
    if (-4..10).contains(&magnitude) {
        let decimals = (9 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        scientific
    }
}

/// Parses a known CLI invocation (excluding the program name itself is not
/// required; pass full argv). Exposed for tests.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    RunConfig::from_args(CliArgs::parse_from(argv))
}

/// Parses argv and runs it, writing human-readable output to `stdout`.
/// Returns the process exit code; configuration and input errors surface
/// as `Err` and belong on stderr with exit code 2.
pub fn run_from_args<I, T>(argv: I, stdout: &mut dyn Write) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = parse_config(argv)?;
    run(&config, stdout)
}

/// Executes one validated invocation. Returns the exit code (0 or 1);
/// errors map to exit code 2 in `main`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match config {
        RunConfig::Compute {
            measure,
            input_path,
            base,
        } => run_compute(measure, input_path, *base, stdout),
        RunConfig::Audit {
            measure,
            axioms,
            samples,
            seed,
            tolerance,
            output_path,
        } => run_audit(
            measure,
            axioms,
            *samples,
            *seed,
            *tolerance,
            output_path.as_deref(),
            stdout,
        ),
        RunConfig::Demo { kind } => run_demo(*kind, stdout),
        RunConfig::Gen {
            d1,
            d2,
            kind,
            seed,
            output_path,
        } => run_gen(*d1, *d2, *kind, *seed, output_path, stdout),
    }
}

fn resolve_measure(name: &str) -> Result<EntanglementMeasure, CliError> {
    Ok(MeasureRegistry::with_builtins().resolve(name)?)
}

fn load_state(path: &Path) -> Result<State, CliError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|err| CliError::State {
        path: display.clone(),
        message: err.to_string(),
    })?;
    let file: StateFile = serde_json::from_str(&text).map_err(|err| CliError::State {
        path: display.clone(),
        message: format!("malformed JSON: {err}"),
    })?;
    file.into_state().map_err(|err| CliError::State {
        path: display,
        message: err.to_string(),
    })
}

fn write_line(stdout: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(stdout, "{line}").map_err(|err| CliError::Write {
        target: "stdout".to_string(),
        err,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|err| CliError::Write {
        target: path.display().to_string(),
        err,
    })
}

fn display_value(value_nats: f64, base: Base) -> (f64, &'static str) {
    match base {
        Base::Nat => (value_nats, "nat"),
        Base::Bit => (value_nats / std::f64::consts::LN_2, "bit"),
    }
}

fn run_compute(
    measure_name: &str,
    input_path: &Path,
    base: Base,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let measure = resolve_measure(measure_name)?;
    let state = load_state(input_path)?;
    match &state {
        State::Pure(psi) => {
            let value = measure.evaluate_pure(psi);
            let (shown, unit) = display_value(value, base);
            write_line(stdout, &format!("{} ({unit})", format_significant(shown)))?;
            let form = schmidt_decompose(psi);
            let mut line = String::from("schmidt coefficients:");
            for &p in form.coefficients() {
                let _ = write!(line, " {}", format_significant(p));
            }
            write_line(stdout, &line)?;
        }
        State::Mixed(rho) => {
            let value = measure
                .evaluate_mixed(rho)
                .ok_or_else(|| CliError::MixedUnsupported {
                    name: measure_name.to_string(),
                    path: input_path.display().to_string(),
                })?;
            let (shown, unit) = display_value(value, base);
            write_line(stdout, &format!("{} ({unit})", format_significant(shown)))?;
        }
    }
    Ok(0)
}

/// Runs the audit for one axiom identifier with the CLI's tolerance
/// conventions: `tol` applies to the exact-identity audits, while the
/// continuity audits (P1, M1) and PROP6 keep their fixed thresholds.
///
/// # Panics
///
/// Panics when `axiom` is not one of [`AUDITABLE_AXIOMS`].
pub fn run_audit_axiom(
    measure: &EntanglementMeasure,
    axiom: AxiomId,
    samples: usize,
    seed: u64,
    tol: f64,
) -> AxiomReport {
    match axiom {
        AxiomId::P1 => audit_p1_continuity(measure, samples, seed),
        AxiomId::P2 => audit_p2(measure, samples, seed, tol),
        AxiomId::P3 => audit_p3(measure, samples, seed, tol),
        AxiomId::P4 => audit_p4(measure, samples, seed, tol),
        AxiomId::M1 => audit_m1_continuity(measure, samples, seed),
        AxiomId::M2 => audit_m2(measure, samples, seed, tol),
        AxiomId::M3 => audit_m3(measure, samples, seed, tol),
        AxiomId::M4 => audit_m4(measure, samples, seed, tol),
        AxiomId::M5 => audit_m5(measure, samples, seed, tol),
        AxiomId::L4 => audit_l4(measure, samples, seed, tol),
        AxiomId::L7 => audit_l7(measure, samples, seed, tol),
        AxiomId::Prop6 => audit_prop6(measure, samples, seed),
        // The remaining identifiers belong to the entropy-functional audit
        // and the demos; parse_axiom never produces them.
        other => unreachable!("{} is not a measure audit", other.name()),
    }
}

fn run_audit(
    measure_name: &str,
    axioms: &[AxiomId],
    samples: usize,
    seed: u64,
    tolerance: f64,
    output_path: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let measure = resolve_measure(measure_name)?;
    let reports: Vec<AxiomReport> = axioms
        .iter()
        .map(|&axiom| run_audit_axiom(&measure, axiom, samples, seed, tolerance))
        .collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    let summary = AuditSummary {
        requested: reports.len(),
        passed,
        failed: reports.len() - passed,
        all_passed: passed == reports.len(),
    };
    for report in &reports {
        let verdict = if report.passed { "pass" } else { "FAIL" };
        let mut line = format!(
            "{:<6} {}  worst {}  tolerance {}  samples {}",
            report.axiom.name(),
            verdict,
            format_significant(report.worst_violation),
            format_significant(report.tolerance),
            report.samples_run,
        );
        if let Some(note) = &report.note {
            let _ = write!(line, "  ({note})");
        }
        write_line(stdout, &line)?;
    }
    write_line(
        stdout,
        &format!("summary: {passed}/{} passed", reports.len()),
    )?;
    let document = AuditDocument {
        measure: measure_name.to_string(),
        samples,
        seed,
        tolerance,
        reports,
        summary,
    };
    let json = serde_json::to_string_pretty(&document).expect("report serialization is total");
    match output_path {
        Some(path) => {
            write_file(path, &format!("{json}\n"))?;
            write_line(stdout, &format!("report written to {}", path.display()))?;
        }
        None => {
            let compact = serde_json::to_string(&document).expect("report serialization is total");
            write_line(stdout, &compact)?;
        }
    }
    Ok(if document.summary.all_passed { 0 } else { 1 })
}

/// Label/value pairs describing a witness for human-readable output.
fn describe_witness(witness: &Witness) -> Vec<(&'static str, f64)> {
    match witness {
        Witness::Superposition {
            lhs,
            profile_value,
            rhs,
            ..
        } => vec![
            ("lhs", *lhs),
            ("profile value", *profile_value),
            ("rhs", *rhs),
        ],
        Witness::Mixing {
            eta,
            mixture_value,
            sigma_value,
            tau_value,
            ..
        } => vec![
            ("eta", *eta),
            ("mixture value", *mixture_value),
            ("sigma value", *sigma_value),
            ("tau value", *tau_value),
        ],
        Witness::TraceAsymmetry {
            value_tracing_first,
            value_tracing_second,
            ..
        } => vec![
            ("tracing first", *value_tracing_first),
            ("tracing second", *value_tracing_second),
        ],
        Witness::LocalUnitary {
            original_value,
            rotated_value,
            ..
        } => vec![
            ("original value", *original_value),
            ("rotated value", *rotated_value),
        ],
        Witness::Embedding {
            original_value,
            embedded_value,
            ..
        } => vec![
            ("original value", *original_value),
            ("embedded value", *embedded_value),
        ],
        Witness::Perturbation {
            magnitude,
            base_value,
            perturbed_value,
            ..
        } => vec![
            ("magnitude", *magnitude),
            ("base value", *base_value),
            ("perturbed value", *perturbed_value),
        ],
        Witness::ProductState { value, .. } | Witness::SeparableState { value, .. } => {
            vec![("value", *value)]
        }
        Witness::RatioPair {
            value,
            entropy,
            ratio,
            c_mean,
            ..
        } => vec![
            ("value", *value),
            ("entropy", *entropy),
            ("ratio", *ratio),
            ("c_mean", *c_mean),
        ],
        Witness::DistributionValue {
            value, expected, ..
        } => vec![("value", *value), ("expected", *expected)],
        Witness::PermutedDistribution {
            original_value,
            permuted_value,
            ..
        } => vec![
            ("original value", *original_value),
            ("permuted value", *permuted_value),
        ],
        Witness::RecursionSplit { eta, lhs, rhs, .. } => {
            vec![("eta", *eta), ("lhs", *lhs), ("rhs", *rhs)]
        }
        Witness::DistributionPair {
            distance,
            first_value,
            second_value,
            ..
        } => vec![
            ("distance", *distance),
            ("first value", *first_value),
            ("second value", *second_value),
        ],
    }
}

fn run_demo(kind: DemoKind, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let report = demo(kind);
    write_line(
        stdout,
        &format!("demo {kind}: axiom {}", report.axiom.name()),
    )?;
    if let Some(note) = &report.note {
        write_line(stdout, note)?;
    }
    if let Some(witness) = &report.witness {
        for (label, value) in describe_witness(witness) {
            write_line(stdout, &format!("{label} {}", format_significant(value)))?;
        }
    }
    write_line(
        stdout,
        &format!("violation {}", format_significant(report.worst_violation)),
    )?;
    let json = serde_json::to_string(&report).expect("report serialization is total");
    write_line(stdout, &json)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn run_gen(
    d1: usize,
    d2: usize,
    kind: GenKind,
    seed: u64,
    output_path: &Path,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let state = match kind {
        GenKind::Pure => State::Pure(
            random_pure_state_seeded(d1, d2, seed).map_err(|err| CliError::Gen(err.to_string()))?,
        ),
        GenKind::Separable => {
            let mut rng = seeded_rng(seed);
            let terms = rng.random_range(2..=4usize);
            let decomposition = SeparableDecomposition::random(d1, d2, terms, &mut rng)
                .map_err(|err| CliError::Gen(err.to_string()))?;
            State::Mixed(
                crate::states::build_separable(&decomposition)
                    .map_err(|err| CliError::Gen(err.to_string()))?,
            )
        }
    };
    let file = StateFile::from_state(&state);
    let json = serde_json::to_string_pretty(&file).expect("state serialization is total");
    write_file(output_path, &format!("{json}\n"))?;
    write_line(
        stdout,
        &format!(
            "wrote {} ({}, dims {}x{})",
            output_path.display(),
            state.kind(),
            d1,
            d2
        ),
    )?;
    Ok(0)
}

/// Entry point for the binary: parse argv, run, map errors to exit 2.
pub fn main_entry() -> std::process::ExitCode {
    let args = CliArgs::parse();
    let config = match RunConfig::from_args(args) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return std::process::ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&config, &mut lock) {
        Ok(code) => std::process::ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::ExitCode::from(2)
        }
    }
}
