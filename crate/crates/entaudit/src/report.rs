//! Audit report types shared by the entropy and axiom audits.
//!
//! Every audit produces an [`AxiomReport`]: which axiom was checked, how
//! many samples ran, the worst violation observed, the tolerance it was
//! judged against, and a [`Witness`] — the concrete inputs achieving the
//! worst violation, serialized with enough detail to re-evaluate them
//! standalone. Reports are plain data and serialize to stable JSON, so two
//! identical audit runs produce byte-identical files.

use crate::linalg::ComplexMatrix;
use crate::states::StateFile;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Identifier of an audited axiom, lemma, or named exhibit.
///
/// `P1`–`P4` are the pure-state postulates (continuity, local-unitary
/// invariance, embedding invariance, Schmidt-orthogonal superposition
/// additivity); `M1`–`M5` their mixed-state analogues plus convexity;
/// `L4`/`L7` the separability-zero lemmas; `PROP6` the constant-ratio
/// consistency check. The `Kf*` variants cover the Khinchin–Faddeev
/// entropy audit, and `TraceAsymmetry` the named reduced-entropy exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomId {
    P1,
    P2,
    P3,
    P4,
    M1,
    M2,
    M3,
    M4,
    M5,
    L4,
    L7,
    #[serde(rename = "PROP6")]
    Prop6,
    #[serde(rename = "KF-continuity")]
    KfContinuity,
    #[serde(rename = "KF-normalization")]
    KfNormalization,
    #[serde(rename = "KF-symmetry")]
    KfSymmetry,
    #[serde(rename = "KF-recursion")]
    KfRecursion,
    #[serde(rename = "trace-asymmetry")]
    TraceAsymmetry,
}

impl AxiomId {
    /// The serialized name (`"P4"`, `"KF-recursion"`, ...).
    pub fn name(&self) -> &'static str {
        match self {
            AxiomId::P1 => "P1",
            AxiomId::P2 => "P2",
            AxiomId::P3 => "P3",
            AxiomId::P4 => "P4",
            AxiomId::M1 => "M1",
            AxiomId::M2 => "M2",
            AxiomId::M3 => "M3",
            AxiomId::M4 => "M4",
            AxiomId::M5 => "M5",
            AxiomId::L4 => "L4",
            AxiomId::L7 => "L7",
            AxiomId::Prop6 => "PROP6",
            AxiomId::KfContinuity => "KF-continuity",
            AxiomId::KfNormalization => "KF-normalization",
            AxiomId::KfSymmetry => "KF-symmetry",
            AxiomId::KfRecursion => "KF-recursion",
            AxiomId::TraceAsymmetry => "trace-asymmetry",
        }
    }
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which evaluator produced the left-hand side of a superposition check:
/// `evaluate_pure` on the superposed vector, or the mixed evaluator on its
/// projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvaluationRoute {
    /// LHS from the pure-state evaluator.
    Pure,
    /// LHS from the mixed evaluator applied to the projector.
    Projector,
}

/// The concrete inputs achieving a report's worst violation.
///
/// Each variant stores full-precision inputs and the values measured on
/// them, so re-running the same evaluation reproduces the reported
/// violation; states are embedded in the same JSON form the CLI reads,
/// making witnesses directly re-checkable with `compute`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Witness {
    /// A local rotation `(U ⊗ V) psi` and the values before/after.
    LocalUnitary {
        state: StateFile,
        u: Vec<Vec<[f64; 2]>>,
        v: Vec<Vec<[f64; 2]>>,
        original_value: f64,
        rotated_value: f64,
    },
    /// An embedding into `(new_d1, new_d2)` and the values before/after.
    Embedding {
        state: StateFile,
        new_d1: usize,
        new_d2: usize,
        original_value: f64,
        embedded_value: f64,
    },
    /// A Schmidt-orthogonal superposition with both sides of the
    /// additivity identity: `lhs` is the measure of the superposed state,
    /// `rhs = profile_value + Σ |λ_i|² component_values[i]`.
    Superposition {
        components: Vec<StateFile>,
        amplitudes: Vec<[f64; 2]>,
        superposed: StateFile,
        route: EvaluationRoute,
        lhs: f64,
        profile_value: f64,
        component_values: Vec<f64>,
        rhs: f64,
    },
    /// A convex mixture and the three values entering the convexity gap
    /// `mixture_value - eta * sigma_value - (1 - eta) * tau_value`. The
    /// combined state is stored alongside its ingredients so each of the
    /// three values can be re-checked directly from a file.
    Mixing {
        sigma: StateFile,
        tau: StateFile,
        eta: f64,
        mixture: StateFile,
        mixture_value: f64,
        sigma_value: f64,
        tau_value: f64,
    },
    /// A state, its perturbed copy at the finest magnitude, and the values
    /// on both.
    Perturbation {
        state: StateFile,
        perturbed: StateFile,
        magnitude: f64,
        base_value: f64,
        perturbed_value: f64,
    },
    /// A product state and the measure value on it (should be 0).
    ProductState { state: StateFile, value: f64 },
    /// A separable mixed state and the measure value on it (should be 0).
    SeparableState { state: StateFile, value: f64 },
    /// The state with the most deviant ratio `E / S_vN` in a constant
    /// estimation run.
    RatioPair {
        state: StateFile,
        value: f64,
        entropy: f64,
        ratio: f64,
        c_mean: f64,
    },
    /// A distribution whose functional value differs from an expected one.
    DistributionValue {
        distribution: Vec<f64>,
        value: f64,
        expected: f64,
    },
    /// A distribution, a permutation of it, and the values on both.
    PermutedDistribution {
        distribution: Vec<f64>,
        permutation: Vec<usize>,
        original_value: f64,
        permuted_value: f64,
    },
    /// A recursion split `(p_1,…,p_{n−1}, η p_n, (1−η) p_n)` with both
    /// sides of the recursion identity.
    RecursionSplit {
        distribution: Vec<f64>,
        eta: f64,
        lhs: f64,
        rhs: f64,
    },
    /// Two nearby binary distributions `(p, 1-p)` and `(q, 1-q)` and the
    /// functional values on both.
    DistributionPair {
        first: f64,
        second: f64,
        distance: f64,
        first_value: f64,
        second_value: f64,
    },
    /// A mixed state whose two one-sided reduced entropies differ.
    TraceAsymmetry {
        state: StateFile,
        value_tracing_first: f64,
        value_tracing_second: f64,
    },
}

/// Outcome of one audited axiom.
///
/// `passed` is derived from the comparison `worst_violation <= tolerance`
/// at construction, so the two fields can never disagree. The serialized
/// field names and their order are part of the report file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Which axiom was audited.
    pub axiom: AxiomId,
    /// Whether the worst violation stayed within tolerance.
    pub passed: bool,
    /// Number of samples evaluated.
    #[serde(rename = "samples")]
    pub samples_run: usize,
    /// Largest violation observed across all samples.
    pub worst_violation: f64,
    /// The tolerance the violation was judged against.
    pub tolerance: f64,
    /// Inputs achieving the worst violation (absent only when nothing was
    /// evaluated, e.g. a not-applicable audit).
    pub witness: Option<Witness>,
    /// RNG seed the audit ran with (0 for deterministic, sample-free runs).
    pub seed: u64,
    /// Free-form qualifier, e.g. for not-applicable audits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AxiomReport {
    /// Builds a report, deriving `passed` from the violation/tolerance
    /// comparison.
    pub fn new(
        axiom: AxiomId,
        samples_run: usize,
        worst_violation: f64,
        tolerance: f64,
        witness: Option<Witness>,
        seed: u64,
    ) -> Self {
        Self {
            axiom,
            passed: worst_violation <= tolerance,
            samples_run,
            worst_violation,
            tolerance,
            witness,
            seed,
            note: None,
        }
    }

    /// Attaches a human-readable note.
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Scalar violation for a sampled continuity check.
///
/// `moduli[i]` is the observed worst |ΔS| at the i-th perturbation scale,
/// ordered coarse to fine (e.g. 1e-2, 1e-3, 1e-4). Continuity demands the
/// modulus shrink with the scale and be small at the finest one, so the
/// violation is the larger of the finest modulus and any increase between
/// consecutive scales; a continuous functional yields the finest modulus,
/// which then has to clear the threshold.
pub(crate) fn continuity_violation(moduli: &[f64]) -> f64 {
    let finest = *moduli.last().expect("at least one scale");
    let worst_rise = moduli
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .fold(0.0, f64::max);
    finest.max(worst_rise)
}

/// Serializes a matrix as nested `[re, im]` pairs for witness payloads.
pub(crate) fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

/// Rebuilds a matrix from nested `[re, im]` pairs. Returns `None` for
/// ragged or empty payloads.
pub(crate) fn pairs_to_matrix(pairs: &[Vec<[f64; 2]>]) -> Option<ComplexMatrix> {
    let rows = pairs.len();
    let cols = pairs.first()?.len();
    if cols == 0 || pairs.iter().any(|row| row.len() != cols) {
        return None;
    }
    let data: Vec<Complex64> = pairs
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(rows, cols, data).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_flag_is_derived_from_the_comparison() {
        let pass = AxiomReport::new(AxiomId::P2, 10, 1e-12, 1e-9, None, 42);
        assert!(pass.passed);
        let fail = AxiomReport::new(AxiomId::P4, 10, 2.7726, 1e-9, None, 42);
        assert!(!fail.passed);
        // Boundary counts as passing.
        let edge = AxiomReport::new(AxiomId::P2, 1, 1e-9, 1e-9, None, 0);
        assert!(edge.passed);
    }

    #[test]
    fn report_json_uses_the_fixed_field_layout() {
        let report = AxiomReport::new(AxiomId::P4, 200, 2.7726, 1e-9, None, 42);
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"axiom":"P4","passed":false,"samples":200,"worst_violation":2.7726,"tolerance":1e-9,"witness":null,"seed":42}"#
        );
    }

    #[test]
    fn axiom_ids_serialize_to_their_display_names() {
        for (id, name) in [
            (AxiomId::Prop6, "\"PROP6\""),
            (AxiomId::KfRecursion, "\"KF-recursion\""),
            (AxiomId::TraceAsymmetry, "\"trace-asymmetry\""),
            (AxiomId::M5, "\"M5\""),
        ] {
            assert_eq!(serde_json::to_string(&id).unwrap(), name);
            let back: AxiomId = serde_json::from_str(name).unwrap();
            assert_eq!(back, id);
        }
    }

    #[test]
    fn continuity_violation_prefers_the_finest_scale_when_shrinking() {
        assert_eq!(continuity_violation(&[1e-2, 1e-3, 1e-4]), 1e-4);
        // A rise between scales dominates when larger than the finest term.
        let v = continuity_violation(&[1e-3, 5e-1, 1e-4]);
        assert!((v - 0.499).abs() < 1e-12);
        // Constant moduli: no rise, finest value decides.
        assert_eq!(continuity_violation(&[0.25, 0.25, 0.25]), 0.25);
    }

    #[test]
    fn matrix_pairs_round_trip() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(-3.0, 4.0),
            ],
        )
        .unwrap();
        let pairs = matrix_to_pairs(&m);
        let back = pairs_to_matrix(&pairs).unwrap();
        assert_eq!(back, m);
        assert!(pairs_to_matrix(&[vec![[1.0, 0.0]], vec![]]).is_none());
    }

    #[test]
    fn witness_json_is_tagged_by_type() {
        let w = Witness::RecursionSplit {
            distribution: vec![0.5, 0.5],
            eta: 0.5,
            lhs: 0.98,
            rhs: 1.04,
        };
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.starts_with(r#"{"type":"recursion-split""#), "{json}");
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert!(matches!(back, Witness::RecursionSplit { eta, .. } if eta == 0.5));
    }
}
