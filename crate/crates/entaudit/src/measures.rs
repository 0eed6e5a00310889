//! Candidate entanglement measures and the registry that vets them.
//!
//! An [`EntanglementMeasure`] wraps a named functional on pure bipartite
//! states — optionally extended to density operators — together with the
//! positive scale constant relating it to the reduced von Neumann entropy.
//! Built-ins:
//!
//! * `svn` — the reduced von Neumann entropy, the measure every audit in
//!   this crate should certify (optionally rescaled: `svn-scaled:<c>`);
//! * `gamma` — the greatest-cross-norm functional `g ln g` with
//!   `g = (Σ √p_i)²` on Schmidt coefficients `p`, a continuous, locally
//!   invariant measure that nevertheless fails superposition additivity;
//! * `shannon-schmidt` — an alias of `svn` restricted to pure states.
//!
//! The [`MeasureRegistry`] holds vetted measures and resolves the CLI's
//! measure names. Registration rejects functionals that are identically
//! zero on entangled states, since the uniqueness question ("is every
//! passing measure a multiple of the entropy?") is vacuous for them.

use crate::entropy::{svn_pure, Base, MAX_FUNCTIONAL_LEN};
use crate::linalg::TracedSide;
use crate::schmidt::schmidt_decompose;
use crate::states::{
    random_pure_state, seeded_rng, DensityOperator, ProbabilityDistribution, StateVector,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// Samples drawn by the registration probe that rejects identically
/// vanishing functionals.
const ZERO_PROBE_SAMPLES: usize = 50;

/// Fixed seed of the registration probe; registration is deterministic.
const ZERO_PROBE_SEED: u64 = 711;

/// A functional below this on all probe states counts as identically zero.
const ZERO_PROBE_THRESHOLD: f64 = 1e-12;

/// Ways constructing, registering, or resolving a measure can fail.
#[derive(Debug, Error)]
pub enum MeasureError {
    /// The scale constant must be a finite positive real.
    #[error("scale constant {0} is not a finite positive real")]
    BadScaleConstant(f64),
    /// The functional never exceeded the zero threshold on the probe set.
    #[error(
        "measure '{name}' looks identically zero: no probe value above {threshold:e} \
         across {samples} entangled states"
    )]
    IdenticallyZero {
        /// Name of the rejected measure.
        name: String,
        /// Probe threshold.
        threshold: f64,
        /// Probe sample count.
        samples: usize,
    },
    /// A measure with this name is already registered.
    #[error("measure '{0}' is already registered")]
    DuplicateName(String),
    /// The name matches no registered measure or recognized pattern.
    #[error("unknown measure '{0}' (expected svn, svn-scaled:<c>, gamma, or shannon-schmidt)")]
    UnknownName(String),
    /// A `svn-scaled:<c>` name whose constant failed to parse.
    #[error(
        "cannot parse scale constant in '{0}': expected svn-scaled:<c> with c a positive real"
    )]
    UnparsableScale(String),
}

type PureEvaluator = Arc<dyn Fn(&StateVector) -> f64 + Send + Sync>;
type MixedEvaluator = Arc<dyn Fn(&DensityOperator) -> f64 + Send + Sync>;

/// A named candidate entanglement measure: a non-negative functional on
/// pure bipartite states, an optional extension to density operators, and
/// the positive constant `c` tying it to the reduced von Neumann entropy
/// (built-ins bake `c` into the evaluator; the field records it).
#[derive(Clone)]
pub struct EntanglementMeasure {
    name: String,
    scale_constant: f64,
    pure_evaluator: PureEvaluator,
    mixed_evaluator: Option<MixedEvaluator>,
}

impl EntanglementMeasure {
    /// Wraps a pure-state evaluator under a name with scale constant `c`.
    /// The evaluator is expected to return `c`-scaled nats; `c` itself is
    /// metadata used when reporting constant estimates.
    pub fn new(
        name: impl Into<String>,
        scale_constant: f64,
        pure_evaluator: impl Fn(&StateVector) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, MeasureError> {
        if !scale_constant.is_finite() || scale_constant <= 0.0 {
            return Err(MeasureError::BadScaleConstant(scale_constant));
        }
        Ok(Self {
            name: name.into(),
            scale_constant,
            pure_evaluator: Arc::new(pure_evaluator),
            mixed_evaluator: None,
        })
    }

    /// Attaches a density-operator evaluator. It must agree with the pure
    /// evaluator on projectors of pure states (checked by audits, not
    /// here).
    pub fn with_mixed_evaluator(
        mut self,
        mixed_evaluator: impl Fn(&DensityOperator) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.mixed_evaluator = Some(Arc::new(mixed_evaluator));
        self
    }

    /// The measure's name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The scale constant `c` this measure was built with.
    pub fn scale_constant(&self) -> f64 {
        self.scale_constant
    }

    /// Whether the measure extends to density operators.
    pub fn has_mixed_evaluator(&self) -> bool {
        self.mixed_evaluator.is_some()
    }

    /// Evaluates the measure on a pure state.
    pub fn evaluate_pure(&self, psi: &StateVector) -> f64 {
        (self.pure_evaluator)(psi)
    }

    /// Evaluates the measure on a density operator, if it extends to them.
    pub fn evaluate_mixed(&self, rho: &DensityOperator) -> Option<f64> {
        self.mixed_evaluator.as_ref().map(|f| f(rho))
    }
}

impl std::fmt::Debug for EntanglementMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EntanglementMeasure")
            .field("name", &self.name)
            .field("scale_constant", &self.scale_constant)
            .field("has_mixed_evaluator", &self.mixed_evaluator.is_some())
            .finish_non_exhaustive()
    }
}

/// The greatest cross norm of a pure state's projector, in closed form:
/// `(Σ_i √p_i)²` over the Schmidt coefficients `p_i`. Lies in
/// `[1, min(d1, d2)]`, hitting 1 exactly on product states.
pub fn gamma_norm_pure(psi: &StateVector) -> f64 {
    let root_sum: f64 = schmidt_decompose(psi)
        .coefficients()
        .iter()
        .map(|&p| p.sqrt())
        .sum();
    root_sum * root_sum
}

/// The cross-norm entanglement candidate `g ln g` with
/// `g = gamma_norm_pure(ψ)`. Non-negative because `g ≥ 1`; zero exactly on
/// product states.
pub fn gamma_measure_pure(psi: &StateVector) -> f64 {
    let g = gamma_norm_pure(psi);
    g * g.ln()
}

/// Evaluates a measure on the canonical pure state whose Schmidt
/// coefficients are `p`: the diagonal-amplitude state `Σ_i √p_i |i⟩|i⟩` on
/// an `(n, n)` system. Because measures passing local invariance and
/// embedding invariance depend only on the nonzero Schmidt coefficients,
/// this well-defines "the value of E at a Schmidt profile" — the term the
/// superposition-additivity audits compare against.
///
/// Panics if `p` is longer than [`MAX_FUNCTIONAL_LEN`], beyond which the
/// canonical carrier state would exceed the state-dimension cap.
pub fn schmidt_profile_value(m: &EntanglementMeasure, p: &ProbabilityDistribution) -> f64 {
    let n = p.len();
    assert!(
        n <= MAX_FUNCTIONAL_LEN,
        "profile length {n} exceeds the cap {MAX_FUNCTIONAL_LEN}"
    );
    let mut amplitudes = vec![Complex64::ZERO; n * n];
    for (i, &value) in p.values().iter().enumerate() {
        amplitudes[i * n + i] = Complex64::new(value.sqrt(), 0.0);
    }
    let carrier = StateVector::new(n, n, amplitudes)
        .expect("a unit-mass profile yields a normalized diagonal state");
    m.evaluate_pure(&carrier)
}

/// The reduced von Neumann entropy as a measure (`c = 1`).
///
/// Its `mixed_evaluator` is the *naive* extension — the entropy of the
/// reduced operator obtained by tracing out the second factor, applied to
/// a general density operator. This extension is registered deliberately
/// even though it is **not** a valid mixed-state measure: it assigns ln 2
/// to separable mixtures like `(P_|00⟩ + P_|11⟩)/2` and increases under
/// mixing. The mixed-state audits exist to exhibit exactly those failures;
/// see the `m5-violation` and `trace-asymmetry` demonstrations.
pub fn svn_measure() -> EntanglementMeasure {
    EntanglementMeasure::new("svn", 1.0, |psi| svn_pure(psi, Base::Nat))
        .expect("constant 1 is valid")
        .with_mixed_evaluator(|rho| crate::entropy::svn_mixed(rho, TracedSide::Second, Base::Nat))
}

/// The reduced von Neumann entropy rescaled by `c`: the family Proposition-
/// style uniqueness says exhausts all passing measures.
pub fn svn_scaled_measure(c: f64) -> Result<EntanglementMeasure, MeasureError> {
    Ok(
        EntanglementMeasure::new(format!("svn-scaled:{c}"), c, move |psi| {
            c * svn_pure(psi, Base::Nat)
        })?
        .with_mixed_evaluator(move |rho| {
            c * crate::entropy::svn_mixed(rho, TracedSide::Second, Base::Nat)
        }),
    )
}

/// The cross-norm measure `g ln g` (pure states only).
pub fn gamma_measure() -> EntanglementMeasure {
    EntanglementMeasure::new("gamma", 1.0, gamma_measure_pure).expect("constant 1 is valid")
}

/// Alias of `svn` restricted to pure states (no mixed evaluator).
pub fn shannon_schmidt_measure() -> EntanglementMeasure {
    EntanglementMeasure::new("shannon-schmidt", 1.0, |psi| svn_pure(psi, Base::Nat))
        .expect("constant 1 is valid")
}

/// Probes a measure on Haar-random entangled 2×2 states and rejects it if
/// every value sits below the zero threshold.
fn reject_identically_zero(m: &EntanglementMeasure) -> Result<(), MeasureError> {
    let mut rng = seeded_rng(ZERO_PROBE_SEED);
    let mut max_seen = 0.0_f64;
    for _ in 0..ZERO_PROBE_SAMPLES {
        let psi = random_pure_state(2, 2, &mut rng).expect("2x2 is within caps");
        max_seen = max_seen.max(m.evaluate_pure(&psi).abs());
    }
    if max_seen <= ZERO_PROBE_THRESHOLD {
        return Err(MeasureError::IdenticallyZero {
            name: m.name().to_string(),
            threshold: ZERO_PROBE_THRESHOLD,
            samples: ZERO_PROBE_SAMPLES,
        });
    }
    Ok(())
}

/// A name-keyed store of vetted measures.
#[derive(Debug, Default)]
pub struct MeasureRegistry {
    measures: BTreeMap<String, EntanglementMeasure>,
}

impl MeasureRegistry {
    /// An empty registry.
    pub fn new() -> Self {
        Self::default()
    }

    /// A registry preloaded with `svn`, `gamma`, and `shannon-schmidt`.
    pub fn with_builtins() -> Self {
        let mut registry = Self::new();
        for m in [svn_measure(), gamma_measure(), shannon_schmidt_measure()] {
            registry
                .register(m)
                .expect("built-in measures pass the zero probe");
        }
        registry
    }

    /// Registers a measure after vetting it against the zero probe.
    pub fn register(&mut self, m: EntanglementMeasure) -> Result<(), MeasureError> {
        if self.measures.contains_key(m.name()) {
            return Err(MeasureError::DuplicateName(m.name().to_string()));
        }
        reject_identically_zero(&m)?;
        self.measures.insert(m.name().to_string(), m);
        Ok(())
    }

    /// Looks up a registered measure by exact name.
    pub fn get(&self, name: &str) -> Option<&EntanglementMeasure> {
        self.measures.get(name)
    }

    /// Registered names, sorted.
    pub fn names(&self) -> Vec<&str> {
        self.measures.keys().map(String::as_str).collect()
    }

    /// Resolves a CLI measure name: an exact registered name, or the
    /// pattern `svn-scaled:<c>` which constructs (and vets) a rescaled
    /// entropy on the fly.
    pub fn resolve(&self, name: &str) -> Result<EntanglementMeasure, MeasureError> {
        if let Some(m) = self.measures.get(name) {
            return Ok(m.clone());
        }
        if let Some(raw) = name.strip_prefix("svn-scaled:") {
            let c: f64 = raw
                .parse()
                .map_err(|_| MeasureError::UnparsableScale(name.to_string()))?;
            let m = svn_scaled_measure(c)?;
            reject_identically_zero(&m)?;
            return Ok(m);
        }
        Err(MeasureError::UnknownName(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random_local_unitary;

    const LN_2: f64 = std::f64::consts::LN_2;
    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> StateVector {
        StateVector::new(
            2,
            2,
            vec![
                c(SQRT_HALF, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                c(SQRT_HALF, 0.0),
            ],
        )
        .unwrap()
    }

    fn product() -> StateVector {
        StateVector::new(
            2,
            2,
            vec![
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ZERO,
            ],
        )
        .unwrap()
    }

    fn maximal4() -> StateVector {
        let mut amps = vec![Complex64::ZERO; 16];
        for k in 0..4 {
            amps[k * 4 + k] = c(0.5, 0.0);
        }
        StateVector::new(4, 4, amps).unwrap()
    }

    fn dist(values: &[f64]) -> ProbabilityDistribution {
        ProbabilityDistribution::new(values.to_vec()).unwrap()
    }

    #[test]
    fn svn_measure_matches_hand_values() {
        let m = svn_measure();
        assert!((m.evaluate_pure(&bell()) - LN_2).abs() < 1e-12);
        assert!(m.evaluate_pure(&product()).abs() < 1e-12);
        assert_eq!(m.scale_constant(), 1.0);
    }

    #[test]
    fn scaled_svn_scales_values_and_records_the_constant() {
        let m = svn_scaled_measure(2.5).unwrap();
        assert!((m.evaluate_pure(&bell()) - 2.5 * LN_2).abs() < 1e-12);
        assert_eq!(m.scale_constant(), 2.5);
        assert_eq!(m.name(), "svn-scaled:2.5");
    }

    #[test]
    fn bad_scale_constants_are_rejected() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                svn_scaled_measure(bad),
                Err(MeasureError::BadScaleConstant(_))
            ));
        }
    }

    #[test]
    fn gamma_norm_matches_hand_values() {
        assert!((gamma_norm_pure(&product()) - 1.0).abs() < 1e-12);
        assert!((gamma_norm_pure(&bell()) - 2.0).abs() < 1e-12);
        assert!((gamma_norm_pure(&maximal4()) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_norm_stays_in_its_range_on_random_states() {
        for sample in 0..100 {
            let mut rng = seeded_rng(1200 + sample);
            let psi = random_pure_state(3, 4, &mut rng).unwrap();
            let g = gamma_norm_pure(&psi);
            assert!((1.0 - 1e-12..=3.0 + 1e-9).contains(&g), "g = {g}");
        }
    }

    #[test]
    fn gamma_measure_matches_hand_values() {
        assert!(gamma_measure_pure(&product()).abs() < 1e-12);
        let bell_value = gamma_measure_pure(&bell());
        assert!((bell_value - 2.0 * LN_2).abs() < 1e-12);
        assert!((bell_value - 1.3862943611).abs() < 1e-10);
        let max_value = gamma_measure_pure(&maximal4());
        assert!((max_value - 4.0 * 4.0_f64.ln()).abs() < 1e-12);
        assert!((max_value - 5.5451774445).abs() < 1e-10);
    }

    #[test]
    fn schmidt_profile_value_realizes_profiles_on_canonical_states() {
        let svn = svn_measure();
        let gamma = gamma_measure();
        assert!((schmidt_profile_value(&svn, &dist(&[0.5, 0.5])) - LN_2).abs() < 1e-12);
        assert!((schmidt_profile_value(&gamma, &dist(&[0.5, 0.5])) - 2.0 * LN_2).abs() < 1e-12);
        assert!(schmidt_profile_value(&svn, &dist(&[1.0])).abs() < 1e-12);
        // A zero coefficient is dropped by the decomposition cutoff, so the
        // profile (1, 0) evaluates like the profile (1).
        assert!(schmidt_profile_value(&svn, &dist(&[1.0, 0.0])).abs() < 1e-12);
        assert!(schmidt_profile_value(&gamma, &dist(&[1.0, 0.0])).abs() < 1e-12);
    }

    #[test]
    fn svn_depends_only_on_the_schmidt_coefficient_multiset() {
        let m = svn_measure();
        let profile = dist(&[0.6, 0.3, 0.1]);
        let base = schmidt_profile_value(&m, &profile);
        for sample in 0..50 {
            let mut rng = seeded_rng(3400 + sample);
            // Rotate the canonical carrier by local unitaries: the Schmidt
            // coefficients are untouched, so the value must be too.
            let mut amplitudes = vec![Complex64::ZERO; 9];
            for (i, &p) in profile.values().iter().enumerate() {
                amplitudes[i * 3 + i] = c(p.sqrt(), 0.0);
            }
            let carrier = StateVector::new(3, 3, amplitudes).unwrap();
            let u = random_local_unitary(3, &mut rng);
            let v = random_local_unitary(3, &mut rng);
            let rotated = carrier.apply_local(&u, &v).unwrap();
            assert!((m.evaluate_pure(&rotated) - base).abs() < 1e-9);
        }
    }

    #[test]
    fn built_in_mixed_evaluators_agree_with_pure_values_on_projectors() {
        for m in [svn_measure(), svn_scaled_measure(1.7).unwrap()] {
            for sample in 0..200 {
                let mut rng = seeded_rng(7000 + sample);
                let d1 = 2 + (sample as usize % 2);
                let d2 = 2 + ((sample as usize / 2) % 2);
                let psi = random_pure_state(d1, d2, &mut rng).unwrap();
                let pure = m.evaluate_pure(&psi);
                let mixed = m.evaluate_mixed(&psi.projector()).unwrap();
                assert!(
                    (pure - mixed).abs() < 1e-9,
                    "{}: pure {pure} vs projector {mixed}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn gamma_and_alias_have_no_mixed_evaluator() {
        assert!(!gamma_measure().has_mixed_evaluator());
        assert!(!shannon_schmidt_measure().has_mixed_evaluator());
        assert!(svn_measure().has_mixed_evaluator());
    }

    #[test]
    fn shannon_schmidt_is_an_alias_of_svn_on_pure_states() {
        let alias = shannon_schmidt_measure();
        let svn = svn_measure();
        for sample in 0..20 {
            let mut rng = seeded_rng(880 + sample);
            let psi = random_pure_state(2, 3, &mut rng).unwrap();
            assert_eq!(alias.evaluate_pure(&psi), svn.evaluate_pure(&psi));
        }
    }

    #[test]
    fn registry_lists_builtins_and_resolves_names() {
        let registry = MeasureRegistry::with_builtins();
        assert_eq!(registry.names(), vec!["gamma", "shannon-schmidt", "svn"]);
        assert!(registry.get("svn").is_some());
        assert!(registry.get("svn-scaled:2.5").is_none());
        let scaled = registry.resolve("svn-scaled:2.5").unwrap();
        assert_eq!(scaled.scale_constant(), 2.5);
        assert!((scaled.evaluate_pure(&bell()) - 2.5 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn registry_rejects_bad_names() {
        let registry = MeasureRegistry::with_builtins();
        assert!(matches!(
            registry.resolve("entanglement-of-formation"),
            Err(MeasureError::UnknownName(_))
        ));
        assert!(matches!(
            registry.resolve("svn-scaled:two"),
            Err(MeasureError::UnparsableScale(_))
        ));
        assert!(matches!(
            registry.resolve("svn-scaled:"),
            Err(MeasureError::UnparsableScale(_))
        ));
        assert!(matches!(
            registry.resolve("svn-scaled:-3"),
            Err(MeasureError::BadScaleConstant(_))
        ));
    }

    #[test]
    fn registry_rejects_identically_zero_measures_and_duplicates() {
        let mut registry = MeasureRegistry::with_builtins();
        let zero = EntanglementMeasure::new("zero", 1.0, |_| 0.0).unwrap();
        assert!(matches!(
            registry.register(zero),
            Err(MeasureError::IdenticallyZero { .. })
        ));
        let duplicate = EntanglementMeasure::new("svn", 1.0, |_| 1.0).unwrap();
        assert!(matches!(
            registry.register(duplicate),
            Err(MeasureError::DuplicateName(_))
        ));
        // A nonzero constant functional is *not* identically zero; it is
        // rejected by the audits, not at registration.
        let constant = EntanglementMeasure::new("one", 1.0, |_| 1.0).unwrap();
        assert!(registry.register(constant).is_ok());
    }
}
