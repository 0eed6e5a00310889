//! Property tests for the load-bearing invariants: every generated input
//! routes through the library's own seeded constructors, so each case is
//! a valid state by construction and shrinking stays meaningful.

use entaudit::entropy::{recursion_gap, shannon_functional, svn_mixed, svn_pure, Base};
use entaudit::measures::{gamma_norm_pure, schmidt_profile_value, svn_measure};
use entaudit::schmidt::schmidt_decompose;
use entaudit::states::{
    random_product_state, random_pure_state, seeded_rng, ProbabilityDistribution,
};
use entaudit::TracedSide;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Schmidt coefficients of any pure state form a probability
    /// distribution with rank at most min(d1, d2).
    #[test]
    fn schmidt_coefficients_are_a_distribution(seed: u64, d1 in 2usize..=4, d2 in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let psi = random_pure_state(d1, d2, &mut rng).unwrap();
        let form = schmidt_decompose(&psi);
        let coefficients = form.coefficients();
        prop_assert!(coefficients.len() <= d1.min(d2));
        prop_assert!(coefficients.iter().all(|&p| p > 0.0));
        let total: f64 = coefficients.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "total {total}");
        // Sorted descending.
        prop_assert!(coefficients.windows(2).all(|w| w[0] >= w[1]));
    }

    /// For pure states the two one-sided reduced entropies agree — the
    /// asymmetry demonstrated for general mixed states cannot occur.
    #[test]
    fn pure_state_reductions_have_equal_entropy(seed: u64, d1 in 2usize..=3, d2 in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let psi = random_pure_state(d1, d2, &mut rng).unwrap();
        let rho = psi.projector();
        let first = svn_mixed(&rho, TracedSide::First, Base::Nat);
        let second = svn_mixed(&rho, TracedSide::Second, Base::Nat);
        prop_assert!((first - second).abs() < 1e-9, "{first} vs {second}");
        prop_assert!((first - svn_pure(&psi, Base::Nat)).abs() < 1e-9);
    }

    /// The cross norm of a pure state lies in [1, min(d1, d2)], and its
    /// measure vanishes exactly on product states.
    #[test]
    fn cross_norm_bounds_hold(seed: u64, d1 in 2usize..=4, d2 in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let psi = random_pure_state(d1, d2, &mut rng).unwrap();
        let g = gamma_norm_pure(&psi);
        prop_assert!(g >= 1.0 - 1e-9);
        prop_assert!(g <= d1.min(d2) as f64 + 1e-9);

        let product = random_product_state(d1, d2, &mut rng).unwrap();
        let g = gamma_norm_pure(&product);
        prop_assert!((g - 1.0).abs() < 1e-9);
    }

    /// Shannon's recursion identity holds for every distribution and
    /// split weight — the property that pins down the entropy uniquely.
    #[test]
    fn shannon_recursion_identity_holds(
        seed: u64,
        len in 2usize..=6,
        eta in 1e-6f64..=0.999999,
    ) {
        let mut rng = seeded_rng(seed);
        let p = ProbabilityDistribution::random(len, &mut rng);
        let check = recursion_gap(&shannon_functional(), &p, eta);
        prop_assert!(check.gap < 1e-9, "gap {}", check.gap);
    }

    /// The same identity expressed through the measure profile: splitting
    /// the last weight moves the value by exactly the weighted binary term.
    #[test]
    fn profile_split_identity_holds(
        seed: u64,
        len in 2usize..=5,
        eta in 1e-6f64..=0.999999,
    ) {
        let m = svn_measure();
        let mut rng = seeded_rng(seed);
        let p = ProbabilityDistribution::random(len, &mut rng);
        let last = *p.values().last().unwrap();
        let mut split = p.values().to_vec();
        split.pop();
        split.push(eta * last);
        split.push((1.0 - eta) * last);
        let split = ProbabilityDistribution::new(split).unwrap();
        let two_point = ProbabilityDistribution::new(vec![eta, 1.0 - eta]).unwrap();
        let lhs = schmidt_profile_value(&m, &split);
        let rhs = schmidt_profile_value(&m, &p) + last * schmidt_profile_value(&m, &two_point);
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    /// Embedding a state into larger factors changes neither the Schmidt
    /// coefficients nor the entropy.
    #[test]
    fn embedding_preserves_the_schmidt_profile(
        seed: u64,
        d1 in 2usize..=3,
        d2 in 2usize..=3,
        k in 1usize..=2,
    ) {
        let mut rng = seeded_rng(seed);
        let psi = random_pure_state(d1, d2, &mut rng).unwrap();
        let embedded = psi.embed(d1 + k, d2 + k).unwrap();
        let original = schmidt_decompose(&psi);
        let larger = schmidt_decompose(&embedded);
        prop_assert_eq!(original.coefficients().len(), larger.coefficients().len());
        for (a, b) in original.coefficients().iter().zip(larger.coefficients()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let d_entropy = (svn_pure(&psi, Base::Nat) - svn_pure(&embedded, Base::Nat)).abs();
        prop_assert!(d_entropy < 1e-9);
    }

    /// The 10-significant-digit display format parses back to the value
    /// within display precision, for magnitudes spanning the audit range.
    #[test]
    fn display_format_round_trips(value in -1e12f64..1e12) {
        let shown = entaudit::cli::format_significant(value);
        let parsed: f64 = shown.parse().unwrap();
        let tolerance = value.abs().max(1e-300) * 1e-9;
        prop_assert!(
            (parsed - value).abs() <= tolerance,
            "{value} printed as {shown}"
        );
    }
}
