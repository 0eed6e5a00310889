//! Bipartite entanglement measures, and numerical audits of the postulates
//! that pin them down.
//!
//! The crate works with finite-dimensional bipartite quantum systems
//! `H = H1 ⊗ H2`. It provides:
//!
//! * dense complex linear algebra tuned for this setting — Kronecker
//!   products, partial traces, Hermitian eigensystems, singular values
//!   ([`linalg`]);
//! * validated state types — pure state vectors, density operators,
//!   probability and amplitude distributions, separable decompositions
//!   ([`states`]);
//! * Schmidt decompositions and Schmidt-orthogonal superpositions
//!   ([`schmidt`]);
//! * Shannon and von Neumann entropies, plus a numerical audit of the
//!   Khinchin-style axioms that characterise Shannon entropy on probability
//!   distributions ([`entropy`]);
//! * a registry of candidate entanglement measures, including the reduced
//!   von Neumann entropy and a greatest-cross-norm functional ([`measures`]);
//! * seeded, reproducible audits that test a candidate measure against the
//!   postulates an entanglement measure must satisfy — continuity, local
//!   unitary invariance, embedding invariance, additivity over
//!   Schmidt-orthogonal superpositions, and their mixed-state analogues —
//!   and that estimate the scale constant relating any passing measure to
//!   the reduced von Neumann entropy ([`axioms`]);
//! * a command-line interface over all of the above ([`cli`]).
//!
//! # Quick start
//!
//! ```
//! use entaudit::states::StateVector;
//! use entaudit::schmidt::schmidt_decompose;
//! use entaudit::entropy::{svn_pure, Base};
//! use num_complex::Complex64;
//!
//! // The Bell state (|00> + |11>)/sqrt(2) on a 2x2 system.
//! let s = std::f64::consts::FRAC_1_SQRT_2;
//! let bell = StateVector::new(2, 2, vec![
//!     Complex64::new(s, 0.0),
//!     Complex64::ZERO,
//!     Complex64::ZERO,
//!     Complex64::new(s, 0.0),
//! ]).unwrap();
//!
//! let form = schmidt_decompose(&bell);
//! assert!((form.coefficients()[0] - 0.5).abs() < 1e-12);
//! assert!((svn_pure(&bell, Base::Nat) - std::f64::consts::LN_2).abs() < 1e-12);
//! ```
//!
//! # Conventions
//!
//! * Composite indices are row-major: basis vector `|i>|j>` of
//!   `H1 ⊗ H2` sits at flat index `i * d2 + j`.
//! * Entropies are reported in nats (natural logarithm) unless a display
//!   base is requested explicitly.
//! * Every randomized routine takes either an explicit RNG or a `u64` seed;
//!   seeded entry points use the ChaCha8 generator so that identical seeds
//!   reproduce identical results on every platform.

pub mod axioms;
pub mod cli;
pub mod entropy;
pub mod linalg;
pub mod measures;
pub mod report;
pub mod schmidt;
pub mod states;

pub use axioms::{demo, estimate_constant, ConstantEstimate, DemoKind};
pub use linalg::{ComplexMatrix, TracedSide};
pub use measures::{EntanglementMeasure, MeasureRegistry};
pub use report::{AxiomId, AxiomReport, Witness};
pub use states::{DensityOperator, ProbabilityDistribution, State, StateVector};
