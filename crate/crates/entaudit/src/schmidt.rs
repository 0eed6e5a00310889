//! Schmidt decompositions and the structure built on them.
//!
//! Every pure state on `H1 ⊗ H2` can be written `psi = Σ_i √p_i a_i ⊗ b_i`
//! with orthonormal local families and non-negative coefficients `p_i`
//! summing to 1. This module computes that form by SVD of the reshaped
//! amplitude matrix and derives from it:
//!
//! * the Schmidt rank (number of nonzero coefficients),
//! * the Schmidt subspace `M(psi)` spanned by the products `a_i ⊗ b_i`
//!   with nonzero coefficient,
//! * Schmidt orthogonality of two states (orthogonality of their Schmidt
//!   subspaces), and
//! * [`superpose`], which forms normalized combinations
//!   `λ_1 psi_1 + ··· + λ_m psi_m` of mutually Schmidt-orthogonal states —
//!   the construction behind the additivity postulate for entanglement
//!   measures.
//!
//! Coefficients at or below [`SCHMIDT_CUTOFF`] are treated as exact zeros:
//! float SVD cannot distinguish a true zero from roundoff, and the cutoff
//! sits far below every tolerance used by the audits (1e-8 to 1e-10).
//! Degenerate coefficients make the individual singular vectors non-unique,
//! so downstream code must only depend on the coefficients and the subspace,
//! never on which particular degenerate basis the SVD returned.

use crate::linalg::svd;
use crate::states::{AmplitudeDistribution, StateError, StateVector};
use num_complex::Complex64;
use thiserror::Error;

/// Schmidt coefficients `p_i` at or below this value are dropped as zeros.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// Modulus bound below which two spanning product vectors count as
/// orthogonal when testing Schmidt orthogonality.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

/// Permitted drift of the norm of a Schmidt-orthogonal superposition away
/// from the exact value 1 it has in exact arithmetic.
pub const SUPERPOSITION_NORM_TOL: f64 = 1e-10;

/// Errors from Schmidt-structure operations.
#[derive(Debug, Error)]
pub enum SchmidtError {
    /// The states live on different bipartite systems.
    #[error("dimension mismatch: ({left_d1}, {left_d2}) vs ({right_d1}, {right_d2})")]
    DimensionMismatch {
        left_d1: usize,
        left_d2: usize,
        right_d1: usize,
        right_d2: usize,
    },
    /// `superpose` needs one amplitude per state.
    #[error("{states} states but {amplitudes} amplitudes")]
    LengthMismatch { states: usize, amplitudes: usize },
    /// `superpose` needs at least one state.
    #[error("superposition needs at least one state")]
    EmptyStateList,
    /// Two inputs that must be Schmidt orthogonal are not.
    #[error(
        "states {first} and {second} are not Schmidt orthogonal \
         (spanning-product overlap {overlap:.3e} exceeds {tolerance:.1e})"
    )]
    NotSchmidtOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
        tolerance: f64,
    },
    /// The combination's norm drifted from 1 beyond tolerance, which for
    /// Schmidt-orthogonal inputs indicates numerical trouble upstream.
    #[error("superposition norm {norm} drifted from 1 beyond {tolerance:.1e}")]
    NormDrift { norm: f64, tolerance: f64 },
    /// State construction failed.
    #[error(transparent)]
    State(#[from] StateError),
}

/// The Schmidt form `psi = Σ_i √p_i a_i ⊗ b_i` of a pure state.
///
/// Coefficients are the probabilities `p_i = s_i²` (squared singular
/// values), sorted descending, each above [`SCHMIDT_CUTOFF`], and summing
/// to 1 within 1e-10. The bases are orthonormal within 1e-10.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    d1: usize,
    d2: usize,
    coefficients: Vec<f64>,
    left_basis: Vec<Vec<Complex64>>,
    right_basis: Vec<Vec<Complex64>>,
}

impl SchmidtForm {
    /// The retained coefficients `p_i`, descending.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The left vectors `a_i` in `H1`, ordered to match the coefficients.
    pub fn left_basis(&self) -> &[Vec<Complex64>] {
        &self.left_basis
    }

    /// The right vectors `b_i` in `H2`, ordered to match the coefficients.
    pub fn right_basis(&self) -> &[Vec<Complex64>] {
        &self.right_basis
    }

    /// Number of retained terms (the Schmidt rank).
    pub fn count(&self) -> usize {
        self.coefficients.len()
    }

    /// The factor dimensions `(d1, d2)` of the source state.
    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    /// Rebuilds `Σ_i √p_i a_i ⊗ b_i` as a state vector. Matches the source
    /// state within 1e-9 up to global phase.
    pub fn reconstruct(&self) -> Result<StateVector, StateError> {
        let mut amplitudes = vec![Complex64::ZERO; self.d1 * self.d2];
        for ((p, a), b) in self
            .coefficients
            .iter()
            .zip(self.left_basis.iter())
            .zip(self.right_basis.iter())
        {
            let s = p.sqrt();
            for i in 0..self.d1 {
                for j in 0..self.d2 {
                    amplitudes[i * self.d2 + j] += s * a[i] * b[j];
                }
            }
        }
        StateVector::new(self.d1, self.d2, amplitudes)
    }
}

/// The Schmidt subspace `M(psi)`: the span of the products `a_i ⊗ b_i`
/// over all nonzero Schmidt coefficients, represented by those spanning
/// pairs.
#[derive(Debug, Clone)]
pub struct SchmidtSubspace {
    d1: usize,
    d2: usize,
    pairs: Vec<(Vec<Complex64>, Vec<Complex64>)>,
}

impl SchmidtSubspace {
    /// The spanning pairs `(a_i, b_i)`; the products `a_i ⊗ b_i` are
    /// orthonormal in the composite space.
    pub fn pairs(&self) -> &[(Vec<Complex64>, Vec<Complex64>)] {
        &self.pairs
    }

    /// Dimension of the subspace.
    pub fn dimension(&self) -> usize {
        self.pairs.len()
    }

    /// The factor dimensions `(d1, d2)` of the ambient space.
    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }
}

/// Computes the Schmidt form of a state.
///
/// The amplitudes are reshaped to the `d1 x d2` matrix
/// `A[i, j] = <ij|psi>` and factored as `A = U Σ V†`. Then `p_i = s_i²`,
/// the left basis is the columns of `U`, and the right basis is the rows of
/// `V†` — the conjugated right singular vectors, which is what the
/// row-major reshape makes expand correctly against `|i>|j>`. Terms with
/// `p_i <= SCHMIDT_CUTOFF` are dropped.
pub fn schmidt_decompose(psi: &StateVector) -> SchmidtForm {
    let (d1, d2) = psi.dims();
    let factorization = svd(&psi.amplitude_matrix());
    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for (k, &s) in factorization.singular_values.iter().enumerate() {
        let p = s * s;
        if p <= SCHMIDT_CUTOFF {
            // Singular values arrive sorted descending, so the rest are
            // zeros as well.
            break;
        }
        coefficients.push(p);
        left_basis.push((0..d1).map(|i| factorization.u.get(i, k)).collect());
        right_basis.push((0..d2).map(|j| factorization.v_adjoint.get(k, j)).collect());
    }
    debug_assert!(!coefficients.is_empty(), "unit vectors have rank >= 1");
    SchmidtForm {
        d1,
        d2,
        coefficients,
        left_basis,
        right_basis,
    }
}

/// The Schmidt rank: the number of coefficients above the cutoff.
pub fn schmidt_rank(psi: &StateVector) -> usize {
    schmidt_decompose(psi).count()
}

/// The Schmidt subspace `M(psi)` of a state.
pub fn schmidt_subspace(psi: &StateVector) -> SchmidtSubspace {
    let form = schmidt_decompose(psi);
    let pairs = form.left_basis.into_iter().zip(form.right_basis).collect();
    SchmidtSubspace {
        d1: form.d1,
        d2: form.d2,
        pairs,
    }
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// The largest spanning-product overlap between `M(psi)` and `M(phi)`.
///
/// For product vectors the composite inner product factorizes,
/// `<a⊗b, a'⊗b'> = <a, a'> <b, b'>`, so each pairwise overlap costs
/// `O(d1 + d2)` instead of `O(d1 d2)`.
fn max_subspace_overlap(psi: &StateVector, phi: &StateVector) -> Result<f64, SchmidtError> {
    if psi.dims() != phi.dims() {
        let (left_d1, left_d2) = psi.dims();
        let (right_d1, right_d2) = phi.dims();
        return Err(SchmidtError::DimensionMismatch {
            left_d1,
            left_d2,
            right_d1,
            right_d2,
        });
    }
    let m_psi = schmidt_subspace(psi);
    let m_phi = schmidt_subspace(phi);
    let mut worst = 0.0_f64;
    for (a, b) in m_psi.pairs() {
        for (ap, bp) in m_phi.pairs() {
            let overlap = (dot(a, ap) * dot(b, bp)).norm();
            worst = worst.max(overlap);
        }
    }
    Ok(worst)
}

/// Whether two states are Schmidt orthogonal, i.e. whether their Schmidt
/// subspaces are orthogonal. Tested via all pairwise spanning-product inner
/// products against [`ORTHOGONALITY_TOL`]. Symmetric in its arguments.
pub fn schmidt_orthogonal(psi: &StateVector, phi: &StateVector) -> Result<bool, SchmidtError> {
    Ok(max_subspace_overlap(psi, phi)? < ORTHOGONALITY_TOL)
}

/// Forms the normalized superposition `λ_1 psi_1 + ··· + λ_m psi_m` of
/// mutually Schmidt-orthogonal states.
///
/// Schmidt orthogonality of the inputs is checked and enforced — audit code
/// relies on this guard — and it makes the combination's norm exactly 1 in
/// exact arithmetic, which is verified within [`SUPERPOSITION_NORM_TOL`]
/// before the usual state validation runs.
pub fn superpose(
    states: &[StateVector],
    amplitudes: &AmplitudeDistribution,
) -> Result<StateVector, SchmidtError> {
    if states.is_empty() {
        return Err(SchmidtError::EmptyStateList);
    }
    if states.len() != amplitudes.len() {
        return Err(SchmidtError::LengthMismatch {
            states: states.len(),
            amplitudes: amplitudes.len(),
        });
    }
    let (d1, d2) = states[0].dims();
    for pair_first in 0..states.len() {
        for pair_second in (pair_first + 1)..states.len() {
            let overlap = max_subspace_overlap(&states[pair_first], &states[pair_second])?;
            if overlap >= ORTHOGONALITY_TOL {
                return Err(SchmidtError::NotSchmidtOrthogonal {
                    first: pair_first,
                    second: pair_second,
                    overlap,
                    tolerance: ORTHOGONALITY_TOL,
                });
            }
        }
    }
    let mut combined = vec![Complex64::ZERO; d1 * d2];
    for (lambda, state) in amplitudes.values().iter().zip(states.iter()) {
        for (dst, amp) in combined.iter_mut().zip(state.amplitudes().iter()) {
            *dst += lambda * amp;
        }
    }
    let norm = combined.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > SUPERPOSITION_NORM_TOL {
        return Err(SchmidtError::NormDrift {
            norm,
            tolerance: SUPERPOSITION_NORM_TOL,
        });
    }
    Ok(StateVector::new(d1, d2, combined)?)
}
