//! Validated state types for bipartite systems.
//!
//! The constructors in this module are the only way to obtain the types, so
//! every value in circulation satisfies its invariants:
//!
//! * [`StateVector`] — a unit vector on `H1 ⊗ H2`, flat row-major indexing
//!   (`|i>|j>` at index `i * d2 + j`), norm 1 to within [`STATE_NORM_TOL`];
//! * [`DensityOperator`] — Hermitian, positive semidefinite, unit trace;
//! * [`LocalDensity`] — the same on a single factor, used to assemble
//!   separable states;
//! * [`SeparableDecomposition`] — weights plus paired local factors,
//!   realized as an operator by [`build_separable`];
//! * [`ProbabilityDistribution`] / [`AmplitudeDistribution`] — normalized
//!   real and complex weight vectors.
//!
//! Randomized constructors draw pure states Haar-uniformly (normalized
//! complex Gaussians) and local unitaries Haar-uniformly (QR of a complex
//! Gaussian matrix with the phase ambiguity fixed). All of them accept any
//! `rand::Rng`; the `*_seeded` helpers fix the generator to ChaCha8 so a
//! `u64` seed reproduces results exactly.

use crate::linalg::{
    self, kron, partial_trace, ComplexMatrix, LinalgError, TracedSide, MAX_OPERATOR_DIM,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported composite dimension `d1 * d2` for pure state vectors.
/// Large enough for canonical diagonal states on a (64, 64) system.
pub const MAX_STATE_DIM: usize = 4096;

/// Guaranteed bound on `|norm - 1|` after construction of a [`StateVector`].
pub const STATE_NORM_TOL: f64 = 1e-10;

/// Inputs whose norm deviates from 1 by more than this are rejected;
/// smaller deviations are silently renormalized.
pub const STATE_NORM_REJECT: f64 = 1e-6;

/// Validation tolerance for density operators: Hermiticity deviation and
/// `|trace - 1|` must both stay below this.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalues above this (slightly negative) floor count as non-negative.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Tolerance on the total mass of probability and amplitude distributions.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// Errors from state construction and state manipulation.
#[derive(Debug, Error)]
pub enum StateError {
    /// Both factor dimensions must be at least 1.
    #[error("dimensions must be positive, got d1={d1}, d2={d2}")]
    EmptyDimension { d1: usize, d2: usize },
    /// The composite dimension exceeds what this crate supports.
    #[error("composite dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    /// The amplitude buffer does not have `d1 * d2` entries.
    #[error("amplitude vector has {got} entries but d1*d2 = {expected}")]
    AmplitudeCount { expected: usize, got: usize },
    /// An amplitude was NaN or infinite.
    #[error("non-finite amplitude at index {index}")]
    NonFiniteAmplitude { index: usize },
    /// The vector's norm is too far from 1 to be fixed by renormalization.
    #[error("state norm {norm} deviates from 1 beyond the renormalization limit {limit:.1e}")]
    NormOutOfRange { norm: f64, limit: f64 },
    /// A density matrix failed the Hermiticity check.
    #[error(
        "density matrix deviates from Hermiticity by {deviation:.3e} (tolerance {tolerance:.1e})"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },
    /// A density matrix has an eigenvalue below the tolerance floor.
    #[error("density matrix has negative eigenvalue {value:.6e}")]
    NegativeEigenvalue { value: f64 },
    /// A density matrix's trace is not 1.
    #[error("density matrix has trace {trace:.12} instead of 1 (tolerance {tolerance:.1e})")]
    TraceNotOne { trace: f64, tolerance: f64 },
    /// An operator's shape does not match the declared dimensions.
    #[error("operator is {rows}x{cols} but a {expected}x{expected} matrix was expected")]
    OperatorShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    /// Two operands live on different bipartite systems.
    #[error("dimension mismatch: ({left_d1}, {left_d2}) vs ({right_d1}, {right_d2})")]
    DimensionMismatch {
        left_d1: usize,
        left_d2: usize,
        right_d1: usize,
        right_d2: usize,
    },
    /// A mixing weight must lie in `[0, 1]`.
    #[error("mixing weight {eta} lies outside [0, 1]")]
    WeightOutOfRange { eta: f64 },
    /// Embeddings can only grow the space.
    #[error("embedding target ({new_d1}, {new_d2}) is smaller than the state's ({d1}, {d2})")]
    EmbeddingShrinks {
        d1: usize,
        d2: usize,
        new_d1: usize,
        new_d2: usize,
    },
    /// A block embedding does not fit in the target space.
    #[error(
        "block of shape ({d1}, {d2}) at offset ({row_offset}, {col_offset}) \
         does not fit in ({new_d1}, {new_d2})"
    )]
    BlockOutOfRange {
        d1: usize,
        d2: usize,
        row_offset: usize,
        col_offset: usize,
        new_d1: usize,
        new_d2: usize,
    },
    /// Probabilities must be non-negative.
    #[error("probability {value:.6e} at index {index} is negative")]
    NegativeProbability { index: usize, value: f64 },
    /// Probabilities must sum to 1.
    #[error("probabilities sum to {sum:.15} instead of 1 (tolerance {tolerance:.1e})")]
    ProbabilitiesNotNormalized { sum: f64, tolerance: f64 },
    /// Squared amplitude moduli must sum to 1.
    #[error("squared amplitude moduli sum to {sum:.15} instead of 1 (tolerance {tolerance:.1e})")]
    AmplitudesNotNormalized { sum: f64, tolerance: f64 },
    /// Distributions must be non-empty.
    #[error("distribution must have at least one entry")]
    EmptyDistribution,
    /// A distribution entry was NaN or infinite.
    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },
    /// Weight vectors need positive total mass to normalize.
    #[error("weights must have positive total mass")]
    ZeroMass,
    /// A separable decomposition's parts have inconsistent lengths.
    #[error(
        "separable decomposition length mismatch: {weights} weights, \
         {left} left factors, {right} right factors"
    )]
    DecompositionLengths {
        weights: usize,
        left: usize,
        right: usize,
    },
    /// A factor in a separable decomposition has the wrong dimension.
    #[error("factor {index} has dimension {got}, expected {expected}")]
    FactorDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    /// An underlying matrix operation failed.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The fixed seeded generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A vector of independent standard complex Gaussians.
pub(crate) fn gaussian_complex_vec<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_finite(v: &[Complex64]) -> Result<(), StateError> {
    if let Some(index) = v
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(StateError::NonFiniteAmplitude { index });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pure states
// ---------------------------------------------------------------------------

/// A normalized pure state on `H1 ⊗ H2`.
///
/// Amplitudes are stored flat and row-major: the coefficient of `|i>|j>`
/// sits at index `i * d2 + j`. Construction renormalizes inputs whose norm
/// is within [`STATE_NORM_REJECT`] of 1 and rejects anything farther out,
/// so a constructed state always has `|norm - 1| <= 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d1: usize,
    d2: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds and validates a pure state from flat amplitudes.
    pub fn new(d1: usize, d2: usize, amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        let dim = checked_state_dim(d1, d2, MAX_STATE_DIM)?;
        if amplitudes.len() != dim {
            return Err(StateError::AmplitudeCount {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        check_finite(&amplitudes)?;
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_NORM_REJECT {
            return Err(StateError::NormOutOfRange {
                norm,
                limit: STATE_NORM_REJECT,
            });
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self { d1, d2, amplitudes })
    }

    /// Builds the product state `a ⊗ b` from local vectors, normalizing the
    /// factors first. Errors if either factor is (numerically) zero or the
    /// composite dimension is unsupported.
    pub fn product(a: &[Complex64], b: &[Complex64]) -> Result<Self, StateError> {
        check_finite(a)?;
        check_finite(b)?;
        let (na, nb) = (vector_norm(a), vector_norm(b));
        if na == 0.0 || nb == 0.0 {
            return Err(StateError::NormOutOfRange {
                norm: 0.0,
                limit: STATE_NORM_REJECT,
            });
        }
        let dim = checked_state_dim(a.len(), b.len(), MAX_STATE_DIM)?;
        let mut amplitudes = Vec::with_capacity(dim);
        for x in a {
            for y in b {
                amplitudes.push((x / na) * (y / nb));
            }
        }
        Self::new(a.len(), b.len(), amplitudes)
    }

    /// The factor dimensions `(d1, d2)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    /// The flat amplitude slice.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Euclidean norm (1 to within [`STATE_NORM_TOL`] by construction).
    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// Inner product `<self|other>`. Panics if the dimensions differ.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(
            (self.d1, self.d2),
            (other.d1, other.d2),
            "inner product requires matching dimensions"
        );
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The amplitudes reshaped into the `d1 x d2` coefficient matrix
    /// `A[i, j] = <ij|psi>`.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.d1, self.d2, self.amplitudes.clone())
            .expect("state amplitudes are validated")
    }

    /// The rank-one projector `|psi><psi|` as a density operator.
    ///
    /// Density operators are capped at dimension [`MAX_OPERATOR_DIM`];
    /// calling this on a larger pure state panics. States that large appear
    /// only as Schmidt-profile carriers, which are never projected.
    pub fn projector(&self) -> DensityOperator {
        let dim = self.d1 * self.d2;
        assert!(
            dim <= MAX_OPERATOR_DIM,
            "projector of a dimension-{dim} state exceeds the operator cap {MAX_OPERATOR_DIM}"
        );
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                matrix.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        DensityOperator::new_unchecked(self.d1, self.d2, matrix)
    }

    /// Applies local operators `u ⊗ v`. `u` must be `d1 x d1` and `v`
    /// `d2 x d2`; the result is renormalized through the usual constructor,
    /// so passing visibly non-unitary operators fails the norm check.
    pub fn apply_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self, StateError> {
        check_local_operator(u, self.d1)?;
        check_local_operator(v, self.d2)?;
        let mut out = vec![Complex64::ZERO; self.amplitudes.len()];
        // (u ⊗ v) psi, contracted without forming the Kronecker product.
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                let mut acc = Complex64::ZERO;
                for k in 0..self.d1 {
                    let uik = u.get(i, k);
                    if uik == Complex64::ZERO {
                        continue;
                    }
                    for l in 0..self.d2 {
                        acc += uik * v.get(j, l) * self.amplitudes[k * self.d2 + l];
                    }
                }
                out[i * self.d2 + j] = acc;
            }
        }
        Self::new(self.d1, self.d2, out)
    }

    /// Embeds the state into a larger system `(new_d1, new_d2)` by
    /// zero-padding: basis vector `|i>|j>` maps to `|i>|j>` of the larger
    /// space. Errors if either target dimension is smaller than the current
    /// one.
    pub fn embed(&self, new_d1: usize, new_d2: usize) -> Result<Self, StateError> {
        if new_d1 < self.d1 || new_d2 < self.d2 {
            return Err(StateError::EmbeddingShrinks {
                d1: self.d1,
                d2: self.d2,
                new_d1,
                new_d2,
            });
        }
        self.embed_at(new_d1, new_d2, 0, 0)
    }

    /// Embeds the state into `(new_d1, new_d2)` with its local bases offset
    /// by `(row_offset, col_offset)`: `|i>|j>` maps to
    /// `|i + row_offset>|j + col_offset>`. Used to place states on disjoint
    /// local subspaces of a common carrier.
    pub fn embed_at(
        &self,
        new_d1: usize,
        new_d2: usize,
        row_offset: usize,
        col_offset: usize,
    ) -> Result<Self, StateError> {
        if row_offset + self.d1 > new_d1 || col_offset + self.d2 > new_d2 {
            return Err(StateError::BlockOutOfRange {
                d1: self.d1,
                d2: self.d2,
                row_offset,
                col_offset,
                new_d1,
                new_d2,
            });
        }
        let dim = checked_state_dim(new_d1, new_d2, MAX_STATE_DIM)?;
        let mut amplitudes = vec![Complex64::ZERO; dim];
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                amplitudes[(i + row_offset) * new_d2 + (j + col_offset)] =
                    self.amplitudes[i * self.d2 + j];
            }
        }
        Self::new(new_d1, new_d2, amplitudes)
    }
}

fn checked_state_dim(d1: usize, d2: usize, max: usize) -> Result<usize, StateError> {
    if d1 == 0 || d2 == 0 {
        return Err(StateError::EmptyDimension { d1, d2 });
    }
    let dim = d1.saturating_mul(d2);
    if dim > max {
        return Err(StateError::DimensionTooLarge { dim, max });
    }
    Ok(dim)
}

fn check_local_operator(op: &ComplexMatrix, dim: usize) -> Result<(), StateError> {
    if op.rows() != dim || op.cols() != dim {
        return Err(StateError::OperatorShape {
            expected: dim,
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

/// A validated density operator on `H1 ⊗ H2`: Hermitian to within
/// [`DENSITY_TOL`], positive semidefinite to within [`EIGENVALUE_FLOOR`],
/// and unit trace to within [`DENSITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    d1: usize,
    d2: usize,
    matrix: ComplexMatrix,
}

/// Checks the density-operator invariants for a matrix on `(d1, d2)`.
///
/// The checks run in a fixed order and report the first failure: shape and
/// size, then Hermiticity, then the eigenvalue floor, then the trace. Each
/// failure maps to its own [`StateError`] variant so callers can tell what
/// was wrong with an input.
pub fn validate_density(d1: usize, d2: usize, matrix: &ComplexMatrix) -> Result<(), StateError> {
    let dim = checked_state_dim(d1, d2, MAX_OPERATOR_DIM)?;
    if matrix.rows() != dim || matrix.cols() != dim {
        return Err(StateError::OperatorShape {
            expected: dim,
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let deviation = matrix.hermiticity_deviation();
    if deviation > DENSITY_TOL {
        return Err(StateError::NotHermitian {
            deviation,
            tolerance: DENSITY_TOL,
        });
    }
    let eig =
        linalg::hermitian_eigensystem(matrix).expect("shape and Hermiticity were checked above");
    if let Some(&smallest) = eig
        .eigenvalues
        .iter()
        .find(|&&value| value < EIGENVALUE_FLOOR)
    {
        return Err(StateError::NegativeEigenvalue { value: smallest });
    }
    let trace = matrix.trace().expect("square by shape check").re;
    if (trace - 1.0).abs() > DENSITY_TOL {
        return Err(StateError::TraceNotOne {
            trace,
            tolerance: DENSITY_TOL,
        });
    }
    Ok(())
}

impl DensityOperator {
    /// Builds a density operator, running the full [`validate_density`]
    /// check on the input.
    pub fn new(d1: usize, d2: usize, matrix: ComplexMatrix) -> Result<Self, StateError> {
        validate_density(d1, d2, &matrix)?;
        Ok(Self { d1, d2, matrix })
    }

    /// Wraps a matrix that is valid by construction (projectors, convex
    /// mixtures of valid operators, assembled separable states). Debug
    /// builds re-run the full validation.
    pub(crate) fn new_unchecked(d1: usize, d2: usize, matrix: ComplexMatrix) -> Self {
        debug_assert!(
            validate_density(d1, d2, &matrix).is_ok(),
            "new_unchecked received an invalid density matrix"
        );
        Self { d1, d2, matrix }
    }

    /// The factor dimensions `(d1, d2)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The reduced operator left after tracing out the chosen factor.
    pub fn reduced(&self, traced: TracedSide) -> ComplexMatrix {
        partial_trace(&self.matrix, self.d1, self.d2, traced)
            .expect("dimensions are valid by construction")
    }

    /// Eigenvalues of the operator, sorted descending. Values within
    /// validation tolerance of 0 may come back as tiny negatives; entropy
    /// code clamps them.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigensystem(&self.matrix)
            .expect("valid density operators are Hermitian")
            .eigenvalues
    }

    /// Conjugates by a local pair: `(u ⊗ v) rho (u ⊗ v)†`. The operators
    /// must be `d1 x d1` and `d2 x d2` unitaries; unitarity itself is the
    /// caller's contract (the result is validated in debug builds).
    pub fn conjugate_local(
        &self,
        u: &ComplexMatrix,
        v: &ComplexMatrix,
    ) -> Result<Self, StateError> {
        check_local_operator(u, self.d1)?;
        check_local_operator(v, self.d2)?;
        let w = kron(u, v)?;
        let conjugated = w.matmul(&self.matrix)?.matmul(&w.adjoint())?;
        Ok(Self::new_unchecked(self.d1, self.d2, conjugated))
    }

    /// Embeds the operator into a larger system `(new_d1, new_d2)` by
    /// zero-padding, the mixed-state counterpart of [`StateVector::embed`].
    pub fn embed(&self, new_d1: usize, new_d2: usize) -> Result<Self, StateError> {
        if new_d1 < self.d1 || new_d2 < self.d2 {
            return Err(StateError::EmbeddingShrinks {
                d1: self.d1,
                d2: self.d2,
                new_d1,
                new_d2,
            });
        }
        let dim = checked_state_dim(new_d1, new_d2, MAX_OPERATOR_DIM)?;
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        let flat = |i: usize, j: usize| i * new_d2 + j;
        for i1 in 0..self.d1 {
            for j1 in 0..self.d2 {
                for i2 in 0..self.d1 {
                    for j2 in 0..self.d2 {
                        matrix.set(
                            flat(i1, j1),
                            flat(i2, j2),
                            self.matrix.get(i1 * self.d2 + j1, i2 * self.d2 + j2),
                        );
                    }
                }
            }
        }
        Ok(Self::new_unchecked(new_d1, new_d2, matrix))
    }
}

/// The rank-one projector of a pure state; see [`StateVector::projector`].
pub fn projector(psi: &StateVector) -> DensityOperator {
    psi.projector()
}

/// Convex mixture `eta * sigma + (1 - eta) * tau` of two density operators
/// on the same system.
pub fn mix(
    sigma: &DensityOperator,
    tau: &DensityOperator,
    eta: f64,
) -> Result<DensityOperator, StateError> {
    if sigma.dims() != tau.dims() {
        return Err(StateError::DimensionMismatch {
            left_d1: sigma.d1,
            left_d2: sigma.d2,
            right_d1: tau.d1,
            right_d2: tau.d2,
        });
    }
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(StateError::WeightOutOfRange { eta });
    }
    let matrix = sigma.matrix.scale(eta).add(&tau.matrix.scale(1.0 - eta))?;
    Ok(DensityOperator::new_unchecked(sigma.d1, sigma.d2, matrix))
}

/// Embeds a pure state into a larger system; see [`StateVector::embed`].
pub fn embed_state(
    psi: &StateVector,
    new_d1: usize,
    new_d2: usize,
) -> Result<StateVector, StateError> {
    psi.embed(new_d1, new_d2)
}

// ---------------------------------------------------------------------------
// Local factors and separable states
// ---------------------------------------------------------------------------

/// A validated density operator on a single factor (`H1` or `H2` alone),
/// used as a building block for separable states.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDensity {
    dim: usize,
    matrix: ComplexMatrix,
}

impl LocalDensity {
    /// Builds and validates a local density operator. (Validation reuses
    /// the bipartite checker with a trivial second factor.)
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self, StateError> {
        validate_density(dim, 1, &matrix)?;
        Ok(Self { dim, matrix })
    }

    /// The rank-one local density `|v><v| / <v|v>`.
    pub fn from_pure(v: &[Complex64]) -> Result<Self, StateError> {
        check_finite(v)?;
        let norm = vector_norm(v);
        if norm == 0.0 {
            return Err(StateError::NormOutOfRange {
                norm: 0.0,
                limit: STATE_NORM_REJECT,
            });
        }
        let dim = v.len();
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                matrix.set(i, j, (v[i] / norm) * (v[j] / norm).conj());
            }
        }
        Self::new(dim, matrix)
    }

    /// A random local density of the given rank: a weighted mixture of
    /// `rank` Haar-random pure states.
    pub fn random<R: Rng + ?Sized>(
        dim: usize,
        rank: usize,
        rng: &mut R,
    ) -> Result<Self, StateError> {
        let rank = rank.clamp(1, dim);
        let weights = ProbabilityDistribution::random(rank, rng);
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for &w in weights.values() {
            let pure = Self::from_pure(&gaussian_complex_vec(dim, rng))?;
            matrix = matrix.add(&pure.matrix.scale(w))?;
        }
        Self::new(dim, matrix)
    }

    /// The factor dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// A separable decomposition `Σ_k w_k sigma_k ⊗ tau_k`: convex weights
/// paired with local factors on each side. Construction checks that the
/// three lists have equal positive length and homogeneous dimensions.
#[derive(Debug, Clone)]
pub struct SeparableDecomposition {
    weights: ProbabilityDistribution,
    left: Vec<LocalDensity>,
    right: Vec<LocalDensity>,
}

impl SeparableDecomposition {
    /// Builds and validates a separable decomposition.
    pub fn new(
        weights: ProbabilityDistribution,
        left: Vec<LocalDensity>,
        right: Vec<LocalDensity>,
    ) -> Result<Self, StateError> {
        if weights.len() != left.len() || weights.len() != right.len() || left.is_empty() {
            return Err(StateError::DecompositionLengths {
                weights: weights.len(),
                left: left.len(),
                right: right.len(),
            });
        }
        let d1 = left[0].dim();
        let d2 = right[0].dim();
        for (index, factor) in left.iter().enumerate() {
            if factor.dim() != d1 {
                return Err(StateError::FactorDimension {
                    index,
                    expected: d1,
                    got: factor.dim(),
                });
            }
        }
        for (index, factor) in right.iter().enumerate() {
            if factor.dim() != d2 {
                return Err(StateError::FactorDimension {
                    index,
                    expected: d2,
                    got: factor.dim(),
                });
            }
        }
        Ok(Self {
            weights,
            left,
            right,
        })
    }

    /// A random decomposition with the given number of terms, each term a
    /// product of random local densities of rank 1 or 2.
    pub fn random<R: Rng + ?Sized>(
        d1: usize,
        d2: usize,
        terms: usize,
        rng: &mut R,
    ) -> Result<Self, StateError> {
        let terms = terms.max(1);
        let weights = ProbabilityDistribution::random(terms, rng);
        let mut left = Vec::with_capacity(terms);
        let mut right = Vec::with_capacity(terms);
        for _ in 0..terms {
            left.push(LocalDensity::random(d1, 1 + rng.random_range(0..2), rng)?);
            right.push(LocalDensity::random(d2, 1 + rng.random_range(0..2), rng)?);
        }
        Self::new(weights, left, right)
    }

    /// The convex weights.
    pub fn weights(&self) -> &ProbabilityDistribution {
        &self.weights
    }

    /// The left (first-factor) densities.
    pub fn left(&self) -> &[LocalDensity] {
        &self.left
    }

    /// The right (second-factor) densities.
    pub fn right(&self) -> &[LocalDensity] {
        &self.right
    }

    /// The factor dimensions `(d1, d2)` of the assembled state.
    pub fn dims(&self) -> (usize, usize) {
        (self.left[0].dim(), self.right[0].dim())
    }
}

/// Assembles a separable decomposition into the density operator
/// `Σ_k w_k sigma_k ⊗ tau_k`.
pub fn build_separable(decomp: &SeparableDecomposition) -> Result<DensityOperator, StateError> {
    let (d1, d2) = decomp.dims();
    let dim = checked_state_dim(d1, d2, MAX_OPERATOR_DIM)?;
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    for ((&w, l), r) in decomp
        .weights
        .values()
        .iter()
        .zip(decomp.left.iter())
        .zip(decomp.right.iter())
    {
        let term = kron(l.matrix(), r.matrix())?;
        matrix = matrix.add(&term.scale(w))?;
    }
    Ok(DensityOperator::new_unchecked(d1, d2, matrix))
}

// ---------------------------------------------------------------------------
// Random sampling
// ---------------------------------------------------------------------------

/// A Haar-random pure state on `(d1, d2)`: independent standard complex
/// Gaussian amplitudes, normalized. Dimensions are capped at
/// [`MAX_OPERATOR_DIM`] so every sampled state can also be projected.
pub fn random_pure_state<R: Rng + ?Sized>(
    d1: usize,
    d2: usize,
    rng: &mut R,
) -> Result<StateVector, StateError> {
    let dim = checked_state_dim(d1, d2, MAX_OPERATOR_DIM)?;
    loop {
        let raw = gaussian_complex_vec(dim, rng);
        let norm = vector_norm(&raw);
        // A zero draw has probability zero; guard against it anyway.
        if norm > 1e-12 {
            let amplitudes = raw.into_iter().map(|z| z / norm).collect();
            return StateVector::new(d1, d2, amplitudes);
        }
    }
}

/// [`random_pure_state`] with the crate's fixed seeded generator.
pub fn random_pure_state_seeded(
    d1: usize,
    d2: usize,
    seed: u64,
) -> Result<StateVector, StateError> {
    random_pure_state(d1, d2, &mut seeded_rng(seed))
}

/// A Haar-random product state: independent Haar-random local factors.
pub fn random_product_state<R: Rng + ?Sized>(
    d1: usize,
    d2: usize,
    rng: &mut R,
) -> Result<StateVector, StateError> {
    checked_state_dim(d1, d2, MAX_OPERATOR_DIM)?;
    let a = gaussian_complex_vec(d1, rng);
    let b = gaussian_complex_vec(d2, rng);
    StateVector::product(&a, &b)
}

/// A Haar-random `dim x dim` unitary: QR factorization of a standard
/// complex Gaussian matrix, with the R-diagonal phases absorbed into Q so
/// the distribution is exactly Haar rather than QR-convention-dependent.
pub fn random_local_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(
        (1..=MAX_OPERATOR_DIM).contains(&dim),
        "unitary dimension {dim} out of range"
    );
    let raw = nalgebra::DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = raw.qr();
    let q = qr.q();
    let r = qr.r();
    let mut unitary = linalg::from_nalgebra(&q);
    // Column k of Q picks up the phase of R[k, k].
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::ONE
        };
        for i in 0..dim {
            unitary.set(i, k, unitary.get(i, k) * phase);
        }
    }
    unitary
}

/// [`random_local_unitary`] with the crate's fixed seeded generator.
pub fn random_local_unitary_seeded(dim: usize, seed: u64) -> ComplexMatrix {
    random_local_unitary(dim, &mut seeded_rng(seed))
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

/// A probability distribution: non-negative reals summing to 1 to within
/// [`DISTRIBUTION_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    values: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Validates an already-normalized distribution.
    pub fn new(values: Vec<f64>) -> Result<Self, StateError> {
        if values.is_empty() {
            return Err(StateError::EmptyDistribution);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(StateError::NonFiniteValue { index });
        }
        if let Some(index) = values.iter().position(|&v| v < 0.0) {
            return Err(StateError::NegativeProbability {
                index,
                value: values[index],
            });
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(StateError::ProbabilitiesNotNormalized {
                sum,
                tolerance: DISTRIBUTION_TOL,
            });
        }
        Ok(Self { values })
    }

    /// Normalizes non-negative weights with positive total mass.
    pub fn from_weights(raw: &[f64]) -> Result<Self, StateError> {
        if raw.is_empty() {
            return Err(StateError::EmptyDistribution);
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(StateError::NonFiniteValue { index });
        }
        if let Some(index) = raw.iter().position(|&v| v < 0.0) {
            return Err(StateError::NegativeProbability {
                index,
                value: raw[index],
            });
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(StateError::ZeroMass);
        }
        Self::new(raw.iter().map(|&v| v / sum).collect())
    }

    /// A uniformly random distribution on the simplex (normalized
    /// exponential draws, i.e. flat Dirichlet).
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        assert!(len >= 1, "distributions need at least one entry");
        let raw: Vec<f64> = (0..len)
            .map(|_| -(1.0 - rng.random_range(0.0..1.0_f64)).ln())
            .collect();
        Self::from_weights(&raw).expect("exponential draws are positive and finite")
    }

    /// The probability values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True if the distribution has a single outcome.
    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A complex amplitude vector with `Σ|λ_i|² = 1` to within
/// [`DISTRIBUTION_TOL`], used to weight superpositions.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeDistribution {
    values: Vec<Complex64>,
}

impl AmplitudeDistribution {
    /// Validates an already-normalized amplitude vector.
    pub fn new(values: Vec<Complex64>) -> Result<Self, StateError> {
        if values.is_empty() {
            return Err(StateError::EmptyDistribution);
        }
        if let Some(index) = values
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(StateError::NonFiniteValue { index });
        }
        let sum: f64 = values.iter().map(|z| z.norm_sqr()).sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(StateError::AmplitudesNotNormalized {
                sum,
                tolerance: DISTRIBUTION_TOL,
            });
        }
        Ok(Self { values })
    }

    /// Normalizes a nonzero complex weight vector.
    pub fn from_unnormalized(raw: &[Complex64]) -> Result<Self, StateError> {
        if raw.is_empty() {
            return Err(StateError::EmptyDistribution);
        }
        check_finite(raw).map_err(|_| StateError::NonFiniteValue {
            index: raw
                .iter()
                .position(|z| !z.re.is_finite() || !z.im.is_finite())
                .unwrap_or(0),
        })?;
        let norm = vector_norm(raw);
        if norm <= 0.0 {
            return Err(StateError::ZeroMass);
        }
        Self::new(raw.iter().map(|z| z / norm).collect())
    }

    /// A Haar-style random amplitude vector (normalized complex Gaussians).
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        assert!(len >= 1, "distributions need at least one entry");
        loop {
            if let Ok(dist) = Self::from_unnormalized(&gaussian_complex_vec(len, rng)) {
                return dist;
            }
        }
    }

    /// The amplitudes.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of amplitudes.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True if there is a single amplitude.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The induced probability distribution `p_i = |λ_i|²`.
    pub fn moduli_squared(&self) -> ProbabilityDistribution {
        let weights: Vec<f64> = self.values.iter().map(|z| z.norm_sqr()).collect();
        ProbabilityDistribution::from_weights(&weights)
            .expect("squared moduli of a normalized vector have unit mass")
    }
}

// ---------------------------------------------------------------------------
// Serialized state files
// ---------------------------------------------------------------------------

/// A bipartite state of either kind.
#[derive(Debug, Clone)]
pub enum State {
    /// A pure state vector.
    Pure(StateVector),
    /// A density operator.
    Mixed(DensityOperator),
}

impl State {
    /// The factor dimensions `(d1, d2)`.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            State::Pure(psi) => psi.dims(),
            State::Mixed(rho) => rho.dims(),
        }
    }

    /// `"pure"` or `"mixed"`, matching the serialized tag.
    pub fn kind(&self) -> &'static str {
        match self {
            State::Pure(_) => "pure",
            State::Mixed(_) => "mixed",
        }
    }
}

/// The on-disk JSON form of a state.
///
/// Complex numbers are `[re, im]` pairs. Pure states carry a flat
/// `amplitudes` array of length `d1 * d2`; mixed states carry a dense
/// row-major `matrix` of shape `(d1 * d2) x (d1 * d2)`:
///
/// ```json
/// {"kind": "pure", "d1": 2, "d2": 2,
///  "amplitudes": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    /// Serialized pure state.
    Pure {
        /// First factor dimension.
        d1: usize,
        /// Second factor dimension.
        d2: usize,
        /// Flat amplitudes as `[re, im]` pairs, row-major.
        amplitudes: Vec<[f64; 2]>,
    },
    /// Serialized density operator.
    Mixed {
        /// First factor dimension.
        d1: usize,
        /// Second factor dimension.
        d2: usize,
        /// Dense matrix rows; each entry is an `[re, im]` pair.
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

impl StateFile {
    /// Serializes a state.
    pub fn from_state(state: &State) -> Self {
        match state {
            State::Pure(psi) => {
                let (d1, d2) = psi.dims();
                StateFile::Pure {
                    d1,
                    d2,
                    amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
                }
            }
            State::Mixed(rho) => {
                let (d1, d2) = rho.dims();
                let m = rho.matrix();
                let matrix = (0..m.rows())
                    .map(|i| {
                        (0..m.cols())
                            .map(|j| [m.get(i, j).re, m.get(i, j).im])
                            .collect()
                    })
                    .collect();
                StateFile::Mixed { d1, d2, matrix }
            }
        }
    }

    /// Validates the payload back into a [`State`], running the full
    /// constructor checks.
    pub fn into_state(&self) -> Result<State, StateError> {
        match self {
            StateFile::Pure { d1, d2, amplitudes } => {
                let amps = amplitudes
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                Ok(State::Pure(StateVector::new(*d1, *d2, amps)?))
            }
            StateFile::Mixed { d1, d2, matrix } => {
                let dim = checked_state_dim(*d1, *d2, MAX_OPERATOR_DIM)?;
                let rows = matrix.len();
                let square = rows == dim && matrix.iter().all(|row| row.len() == dim);
                if !square {
                    return Err(StateError::OperatorShape {
                        expected: dim,
                        rows,
                        cols: matrix.first().map_or(0, |row| row.len()),
                    });
                }
                let data: Vec<Complex64> = matrix
                    .iter()
                    .flatten()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                let m = ComplexMatrix::new(dim, dim, data)?;
                Ok(State::Mixed(DensityOperator::new(*d1, *d2, m)?))
            }
        }
    }
}
