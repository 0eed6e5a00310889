//! Dense complex linear algebra for finite-dimensional bipartite systems.
//!
//! Everything in this module operates on [`ComplexMatrix`], a plain
//! row-major matrix of `Complex64` entries. The operations are the ones the
//! rest of the crate is built from: Kronecker products, partial traces over
//! either tensor factor, Hermitian eigensystems, and singular values.
//!
//! Matrices are kept dense and modest in size: the crate targets desk-scale
//! systems, with operators capped at dimension [`MAX_OPERATOR_DIM`] and
//! Kronecker results capped at [`MAX_KRON_ENTRIES`] entries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Largest supported dimension for square operators (density matrices,
/// Hermitian inputs to the eigensolver).
pub const MAX_OPERATOR_DIM: usize = 256;

/// Largest number of entries a Kronecker product may produce. Equal to
/// `MAX_OPERATOR_DIM²`, so products of two maximal operators are still
/// accepted while anything larger is refused before allocation.
pub const MAX_KRON_ENTRIES: usize = MAX_OPERATOR_DIM * MAX_OPERATOR_DIM;

/// Hermiticity deviations above this are treated as caller errors rather
/// than roundoff, and rejected. Deviations at or below it are symmetrized
/// away via `(H + H†)/2` before diagonalizing.
pub const HERMITICITY_REJECT: f64 = 1e-8;

/// Entries of an eigenvector (or singular vector) smaller than this in
/// modulus are ignored when choosing the phase-fixing pivot.
const PHASE_PIVOT_CUTOFF: f64 = 1e-12;

/// Errors from matrix construction and matrix operations.
#[derive(Debug, Error)]
pub enum LinalgError {
    /// The entry buffer does not match the requested shape.
    #[error("a {rows}x{cols} matrix needs {expected} entries, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    /// Matrices must have at least one row and one column.
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    /// An entry was NaN or infinite.
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    /// A square matrix was required.
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    /// The operand shapes are incompatible for the requested operation.
    #[error("incompatible shapes {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    /// A bipartite split `d1 * d2` does not match the matrix dimension.
    #[error("matrix dimension {dim} does not factor as {d1} x {d2}")]
    BadBipartiteSplit { dim: usize, d1: usize, d2: usize },
    /// The result would exceed the supported dense size.
    #[error("result with {entries} entries exceeds the supported maximum of {max}")]
    ResultTooLarge { entries: usize, max: usize },
    /// The matrix is too far from Hermitian to diagonalize meaningfully.
    #[error("matrix deviates from Hermiticity by {deviation:.3e}, above the {limit:.1e} limit")]
    NotHermitian { deviation: f64, limit: f64 },
}

/// Which tensor factor a partial trace integrates out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TracedSide {
    /// Trace out the first factor, leaving an operator on `H2`.
    First,
    /// Trace out the second factor, leaving an operator on `H1`.
    Second,
}

/// A dense complex matrix stored row-major.
///
/// Entry `(i, j)` of an `r x c` matrix lives at flat index `i * c + j`.
/// Construction validates the shape and rejects non-finite entries; all
/// subsequent operations may assume finite data.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFiniteEntry {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// An all-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// A diagonal matrix with the given real diagonal.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    /// A column vector wrapping the given entries.
    pub fn column(entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        let rows = entries.len();
        Self::new(rows, 1, entries)
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`. Panics if out of bounds, like slice indexing.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        self.data[i * self.cols + j]
    }

    /// Overwrites entry `(i, j)`. Panics if out of bounds.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        self.data[i * self.cols + j] = value;
    }

    /// The row-major entry slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        let out = (0..self.rows)
            .map(|i| v.iter().enumerate().map(|(j, x)| self.get(i, j) * x).sum())
            .collect();
        Ok(out)
    }

    /// Entrywise sum. Shapes must match.
    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise scaling by a real factor.
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Result<Complex64, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Largest modulus by which the matrix deviates from `M = M†`.
    /// Returns infinity for non-square matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`. Shapes must match.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "max_abs_diff requires equal shapes"
        );
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    fn from_na(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

/// Kronecker product `a ⊗ b`.
///
/// Entry `((i1, i2), (j1, j2))` of the result is `a[i1, j1] * b[i2, j2]`,
/// with the composite row index `i1 * b.rows() + i2` and likewise for
/// columns — the second factor varies fastest, matching the flat-index
/// convention used for state vectors. Results larger than
/// [`MAX_KRON_ENTRIES`] entries are refused.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or(LinalgError::ResultTooLarge {
            entries: usize::MAX,
            max: MAX_KRON_ENTRIES,
        })?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or(LinalgError::ResultTooLarge {
            entries: usize::MAX,
            max: MAX_KRON_ENTRIES,
        })?;
    let entries = rows.checked_mul(cols).ok_or(LinalgError::ResultTooLarge {
        entries: usize::MAX,
        max: MAX_KRON_ENTRIES,
    })?;
    if entries > MAX_KRON_ENTRIES {
        return Err(LinalgError::ResultTooLarge {
            entries,
            max: MAX_KRON_ENTRIES,
        });
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let f = a.get(i1, j1);
            if f == Complex64::ZERO {
                continue;
            }
            for i2 in 0..b.rows() {
                for j2 in 0..b.cols() {
                    out.set(i1 * b.rows() + i2, j1 * b.cols() + j2, f * b.get(i2, j2));
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace of an operator on `H1 ⊗ H2` over the chosen factor.
///
/// `m` must be square with dimension exactly `d1 * d2`, indexed row-major
/// (`|i>|j>` at flat index `i * d2 + j`). Tracing the second factor yields
/// the `d1 x d1` operator `T[i, i'] = Σ_j m[(i, j), (i', j)]`; tracing the
/// first yields the `d2 x d2` operator `T[j, j'] = Σ_i m[(i, j), (i, j')]`.
/// The full trace is preserved exactly (same summands, reassociated).
pub fn partial_trace(
    m: &ComplexMatrix,
    d1: usize,
    d2: usize,
    traced: TracedSide,
) -> Result<ComplexMatrix, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if d1 == 0 || d2 == 0 || m.rows() != d1 * d2 {
        return Err(LinalgError::BadBipartiteSplit {
            dim: m.rows(),
            d1,
            d2,
        });
    }
    match traced {
        TracedSide::Second => {
            let mut out = ComplexMatrix::zeros(d1, d1);
            for i in 0..d1 {
                for ip in 0..d1 {
                    let mut acc = Complex64::ZERO;
                    for j in 0..d2 {
                        acc += m.get(i * d2 + j, ip * d2 + j);
                    }
                    out.set(i, ip, acc);
                }
            }
            Ok(out)
        }
        TracedSide::First => {
            let mut out = ComplexMatrix::zeros(d2, d2);
            for j in 0..d2 {
                for jp in 0..d2 {
                    let mut acc = Complex64::ZERO;
                    for i in 0..d1 {
                        acc += m.get(i * d2 + j, i * d2 + jp);
                    }
                    out.set(j, jp, acc);
                }
            }
            Ok(out)
        }
    }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are real and sorted in descending order; column `k` of
/// `eigenvectors` is the unit eigenvector for `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as matrix columns, ordered to match.
    pub eigenvectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix.
///
/// Inputs whose Hermiticity deviation exceeds [`HERMITICITY_REJECT`] are
/// rejected; smaller deviations are removed by replacing the input with
/// `(H + H†)/2` before factoring. Eigenvalues come back sorted descending,
/// and each eigenvector's phase is fixed so that its first component of
/// significant modulus is real and positive. The eigenvalue sum matches the
/// trace to tight tolerance (an internal consistency check in debug builds).
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<HermitianEigensystem, LinalgError> {
    if h.rows() != h.cols() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let deviation = h.hermiticity_deviation();
    if deviation > HERMITICITY_REJECT {
        return Err(LinalgError::NotHermitian {
            deviation,
            limit: HERMITICITY_REJECT,
        });
    }
    // Symmetrize away roundoff so the factorization sees an exactly
    // Hermitian input.
    let symmetrized = h.add(&h.adjoint())?.scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(symmetrized.to_na());

    let n = h.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("Hermitian eigenvalues are finite")
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let phase = column_phase_fix(col.iter().copied());
        for i in 0..n {
            eigenvectors.set(i, dst, col[i] * phase);
        }
    }

    debug_assert!({
        let trace = symmetrized.trace().expect("square by construction").re;
        (eigenvalues.iter().sum::<f64>() - trace).abs() <= 1e-10 * (1.0 + trace.abs())
    });

    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values of an arbitrary matrix, sorted descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let svd = nalgebra::SVD::new(a.to_na(), false, false);
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|x, y| y.partial_cmp(x).expect("singular values are finite"));
    values
}

/// A full singular value decomposition `A = U Σ V†`.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    /// Left singular vectors as columns of an `m x r` matrix.
    pub u: ComplexMatrix,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// Adjoint of the right singular vectors, an `r x n` matrix.
    pub v_adjoint: ComplexMatrix,
}

/// Full SVD with singular values sorted descending.
///
/// Left singular vectors get the same phase convention as eigenvectors
/// (first significant component real and positive); the compensating phase
/// is pushed into `v_adjoint` so that `U Σ V†` still reconstructs `A`.
pub(crate) fn svd(a: &ComplexMatrix) -> Svd {
    let decomposition = nalgebra::SVD::new(a.to_na(), true, true);
    let u_na = decomposition.u.expect("svd requested u");
    let vt_na = decomposition.v_t.expect("svd requested v_t");
    let mut singular_values: Vec<f64> = decomposition.singular_values.iter().copied().collect();

    let r = singular_values.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| {
        singular_values[y]
            .partial_cmp(&singular_values[x])
            .expect("singular values are finite")
    });

    let mut u = ComplexMatrix::zeros(u_na.nrows(), r);
    let mut v_adjoint = ComplexMatrix::zeros(r, vt_na.ncols());
    let mut sorted_values = Vec::with_capacity(r);
    for (dst, &src) in order.iter().enumerate() {
        sorted_values.push(singular_values[src]);
        let col = u_na.column(src);
        let phase = column_phase_fix(col.iter().copied());
        for i in 0..u_na.nrows() {
            u.set(i, dst, col[i] * phase);
        }
        // A = Σ_k σ_k u_k v_k†; multiplying u_k by a unit phase requires the
        // matching row of V† to pick up the conjugate phase.
        let compensation = phase.conj();
        for j in 0..vt_na.ncols() {
            v_adjoint.set(dst, j, vt_na[(src, j)] * compensation);
        }
    }
    singular_values = sorted_values;

    Svd {
        u,
        singular_values,
        v_adjoint,
    }
}

/// Unit phase that makes the first significant component of a vector real
/// and positive when the vector is multiplied by it. Returns 1 for the zero
/// vector.
fn column_phase_fix(entries: impl Iterator<Item = Complex64>) -> Complex64 {
    for z in entries {
        if z.norm() > PHASE_PIVOT_CUTOFF {
            return z.conj() / z.norm();
        }
    }
    Complex64::ONE
}

/// Converts a `nalgebra` matrix into a [`ComplexMatrix`]. Used by the
/// random-unitary generator in `states`.
pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_na(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
        ComplexMatrix::new(rows, cols, entries.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut raw = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                raw.set(
                    i,
                    j,
                    c(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                );
            }
        }
        raw.add(&raw.adjoint()).unwrap().scale(0.5)
    }

    fn random_unit_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..len)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        v
    }

    fn projector(v: &[Complex64]) -> ComplexMatrix {
        let n = v.len();
        let mut p = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                p.set(i, j, v[i] * v[j].conj());
            }
        }
        p
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(k, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_of_column_vectors_stacks_row_major() {
        // |1> ⊗ |0> = |1 0>, the third basis vector of the composite space.
        let one = ComplexMatrix::column(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let zero = ComplexMatrix::column(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let k = kron(&one, &zero).unwrap();
        let expected =
            ComplexMatrix::column(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_of_diagonals_multiplies_diagonals() {
        let a = ComplexMatrix::from_real_diagonal(&[2.0, 3.0]);
        let b = ComplexMatrix::from_real_diagonal(&[5.0, 7.0]);
        let k = kron(&a, &b).unwrap();
        assert_eq!(
            k,
            ComplexMatrix::from_real_diagonal(&[10.0, 14.0, 15.0, 21.0])
        );
    }

    #[test]
    fn kron_is_associative_on_integer_matrices() {
        let a = real_matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let d = real_matrix(2, 2, &[5.0, 0.0, 0.0, 6.0]);
        let left = kron(&kron(&a, &b).unwrap(), &d).unwrap();
        let right = kron(&a, &kron(&b, &d).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn kron_refuses_oversized_results() {
        let a = ComplexMatrix::zeros(300, 300);
        let b = ComplexMatrix::zeros(2, 2);
        let err = kron(&a, &b).unwrap_err();
        assert!(matches!(err, LinalgError::ResultTooLarge { .. }));
    }

    #[test]
    fn partial_trace_of_maximally_mixed_state_is_maximally_mixed() {
        let m = ComplexMatrix::identity(4).scale(0.25);
        let reduced = partial_trace(&m, 2, 2, TracedSide::Second).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let bell = [
            c(SQRT_HALF, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(SQRT_HALF, 0.0),
        ];
        let p = projector(&bell);
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        for side in [TracedSide::First, TracedSide::Second] {
            let reduced = partial_trace(&p, 2, 2, side).unwrap();
            assert!(reduced.max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_sides_differ_on_product_states() {
        // |0>|1> reduces to |0><0| on the first factor and |1><1| on the second.
        let ket = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let p = projector(&ket);
        let first_left = partial_trace(&p, 2, 2, TracedSide::Second).unwrap();
        let second_left = partial_trace(&p, 2, 2, TracedSide::First).unwrap();
        assert!(first_left.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);
        assert!(second_left.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace_on_random_hermitian_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let d1 = 2 + (trial % 3);
            let d2 = 2 + ((trial / 3) % 3);
            let m = random_hermitian(d1 * d2, &mut rng);
            let full = m.trace().unwrap();
            for side in [TracedSide::First, TracedSide::Second] {
                let reduced = partial_trace(&m, d1, d2, side).unwrap();
                let partial = reduced.trace().unwrap();
                assert!((full - partial).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_spectra_of_pure_states_agree_as_multisets() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..50 {
            let d1 = 2 + (trial % 3);
            let d2 = 2 + ((trial / 3) % 3);
            let psi = random_unit_vector(d1 * d2, &mut rng);
            let p = projector(&psi);
            let mut spec1 =
                hermitian_eigensystem(&partial_trace(&p, d1, d2, TracedSide::Second).unwrap())
                    .unwrap()
                    .eigenvalues;
            let mut spec2 =
                hermitian_eigensystem(&partial_trace(&p, d1, d2, TracedSide::First).unwrap())
                    .unwrap()
                    .eigenvalues;
            // Compare on the smaller dimension; the larger side only adds zeros.
            spec1.truncate(d1.min(d2));
            spec2.truncate(d1.min(d2));
            for (a, b) in spec1.iter().zip(spec2.iter()) {
                assert!((a - b).abs() < 1e-10, "spectra differ: {a} vs {b}");
            }
        }
    }

    #[test]
    fn partial_trace_rejects_bad_splits() {
        let m = ComplexMatrix::identity(6);
        assert!(matches!(
            partial_trace(&m, 2, 2, TracedSide::First).unwrap_err(),
            LinalgError::BadBipartiteSplit { .. }
        ));
    }

    #[test]
    fn eigensystem_of_half_half_diagonal() {
        let eig = hermitian_eigensystem(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])).unwrap();
        assert!((eig.eigenvalues[0] - 0.5).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eigensystem_of_pauli_x() {
        let x = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eig = hermitian_eigensystem(&x).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        // Phase convention: first significant component real positive.
        for k in 0..2 {
            let pivot = eig.eigenvectors.get(0, k);
            assert!(pivot.im.abs() < 1e-12 && pivot.re > 0.0);
        }
    }

    #[test]
    fn eigensystem_reconstructs_random_hermitian_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..200 {
            let dim = 2 + (trial % 7);
            let h = random_hermitian(dim, &mut rng);
            let eig = hermitian_eigensystem(&h).unwrap();
            // Rebuild Σ_k λ_k v_k v_k† and compare entrywise.
            let mut rebuilt = ComplexMatrix::zeros(dim, dim);
            for k in 0..dim {
                for i in 0..dim {
                    for j in 0..dim {
                        let term = eig.eigenvalues[k]
                            * eig.eigenvectors.get(i, k)
                            * eig.eigenvectors.get(j, k).conj();
                        rebuilt.set(i, j, rebuilt.get(i, j) + term);
                    }
                }
            }
            assert!(rebuilt.max_abs_diff(&h) < 1e-10);
            // Descending order and trace consistency.
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
            let trace = h.trace().unwrap().re;
            assert!((eig.eigenvalues.iter().sum::<f64>() - trace).abs() < 1e-10);
        }
    }

    #[test]
    fn eigensystem_rejects_visibly_non_hermitian_input() {
        let m = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            hermitian_eigensystem(&m).unwrap_err(),
            LinalgError::NotHermitian { .. }
        ));
    }

    #[test]
    fn eigensystem_symmetrizes_tiny_deviations() {
        let mut m = real_matrix(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        m.set(0, 1, c(0.5 + 3e-9, 0.0));
        let eig = hermitian_eigensystem(&m).unwrap();
        assert_eq!(eig.eigenvalues.len(), 2);
        assert!((eig.eigenvalues.iter().sum::<f64>() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn singular_values_of_scaled_identity() {
        let m = ComplexMatrix::from_real_diagonal(&[SQRT_HALF, SQRT_HALF]);
        let sv = singular_values(&m);
        assert!((sv[0] - SQRT_HALF).abs() < 1e-14);
        assert!((sv[1] - SQRT_HALF).abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_rank_one_matrix() {
        let m = real_matrix(2, 2, &[SQRT_HALF, SQRT_HALF, 0.0, 0.0]);
        let sv = singular_values(&m);
        assert!((sv[0] - 1.0).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);
    }

    #[test]
    fn full_svd_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for trial in 0..100 {
            let rows = 2 + (trial % 4);
            let cols = 2 + ((trial / 4) % 4);
            let mut m = ComplexMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(
                        i,
                        j,
                        c(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                    );
                }
            }
            let f = svd(&m);
            let r = f.singular_values.len();
            let mut rebuilt = ComplexMatrix::zeros(rows, cols);
            for k in 0..r {
                for i in 0..rows {
                    for j in 0..cols {
                        let term = f.singular_values[k] * f.u.get(i, k) * f.v_adjoint.get(k, j);
                        rebuilt.set(i, j, rebuilt.get(i, j) + term);
                    }
                }
            }
            assert!(rebuilt.max_abs_diff(&m) < 1e-10);
            for w in f.singular_values.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn constructor_rejects_bad_shapes_and_entries() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![Complex64::ZERO; 3]).unwrap_err(),
            LinalgError::EntryCount { .. }
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 2, vec![]).unwrap_err(),
            LinalgError::EmptyShape { .. }
        ));
        let bad = vec![c(0.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            ComplexMatrix::new(2, 2, bad).unwrap_err(),
            LinalgError::NonFiniteEntry { row: 0, col: 1 }
        ));
    }

    proptest! {
        #[test]
        fn kron_trace_is_product_of_traces(
            a_diag in proptest::collection::vec(-5.0f64..5.0, 2..4),
            b_diag in proptest::collection::vec(-5.0f64..5.0, 2..4),
        ) {
            let a = ComplexMatrix::from_real_diagonal(&a_diag);
            let b = ComplexMatrix::from_real_diagonal(&b_diag);
            let k = kron(&a, &b).unwrap();
            let lhs = k.trace().unwrap().re;
            let rhs = a.trace().unwrap().re * b.trace().unwrap().re;
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn adjoint_is_involutive(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(3, &mut rng);
            prop_assert!(m.adjoint().adjoint().max_abs_diff(&m) == 0.0);
        }
    }
}
