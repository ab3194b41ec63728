//! Dense complex matrices and the spectral primitives used by the frame
//! machinery: adjoints, SVD, Hermitian eigendecompositions, spectral
//! functions, Schatten norms, and the trace inner product.
//!
//! Conventions: the inner product is conjugate-linear in the second slot,
//! `<x, y> = y^H x`, and `trace_inner(t, s) = tr(s^H t)` extends it to
//! matrices. Vectorization is column-major and `unvectorize` inverts it.

use nalgebra::{DMatrix, DVector};

use crate::error::{FrameError, Result};
use crate::Complex64;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_RTOL: f64 = 1e-10;
/// Relative threshold (against the top eigenvalue) below which an
/// eigenvalue counts as a singularity for spectral inverses.
pub const PD_RTOL: f64 = 1e-10;
/// Default relative threshold (against the top singular value) for rank
/// decisions in the pseudoinverse.
pub const RANK_RTOL: f64 = 1e-10;

/// Dense matrix over the complex field.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

/// Thin singular value decomposition with factors ordered so that
/// `singular_values` is non-increasing.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Hermitian eigendecomposition with eigenvalues in ascending order and
/// eigenvectors as the columns of a unitary matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Spectral functions applied through a Hermitian eigendecomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitianFn {
    Inverse,
    Sqrt,
    InvSqrt,
}

impl ComplexMatrix {
    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }

    /// Zero matrix of the given shape. Both dimensions must be positive.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self::from_inner(DMatrix::zeros(rows, cols))
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimensions must be positive");
        Self::from_inner(DMatrix::identity(n, n))
    }

    /// Standard basis column `e_k` of `C^n`.
    pub fn basis_vector(n: usize, k: usize) -> Self {
        assert!(k < n, "basis index {k} out of range for C^{n}");
        let mut m = DMatrix::zeros(n, 1);
        m[(k, 0)] = Complex64::new(1.0, 0.0);
        Self::from_inner(m)
    }

    /// Column vector from a slice of entries.
    pub fn column(entries: &[Complex64]) -> Self {
        assert!(!entries.is_empty(), "column vector must be non-empty");
        assert!(
            entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "column vector entries must be finite"
        );
        Self::from_inner(DMatrix::from_column_slice(entries.len(), 1, entries))
    }

    /// Matrix from row-major nested data. Rows must be non-empty, equal in
    /// length, and finite.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(FrameError::Dimension(
                "matrix must have at least one row and one column".into(),
            ));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(FrameError::Dimension("ragged rows in matrix data".into()));
        }
        let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
        let out = Self::from_inner(m);
        out.ensure_finite("matrix data")?;
        Ok(out)
    }

    /// Matrix with entries produced by `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self::from_inner(DMatrix::from_fn(rows, cols, f))
    }

    /// Square matrix with the given real diagonal.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty(), "diagonal must be non-empty");
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::from_inner(DMatrix::from_diagonal(&v))
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Single entry. Panics when out of range.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    /// Row-major nested copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }

    pub(crate) fn ensure_finite(&self, label: &'static str) -> Result<()> {
        if self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(FrameError::NonFinite(label))
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_inner(self.inner.adjoint())
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_inner(&self.inner * c)
    }

    /// Real scalar multiple.
    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Sum of diagonal entries. Panics on non-square input.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows()).map(|i| self.inner[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Frobenius distance `||self - other||_F`. Panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "distance requires equal shapes");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Deviation from Hermitian symmetry, `||M - M^H||_F`.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square(), "hermitian deviation requires a square matrix");
        self.distance(&self.adjoint())
    }

    /// Hermitian part `(M + M^H) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_inner((&self.inner + self.inner.adjoint()).scale(0.5))
    }

    /// Trace inner product `tr(other^H * self)`, conjugate-linear in
    /// `other`. On column vectors this is the standard `<x, y> = y^H x`.
    pub fn trace_inner(&self, other: &Self) -> Result<Complex64> {
        if self.shape() != other.shape() {
            return Err(FrameError::Dimension(format!(
                "trace inner product needs equal shapes, got {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(self
            .inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| b.conj() * a)
            .sum())
    }

    /// Column-major stacking of the entries into an `rc x 1` vector.
    pub fn vectorized(&self) -> Self {
        Self::from_inner(DMatrix::from_column_slice(
            self.rows() * self.cols(),
            1,
            self.inner.as_slice(),
        ))
    }

    /// Inverse of [`ComplexMatrix::vectorized`] for the given target shape.
    pub fn unvectorize(vec: &Self, rows: usize, cols: usize) -> Result<Self> {
        if vec.cols() != 1 || vec.rows() != rows * cols {
            return Err(FrameError::Dimension(format!(
                "cannot reshape {}x{} into {rows}x{cols}",
                vec.rows(),
                vec.cols()
            )));
        }
        Ok(Self::from_inner(DMatrix::from_column_slice(
            rows,
            cols,
            vec.inner.as_slice(),
        )))
    }

    /// Thin SVD with singular values sorted in non-increasing order.
    pub fn svd(&self) -> Result<SvdResult> {
        let svd = self
            .inner
            .clone()
            .try_svd(true, true, f64::EPSILON, 0)
            .ok_or(FrameError::DecompositionFailed("svd did not converge"))?;
        let u = svd.u.ok_or(FrameError::DecompositionFailed("svd produced no U factor"))?;
        let v_t = svd
            .v_t
            .ok_or(FrameError::DecompositionFailed("svd produced no V factor"))?;
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .expect("singular values are finite")
        });
        let values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let u = u.select_columns(&order);
        let v = v_t.adjoint().select_columns(&order);
        Ok(SvdResult {
            u: Self::from_inner(u),
            singular_values: values,
            v: Self::from_inner(v),
        })
    }

    /// Singular values only, sorted in non-increasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let svd = self
            .inner
            .clone()
            .try_svd(false, false, f64::EPSILON, 0)
            .ok_or(FrameError::DecompositionFailed("svd did not converge"))?;
        let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
        values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        Ok(values)
    }

    /// Schatten p-norm for `p >= 1`; `p = +inf` gives the operator norm.
    /// Always evaluated through the singular values.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(FrameError::InvalidParameter(format!(
                "schatten norm requires p >= 1 or p = inf, got {p}"
            )));
        }
        let values = self.singular_values()?;
        if p.is_infinite() {
            return Ok(values.first().copied().unwrap_or(0.0));
        }
        Ok(values.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
    }

    /// Eigendecomposition of a Hermitian matrix. The input may deviate from
    /// exact symmetry by rounding noise; it is rejected past
    /// `HERMITICITY_RTOL * max(1, ||M||_F)` and symmetrized below it.
    pub fn hermitian_eig(&self) -> Result<HermitianEig> {
        if !self.is_square() {
            return Err(FrameError::Dimension(
                "hermitian eigendecomposition requires a square matrix".into(),
            ));
        }
        let deviation = self.hermitian_deviation();
        let tolerance = HERMITICITY_RTOL * self.frobenius_norm().max(1.0);
        if deviation > tolerance {
            return Err(FrameError::NotHermitian { deviation, tolerance });
        }
        let eig = self
            .symmetrized()
            .inner
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 0)
            .ok_or(FrameError::DecompositionFailed(
                "hermitian eigendecomposition did not converge",
            ))?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("eigenvalues are finite")
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = eig.eigenvectors.select_columns(&order);
        Ok(HermitianEig {
            eigenvalues,
            eigenvectors: Self::from_inner(eigenvectors),
        })
    }

    /// Spectral function of a Hermitian matrix. `Inverse` and `InvSqrt`
    /// reject eigenvalues at or below `PD_RTOL * lambda_max`; `Sqrt` clamps
    /// rounding-level negative eigenvalues to zero and rejects anything
    /// more negative. The result is exactly Hermitian.
    pub fn hermitian_fn(&self, f: HermitianFn) -> Result<Self> {
        let eig = self.hermitian_eig()?;
        let lambda_min = eig.min_eigenvalue();
        let lambda_max = eig.max_eigenvalue();
        let threshold = PD_RTOL * lambda_max;
        match f {
            HermitianFn::Inverse | HermitianFn::InvSqrt => {
                if lambda_min <= threshold {
                    return Err(FrameError::Singular {
                        eigenvalue: lambda_min,
                        threshold,
                    });
                }
            }
            HermitianFn::Sqrt => {
                if lambda_min < -threshold.abs() {
                    return Err(FrameError::Singular {
                        eigenvalue: lambda_min,
                        threshold: -threshold.abs(),
                    });
                }
            }
        }
        let mapped: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&l| match f {
                HermitianFn::Inverse => 1.0 / l,
                HermitianFn::Sqrt => l.max(0.0).sqrt(),
                HermitianFn::InvSqrt => 1.0 / l.sqrt(),
            })
            .collect();
        let q = &eig.eigenvectors;
        let d = Self::from_real_diagonal(&mapped);
        Ok((&(q * &d) * &q.adjoint()).symmetrized())
    }

    /// Moore-Penrose pseudoinverse. Singular values at or below the rank
    /// threshold (default `RANK_RTOL * s_1`) are treated as zero.
    pub fn pseudoinverse(&self, rank_threshold: Option<f64>) -> Result<Self> {
        let svd = self.svd()?;
        let s1 = svd.singular_values.first().copied().unwrap_or(0.0);
        let threshold = match rank_threshold {
            Some(t) if t > 0.0 && t.is_finite() => t,
            Some(t) => {
                return Err(FrameError::InvalidParameter(format!(
                    "rank threshold must be positive and finite, got {t}"
                )))
            }
            None => RANK_RTOL * s1,
        };
        let inverted: Vec<f64> = svd
            .singular_values
            .iter()
            .map(|&s| if s > threshold { 1.0 / s } else { 0.0 })
            .collect();
        let d = Self::from_real_diagonal(&inverted);
        Ok(&(&svd.v * &d) * &svd.u.adjoint())
    }
}

impl SvdResult {
    /// Number of singular values strictly above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > threshold).count()
    }

    /// `U * diag(s) * V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diagonal(&self.singular_values);
        &(&self.u * &d) * &self.v.adjoint()
    }
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.first().expect("decomposition is non-empty")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("decomposition is non-empty")
    }

    /// `Q * diag(lambda) * Q^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        &(&self.eigenvectors * &d) * &self.eigenvectors.adjoint()
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix addition shape mismatch");
        ComplexMatrix::from_inner(&self.inner + &rhs.inner)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix subtraction shape mismatch");
        ComplexMatrix::from_inner(&self.inner - &rhs.inner)
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_inner(-&self.inner)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "matrix product shape mismatch: {:?} * {:?}",
            self.shape(),
            rhs.shape()
        );
        ComplexMatrix::from_inner(&self.inner * &rhs.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat(rows: &[&[Complex64]]) -> ComplexMatrix {
        ComplexMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn adjoint_of_one_by_two() {
        let m = mat(&[&[c(1.0, 2.0), c(0.0, -1.0)]]);
        let a = m.adjoint();
        assert_eq!(a.shape(), (2, 1));
        assert_eq!(a.entry(0, 0), c(1.0, -2.0));
        assert_eq!(a.entry(1, 0), c(0.0, 1.0));
    }

    #[test]
    fn adjoint_is_involutive() {
        let m = mat(&[&[c(1.0, 2.0), c(3.0, -4.0)], &[c(0.5, 0.0), c(0.0, 1.0)]]);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn trace_inner_matches_hand_value() {
        // [[1, i], [0, 2]] paired with itself: 1 + 1 + 0 + 4 = 6.
        let m = mat(&[&[c(1.0, 0.0), c(0.0, 1.0)], &[c(0.0, 0.0), c(2.0, 0.0)]]);
        let ip = m.trace_inner(&m).unwrap();
        assert!((ip - c(6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_inner_is_conjugate_linear_in_second_slot() {
        let x = ComplexMatrix::column(&[c(1.0, 1.0), c(0.0, 2.0)]);
        let y = ComplexMatrix::column(&[c(0.0, 1.0), c(3.0, 0.0)]);
        // <x, y> = y^H x = conj(i)*(1+i) + 3*(2i) = (1 - i) + 6i... careful:
        // conj(i)(1+i) = -i(1+i) = 1 - i; conj(3)(2i) = 6i; total 1 + 5i.
        let ip = x.trace_inner(&y).unwrap();
        assert!((ip - c(1.0, 5.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_inner_rejects_shape_mismatch() {
        let a = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.trace_inner(&b), Err(FrameError::Dimension(_))));
    }

    #[test]
    fn trace_inner_of_self_is_squared_frobenius() {
        let m = mat(&[&[c(1.0, -2.0), c(0.0, 3.0)], &[c(4.0, 0.5), c(-1.0, 1.0)]]);
        let ip = m.trace_inner(&m).unwrap();
        assert!((ip.re - m.frobenius_norm_sq()).abs() < 1e-12);
        assert!(ip.im.abs() < 1e-15);
    }

    #[test]
    fn svd_of_diagonal_matrix_sorts_descending() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, 7.0, 1.0]);
        let svd = m.svd().unwrap();
        assert_eq!(svd.singular_values.len(), 3);
        assert!((svd.singular_values[0] - 7.0).abs() < 1e-12);
        assert!((svd.singular_values[1] - 3.0).abs() < 1e-12);
        assert!((svd.singular_values[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_input() {
        let m = mat(&[
            &[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1.0)],
            &[c(3.0, 0.0), c(0.0, -2.0), c(1.0, 1.0)],
        ]);
        let svd = m.svd().unwrap();
        assert!(svd.reconstruct().distance(&m) < 1e-12 * m.frobenius_norm());
    }

    #[test]
    fn svd_factors_are_isometries() {
        let m = mat(&[
            &[c(2.0, 1.0), c(0.0, 0.0)],
            &[c(0.0, -1.0), c(1.0, 1.0)],
            &[c(0.5, 0.5), c(2.0, 0.0)],
        ]);
        let svd = m.svd().unwrap();
        let k = svd.singular_values.len();
        let eye = ComplexMatrix::identity(k);
        assert!((&svd.u.adjoint() * &svd.u).distance(&eye) < 1e-12);
        assert!((&svd.v.adjoint() * &svd.v).distance(&eye) < 1e-12);
    }

    #[test]
    fn schatten_norms_of_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, 4.0]);
        assert!((m.schatten_norm(1.0).unwrap() - 7.0).abs() < 1e-12);
        assert!((m.schatten_norm(2.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((m.schatten_norm(f64::INFINITY).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn schatten_rejects_p_below_one() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            m.schatten_norm(0.5),
            Err(FrameError::InvalidParameter(_))
        ));
        assert!(matches!(
            m.schatten_norm(f64::NAN),
            Err(FrameError::InvalidParameter(_))
        ));
    }

    #[test]
    fn hermitian_eig_sorts_ascending_and_reconstructs() {
        let m = mat(&[
            &[c(2.0, 0.0), c(0.0, 1.0)],
            &[c(0.0, -1.0), c(3.0, 0.0)],
        ]);
        let eig = m.hermitian_eig().unwrap();
        assert!(eig.eigenvalues[0] <= eig.eigenvalues[1]);
        // Eigenvalues of [[2, i], [-i, 3]] are (5 +- sqrt(5)) / 2.
        let root = 5.0f64.sqrt();
        assert!((eig.eigenvalues[0] - (5.0 - root) / 2.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - (5.0 + root) / 2.0).abs() < 1e-12);
        assert!(eig.reconstruct().distance(&m) < 1e-12);
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let m = mat(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            m.hermitian_eig(),
            Err(FrameError::NotHermitian { .. })
        ));
    }

    #[test]
    fn hermitian_inverse_matches_direct_inverse() {
        let m = mat(&[
            &[c(4.0, 0.0), c(1.0, 1.0)],
            &[c(1.0, -1.0), c(3.0, 0.0)],
        ]);
        let inv = m.hermitian_fn(HermitianFn::Inverse).unwrap();
        let eye = ComplexMatrix::identity(2);
        assert!((&m * &inv).distance(&eye) < 1e-12);
        assert!((&inv * &m).distance(&eye) < 1e-12);
        assert!(inv.hermitian_deviation() < 1e-15);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let m = mat(&[
            &[c(5.0, 0.0), c(0.0, 2.0)],
            &[c(0.0, -2.0), c(5.0, 0.0)],
        ]);
        let root = m.hermitian_fn(HermitianFn::Sqrt).unwrap();
        assert!((&root * &root).distance(&m) < 1e-12);
    }

    #[test]
    fn hermitian_inv_sqrt_inverts_sqrt() {
        let m = mat(&[
            &[c(2.0, 0.0), c(0.5, 0.0)],
            &[c(0.5, 0.0), c(1.0, 0.0)],
        ]);
        let inv_root = m.hermitian_fn(HermitianFn::InvSqrt).unwrap();
        let inv = m.hermitian_fn(HermitianFn::Inverse).unwrap();
        assert!((&inv_root * &inv_root).distance(&inv) < 1e-12);
    }

    #[test]
    fn hermitian_inverse_reports_offending_eigenvalue() {
        let m = ComplexMatrix::from_real_diagonal(&[2.0, 0.0]);
        match m.hermitian_fn(HermitianFn::Inverse) {
            Err(FrameError::Singular { eigenvalue, .. }) => {
                assert!(eigenvalue.abs() < 1e-14);
            }
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn pseudoinverse_of_column_pair() {
        // pinv([[1], [1]]) = [[1/2, 1/2]].
        let m = mat(&[&[c(1.0, 0.0)], &[c(1.0, 0.0)]]);
        let p = m.pseudoinverse(None).unwrap();
        assert_eq!(p.shape(), (1, 2));
        assert!((p.entry(0, 0) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((p.entry(0, 1) - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pseudoinverse_of_rank_deficient_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[2.0, 0.0]);
        let p = m.pseudoinverse(None).unwrap();
        assert!((p.entry(0, 0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!(p.entry(1, 1).norm() < 1e-14);
    }

    #[test]
    fn pseudoinverse_inverts_invertible_input() {
        let m = mat(&[
            &[c(1.0, 1.0), c(0.0, 2.0)],
            &[c(-1.0, 0.0), c(3.0, 0.0)],
        ]);
        let p = m.pseudoinverse(None).unwrap();
        let eye = ComplexMatrix::identity(2);
        assert!((&m * &p).distance(&eye) < 1e-12);
    }

    #[test]
    fn pseudoinverse_rejects_bad_threshold() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            m.pseudoinverse(Some(-1.0)),
            Err(FrameError::InvalidParameter(_))
        ));
    }

    #[test]
    fn vectorize_is_column_major_and_invertible() {
        let m = mat(&[
            &[c(1.0, 0.0), c(3.0, 0.0)],
            &[c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        let v = m.vectorized();
        assert_eq!(v.shape(), (4, 1));
        assert_eq!(v.entry(0, 0), c(1.0, 0.0));
        assert_eq!(v.entry(1, 0), c(2.0, 0.0));
        assert_eq!(v.entry(2, 0), c(3.0, 0.0));
        assert_eq!(v.entry(3, 0), c(4.0, 0.0));
        let back = ComplexMatrix::unvectorize(&v, 2, 2).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn unvectorize_rejects_bad_shape() {
        let v = ComplexMatrix::zeros(3, 1);
        assert!(matches!(
            ComplexMatrix::unvectorize(&v, 2, 2),
            Err(FrameError::Dimension(_))
        ));
    }

    #[test]
    fn from_rows_rejects_ragged_and_non_finite() {
        let ragged = vec![vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(2.0, 0.0)]];
        assert!(matches!(
            ComplexMatrix::from_rows(&ragged),
            Err(FrameError::Dimension(_))
        ));
        let bad = vec![vec![c(f64::NAN, 0.0)]];
        assert!(matches!(
            ComplexMatrix::from_rows(&bad),
            Err(FrameError::NonFinite(_))
        ));
    }
}
