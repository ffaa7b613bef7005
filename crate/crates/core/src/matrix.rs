//! Dense complex matrix kernel.
//!
//! [`ComplexMatrix`] wraps an `nalgebra` matrix of `Complex64` entries and adds
//! the handful of operations the rest of the crate needs: eigenvalues with
//! residual-checked eigenvectors, singular values, Schatten norms, a tolerant
//! numerical rank and rank-one outer products `e ⊗ f`.
//!
//! Inner products are linear in the first argument: `⟨x, y⟩ = Σ x_k·conj(y_k)`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexVector = DVector<Complex64>;

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Shorthand for building a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical thresholds used across the crate.
///
/// The clustering radius is `max(atol, rtol·max|λ|)` unless overridden, and
/// the rank threshold is `max(atol, n·ε·σ_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    pub atol: f64,
    pub rtol: f64,
    /// Fixed clustering radius replacing the `max(atol, rtol·max|λ|)` rule.
    pub cluster_override: Option<f64>,
    /// Trapezoidal nodes on Riesz contours.
    pub contour_points: usize,
    /// Regroup eigenvalues scattered by a defective (non-diagonalizable)
    /// eigenvalue, see [`crate::spectra::cluster_values`].
    pub defect_merge: bool,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile { atol: 1e-9, rtol: 1e-7, cluster_override: None, contour_points: 128, defect_merge: true }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.atol) || !ok(self.rtol) {
            return Err(Error::Parameter("tolerances must be finite and nonnegative".into()));
        }
        if let Some(r) = self.cluster_override {
            if !ok(r) {
                return Err(Error::Parameter("cluster radius must be finite and nonnegative".into()));
            }
        }
        if self.contour_points < 8 {
            return Err(Error::Parameter(format!("contour_points must be at least 8, got {}", self.contour_points)));
        }
        Ok(())
    }

    pub fn cluster_radius(&self, max_abs_eigenvalue: f64) -> f64 {
        self.cluster_override.unwrap_or_else(|| self.atol.max(self.rtol * max_abs_eigenvalue))
    }

    pub fn rank_threshold(&self, n: usize, sigma_max: f64) -> f64 {
        self.atol.max(n as f64 * f64::EPSILON * sigma_max)
    }

    /// Threshold on `‖CTC + T*‖` for membership in the skew algebra.
    pub fn member_threshold(&self, norm: f64) -> f64 {
        self.atol.max(self.rtol * norm)
    }
}

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.0)
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// wrong lengths and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &z)
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::ZERO })
    }

    /// The matrix unit `E_{jk}` (zero-based indices).
    pub fn unit(n: usize, j: usize, k: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(j, k)] = Complex64::ONE;
        m
    }

    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let rows = columns.first().map(|c| c.len()).unwrap_or(0);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns have different lengths".into()));
        }
        Ok(ComplexMatrix(DMatrix::from_columns(columns)))
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.nrows())
        } else {
            Err(Error::Dimension(format!("expected a square matrix, got {}x{}", self.nrows(), self.ncols())))
        }
    }

    pub fn require_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.nrows() == rows && self.ncols() == cols {
            Ok(())
        } else {
            Err(Error::Dimension(format!("expected a {rows}x{cols} matrix, got {}x{}", self.nrows(), self.ncols())))
        }
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator (spectral) norm, the largest singular value.
    pub fn norm(&self) -> f64 {
        svd_values(self).ok().and_then(|s| s.first().copied()).unwrap_or(f64::NAN)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    /// `self − z·I`.
    pub fn shift(&self, z: Complex64) -> Self {
        let mut m = self.0.clone();
        for k in 0..m.nrows().min(m.ncols()) {
            m[(k, k)] -= z;
        }
        ComplexMatrix(m)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        ComplexMatrix(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = (self.nrows(), self.ncols());
        let mut m = DMatrix::zeros(r1 + other.nrows(), c1 + other.ncols());
        m.view_mut((0, 0), (r1, c1)).copy_from(&self.0);
        m.view_mut((r1, c1), (other.nrows(), other.ncols())).copy_from(&other.0);
        ComplexMatrix(m)
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        ComplexMatrix(self.0.view((row, col), (rows, cols)).into_owned())
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        self.0.view_mut((row, col), (block.nrows(), block.ncols())).copy_from(&block.0);
    }

    pub fn column(&self, k: usize) -> ComplexVector {
        self.0.column(k).into_owned()
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        &self.0 * v
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        self.0
            .clone()
            .try_inverse()
            .map(ComplexMatrix)
            .filter(|m| m.is_finite())
            .ok_or_else(|| Error::Numerical("matrix is singular".into()))
    }

    /// Determinant by LU factorization.
    pub fn determinant(&self) -> Result<Complex64> {
        self.require_square()?;
        Ok(self.0.clone().determinant())
    }

    pub fn pow(&self, k: u32) -> Self {
        let n = self.nrows();
        (0..k).fold(Self::identity(n), |acc, _| &acc * self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 -= &rhs.0;
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

/// `⟨x, y⟩ = Σ x_k·conj(y_k)`.
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn vector_norm(x: &ComplexVector) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues with one unit vector per eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Counted with algebraic multiplicity, in Schur-diagonal order.
    pub values: Vec<Complex64>,
    /// Column `k` is a unit vector minimizing `‖(M − λ_k)v‖`. For a
    /// diagonalizable eigenvalue it is an eigenvector; at a defective
    /// eigenvalue it is a direction of the (numerical) kernel.
    pub vectors: ComplexMatrix,
}

const SCHUR_SWEEPS_PER_ROW: usize = 1000;

/// Eigenvalues by complex Schur factorization.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(Error::Parameter("matrix entries must be finite".into()));
    }
    let schur = nalgebra::linalg::Schur::try_new(m.0.clone(), f64::EPSILON, SCHUR_SWEEPS_PER_ROW * n.max(1))
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

pub fn eig_full(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let values = eigenvalues(m)?;
    let mut columns = Vec::with_capacity(values.len());
    for &lambda in &values {
        let (_, v) = smallest_singular_pair(&m.shift(lambda))?;
        columns.push(v);
    }
    Ok(EigenDecomposition { values, vectors: ComplexMatrix::from_columns(&columns)? })
}

/// Full SVD `M = U·diag(s)·V*` with singular values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub values: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::Parameter("matrix entries must be finite".into()));
    }
    let raw = nalgebra::linalg::SVD::try_new(m.0.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = raw.u.expect("requested U");
    let v = raw.v_t.expect("requested V*").adjoint();
    let mut order: Vec<usize> = (0..raw.singular_values.len()).collect();
    order.sort_by(|&a, &b| raw.singular_values[b].total_cmp(&raw.singular_values[a]));
    let values = order.iter().map(|&k| raw.singular_values[k]).collect();
    let u_cols: Vec<ComplexVector> = order.iter().map(|&k| u.column(k).into_owned()).collect();
    let v_cols: Vec<ComplexVector> = order.iter().map(|&k| v.column(k).into_owned()).collect();
    Ok(Svd { u: ComplexMatrix::from_columns(&u_cols)?, values, v: ComplexMatrix::from_columns(&v_cols)? })
}

/// Singular values, nonincreasing, `min(rows, cols)` of them.
pub fn svd_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::Parameter("matrix entries must be finite".into()));
    }
    let mut s: Vec<f64> = m.0.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Smallest singular value of a square matrix with its right singular vector.
fn smallest_singular_pair(m: &ComplexMatrix) -> Result<(f64, ComplexVector)> {
    let d = svd(m)?;
    let last = d.values.len() - 1;
    Ok((d.values[last], d.v.column(last)))
}

/// Schatten `p`-norm; `p = f64::INFINITY` gives the operator norm.
pub fn schatten_norm(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!("Schatten exponent must be >= 1, got {p}")));
    }
    let s = svd_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if p.is_infinite() || smax == 0.0 {
        return Ok(smax);
    }
    // scaled to avoid overflow for large p
    let sum: f64 = s.iter().map(|&x| (x / smax).powf(p)).sum();
    Ok(smax * sum.powf(1.0 / p))
}

/// Number of singular values strictly above `max(atol, n·ε·σ_max)`.
pub fn rank_tol(m: &ComplexMatrix, tol: &ToleranceProfile) -> Result<usize> {
    let s = svd_values(m)?;
    let n = m.nrows().max(m.ncols());
    let threshold = tol.rank_threshold(n, s.first().copied().unwrap_or(0.0));
    Ok(s.iter().filter(|&&x| x > threshold).count())
}

/// Orthonormal basis of the numerical kernel of a square matrix, using the
/// same threshold as [`rank_tol`].
pub fn null_space(m: &ComplexMatrix, tol: &ToleranceProfile) -> Result<Vec<ComplexVector>> {
    let n = m.require_square()?;
    let d = svd(m)?;
    let threshold = tol.rank_threshold(n, d.values[0]);
    Ok((0..n).filter(|&k| d.values[k] <= threshold).map(|k| d.v.column(k)).collect())
}

/// The rank-one operator `e ⊗ f : x ↦ ⟨x, f⟩·e`, i.e. the matrix `e·f*`.
pub fn outer(e: &ComplexVector, f: &ComplexVector) -> Result<ComplexMatrix> {
    if e.len() != f.len() || e.is_empty() {
        return Err(Error::Dimension(format!(
            "outer product needs equal nonzero lengths, got {} and {}",
            e.len(),
            f.len()
        )));
    }
    Ok(ComplexMatrix(e * f.adjoint()))
}
