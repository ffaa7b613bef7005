//! The inner derivation `ad_T : X ↦ [T, X]` on the skew algebra and its
//! extension `δ_T` to all matrices.
//!
//! Two independent routes to `σ(ad_T)` are provided: the brute-force
//! spectrum of the explicit `ad_T` matrix ([`ad_spectrum_oracle`]) and the
//! closed formula `σ(T)+σ(T) \ 2·Ξ(T)` ([`ad_spectrum_formula`]).
//!
//! At finite dimension the Schatten-restricted derivations `ad_{T,p}` all
//! coincide with `ad_T`, so they are not modelled separately.

use num_complex::Complex64;

use crate::conjugation::{Conjugation, STRUCTURE_TOL};
use crate::error::{Error, Result};
use crate::generate::instance_rng;
use crate::matrix::{null_space, svd_values, vector_norm, ComplexMatrix, ComplexVector, ToleranceProfile};
use crate::setgeom::{sumset, PointSet};
use crate::skew::{
    member_residual, skew_basis, skew_coordinates, skew_index_pairs, sym_basis, sym_coordinates, two_vector_element,
    SkewElement,
};
use crate::spectra::{spectrum, xi_of_matrix, SpectrumSet};

/// `ad_T` as an `m×m` matrix on the basis `F_{jk}` of so(n), `m = n(n−1)/2`.
///
/// For a non-canonical conjugation the coordinates refer to the unitary
/// change of basis `B` (columns fixed by `C`) in which the skew algebra
/// becomes the skew-symmetric matrices: `X ↦ skew_coordinates(B*·X·B)`.
#[derive(Debug, Clone)]
pub struct AdMatrix {
    pub element: SkewElement,
    pub basis_change: Option<ComplexMatrix>,
    /// `T` in the skew-symmetric picture.
    pub reduced: ComplexMatrix,
    pub matrix: ComplexMatrix,
}

impl AdMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `X` expressed in the skew-symmetric picture.
    pub fn reduce(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis_change {
            Some(b) => &(b.adjoint() * x) * b,
            None => x.clone(),
        }
    }

    /// Coordinates of `X ∈ O_C` in the basis the matrix is written in.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<Complex64> {
        skew_coordinates(&self.reduce(x))
    }
}

/// Seed of the random source used for the change of basis, fixed so that
/// the same input always produces the same coordinates.
const BASIS_SEED: u64 = 0;

/// Reduces `T` to the skew-symmetric picture. Returns the basis change (if
/// any) and the reduced matrix.
fn reduce(t: &SkewElement, tol: &ToleranceProfile) -> Result<(Option<ComplexMatrix>, ComplexMatrix)> {
    let c = t.conjugation();
    if c.is_canonical() {
        return Ok((None, t.matrix().clone()));
    }
    let b = c.fixed_basis(&mut instance_rng(BASIS_SEED, 0), tol)?;
    let r = &(b.adjoint() * t.matrix()) * &b;
    // the reduced matrix is skew-symmetric up to the membership residual
    let r = (&r - &r.transpose()).scale_real(0.5);
    Ok((Some(b), r))
}

pub fn ad_matrix(t: &SkewElement, tol: &ToleranceProfile) -> Result<AdMatrix> {
    let (basis_change, reduced) = reduce(t, tol)?;
    let n = reduced.nrows();
    let basis = skew_basis(n);
    let columns: Vec<ComplexVector> =
        basis.iter().map(|f| ComplexVector::from_vec(skew_coordinates(&reduced.commutator(f)))).collect();
    let matrix = if columns.is_empty() { ComplexMatrix::zeros(0, 0) } else { ComplexMatrix::from_columns(&columns)? };
    Ok(AdMatrix { element: t.clone(), basis_change, reduced, matrix })
}

/// Clustered spectrum of the explicit `ad_T` matrix.
pub fn ad_spectrum_oracle(t: &SkewElement, tol: &ToleranceProfile) -> Result<SpectrumSet> {
    spectrum(&ad_matrix(t, tol)?.matrix, tol)
}

/// `σ(T)+σ(T) \ {2z : z ∈ Ξ(T)}`, with removal at the clustering radius of
/// `σ(T)`.
pub fn ad_spectrum_formula(t: &SkewElement, tol: &ToleranceProfile) -> Result<PointSet> {
    let spec = spectrum(t.matrix(), tol)?;
    let xi = xi_of_matrix(t.matrix(), &spec, tol)?;
    let points = spec.to_point_set();
    let sums = sumset(&points, &points);
    let doubled: Vec<Complex64> = xi.values.iter().map(|z| z * 2.0).collect();
    Ok(sums.without(&doubled, sums.tol()))
}

/// `δ_T : X ↦ TX − XT` on all `n×n` matrices, in row-major vectorization:
/// `δ_T = T ⊗ I − I ⊗ Tᵀ`.
pub fn delta_full(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.require_square()?;
    Ok(ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        let mut v = Complex64::ZERO;
        if j == l {
            v += t[(i, k)];
        }
        if i == k {
            v -= t[(l, j)];
        }
        v
    }))
}

/// The two diagonal blocks of `δ_T` over the split into skew and symmetric
/// parts: `ad_T` on so(n) and `X ↦ [T, X]` on the symmetric matrices (in
/// [`sym_basis`] coordinates), both in the skew-symmetric picture.
pub fn delta_blocks(t: &SkewElement, tol: &ToleranceProfile) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let ad = ad_matrix(t, tol)?;
    let n = ad.reduced.nrows();
    let columns: Vec<ComplexVector> =
        sym_basis(n).iter().map(|s| ComplexVector::from_vec(sym_coordinates(&ad.reduced.commutator(s)))).collect();
    Ok((ad.matrix, ComplexMatrix::from_columns(&columns)?))
}

fn check_eigenpair(t: &ComplexMatrix, lambda: Complex64, v: &ComplexVector, threshold: f64) -> Result<()> {
    if v.len() != t.nrows() {
        return Err(Error::Dimension(format!(
            "vector of length {} for an {}x{} matrix",
            v.len(),
            t.nrows(),
            t.nrows()
        )));
    }
    let residual = vector_norm(&(t.mul_vec(v) - v * lambda));
    if residual > threshold {
        return Err(Error::NotEigenpair { residual });
    }
    Ok(())
}

/// `X = e ⊗ (Cf) − f ⊗ (Ce)` for eigenpairs `(λ, e)`, `(μ, f)` of `T`,
/// which satisfies `ad_T X = (λ+μ)·X`.
pub fn eig_pair_vector(
    t: &SkewElement,
    lambda: Complex64,
    e: &ComplexVector,
    mu: Complex64,
    f: &ComplexVector,
    tol: &ToleranceProfile,
) -> Result<SkewElement> {
    let m = t.matrix();
    let scale = svd_values(m)?.first().copied().unwrap_or(0.0);
    check_eigenpair(m, lambda, e, tol.atol * scale * vector_norm(e))?;
    check_eigenpair(m, mu, f, tol.atol * scale * vector_norm(f))?;
    let x = two_vector_element(e, f, t.conjugation())?;
    if x.norm() <= tol.atol {
        return Err(Error::ZeroConstruct);
    }
    SkewElement::new(x, t.conjugation().clone(), tol)
}

/// A nonzero `X ∈ O_C` with `ad_T X = 2z·X` when `z` is not a simple
/// eigenvalue (`dim ker(T−z)² ≥ 2`).
///
/// Uses two independent eigenvectors when `dim ker(T−z) ≥ 2`, and otherwise a
/// Jordan chain `(T−z)f₁ = 0`, `(T−z)f₂ = f₁` with
/// `X = f₁ ⊗ (Cf₂) − f₂ ⊗ (Cf₁)`.
pub fn jordan_pair_vector(t: &SkewElement, z: Complex64, tol: &ToleranceProfile) -> Result<SkewElement> {
    let shifted = t.matrix().shift(z);
    let k2 = null_space(&(&shifted * &shifted), tol)?;
    if k2.len() < 2 {
        return Err(Error::PreconditionFailed(format!("dim ker(T - z)^2 = {} at z = {z}; need at least 2", k2.len())));
    }
    let k1 = null_space(&shifted, tol)?;
    let c = t.conjugation();
    let x = if k1.len() >= 2 {
        two_vector_element(&k1[0], &k1[1], c)?
    } else {
        // a vector of ker(T−z)² with no component along ker(T−z)
        let f2 = k2
            .iter()
            .map(|v| {
                let mut w = v.clone();
                for e in &k1 {
                    w -= e * e.dotc(v);
                }
                w
            })
            .max_by(|a, b| vector_norm(a).total_cmp(&vector_norm(b)))
            .expect("at least two kernel vectors");
        let norm = vector_norm(&f2);
        if norm <= STRUCTURE_TOL {
            return Err(Error::PreconditionFailed("no Jordan chain found".into()));
        }
        let f2 = f2 / Complex64::new(norm, 0.0);
        let f1 = shifted.mul_vec(&f2);
        two_vector_element(&f1, &f2, c)?
    };
    if x.norm() <= tol.atol {
        return Err(Error::ZeroConstruct);
    }
    SkewElement::new(x, c.clone(), tol)
}

/// `‖ad_T X − ν·X‖_F`.
pub fn eigen_residual(t: &SkewElement, x: &SkewElement, nu: Complex64) -> f64 {
    (&t.matrix().commutator(x.matrix()) - &x.matrix().scale(nu)).frobenius_norm()
}

fn same_algebra(t: &Conjugation, x: &SkewElement, tol: &ToleranceProfile) -> Result<()> {
    if (t.matrix() - x.conjugation().matrix()).max_abs() <= STRUCTURE_TOL {
        return Ok(());
    }
    let residual = member_residual(x.matrix(), t);
    let threshold = tol.member_threshold(x.matrix().frobenius_norm());
    if residual > threshold {
        return Err(Error::Membership { residual, threshold });
    }
    Ok(())
}

/// `|tr(ad_T(X)·Y) + tr(X·ad_T(Y))|`, which vanishes identically.
pub fn ad_trace_antisymmetry(t: &SkewElement, x: &SkewElement, y: &SkewElement, tol: &ToleranceProfile) -> Result<f64> {
    for v in [x, y] {
        v.matrix().require_shape(t.dim(), t.dim())?;
        same_algebra(t.conjugation(), v, tol)?;
    }
    let (tm, xm, ym) = (t.matrix(), x.matrix(), y.matrix());
    let lhs = (&tm.commutator(xm) * ym).trace();
    let rhs = (xm * &tm.commutator(ym)).trace();
    Ok((lhs + rhs).norm())
}

/// Number of coordinates of so(n).
pub fn so_dim(n: usize) -> usize {
    skew_index_pairs(n).len()
}
