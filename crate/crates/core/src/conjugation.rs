//! Conjugations: antilinear, isometric involutions on `ℂⁿ`.
//!
//! Every conjugation is stored as a symmetric unitary matrix `U` acting by
//! `C(x) = U·conj(x)`. Symmetry of `U` is exactly the condition `C² = I`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{inner, vector_norm, ComplexMatrix, ComplexVector, ToleranceProfile, I};

/// Deviation allowed for the postconditions of constructed conjugations and
/// fixed bases.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Conjugation {
    u: ComplexMatrix,
}

impl Conjugation {
    /// Entrywise complex conjugation, `U = I`.
    pub fn canonical(n: usize) -> Self {
        Conjugation { u: ComplexMatrix::identity(n) }
    }

    /// Validates `U` and wraps it. Both defects are measured in Frobenius norm
    /// against `max(atol, rtol·√n)`.
    pub fn from_matrix(u: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let n = u.require_square()?;
        let threshold = tol.member_threshold((n as f64).sqrt());
        let unitary_defect = (&(u.adjoint() * &u) - &ComplexMatrix::identity(n)).frobenius_norm();
        if unitary_defect > threshold {
            return Err(Error::NotUnitary { defect: unitary_defect });
        }
        let symmetric_defect = (&u - &u.transpose()).frobenius_norm();
        if symmetric_defect > threshold {
            return Err(Error::NotSymmetric { defect: symmetric_defect });
        }
        Ok(Conjugation { u })
    }

    pub(crate) fn from_matrix_unchecked(u: ComplexMatrix) -> Self {
        Conjugation { u }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn is_canonical(&self) -> bool {
        (&self.u - &ComplexMatrix::identity(self.dim())).max_abs() <= STRUCTURE_TOL
    }

    pub fn apply(&self, x: &ComplexVector) -> ComplexVector {
        self.u.mul_vec(&x.map(|z| z.conj()))
    }

    /// The linear operator `C·T·C`, whose matrix is `U·conj(T)·conj(U)`.
    pub fn sandwich(&self, t: &ComplexMatrix) -> ComplexMatrix {
        &(&self.u * &t.conj()) * &self.u.conj()
    }

    /// An orthonormal basis of `ℂⁿ` made of `C`-fixed vectors, as the columns
    /// of the returned (unitary) matrix.
    ///
    /// The fixed vectors form a real form of `ℂⁿ`, and complex inner products
    /// between fixed vectors are real, so Gram–Schmidt with real coefficients
    /// stays inside it.
    pub fn fixed_basis<R: Rng + ?Sized>(&self, rng: &mut R, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut basis: Vec<ComplexVector> = Vec::with_capacity(n);
        let mut attempts = 0;
        while basis.len() < n {
            attempts += 1;
            if attempts > 20 * n + 20 {
                return Err(Error::Numerical(format!("found only {} of {n} independent fixed vectors", basis.len())));
            }
            let v = random_vector(n, rng);
            let cv = self.apply(&v);
            let mut w = &v + &cv;
            if vector_norm(&w) < tol.atol.max(1e-3) {
                w = (&v - &cv) * I;
            }
            let seed_norm = vector_norm(&w);
            // two passes keep the basis orthonormal to working precision
            for _ in 0..2 {
                for e in &basis {
                    let coeff = inner(&w, e).re;
                    w -= e * Complex64::new(coeff, 0.0);
                }
            }
            let norm = vector_norm(&w);
            if norm > 1e-6 * seed_norm {
                // symmetrize to remove rounding drift out of the fixed set
                let w = w.unscale(norm);
                let w = (&w + &self.apply(&w)) * Complex64::new(0.5, 0.0);
                let norm = vector_norm(&w);
                basis.push(w.unscale(norm));
            }
        }
        let b = ComplexMatrix::from_columns(&basis)?;
        let ortho = (&(b.adjoint() * &b) - &ComplexMatrix::identity(n)).max_abs();
        let fixed = basis.iter().map(|e| vector_norm(&(self.apply(e) - e))).fold(0.0, f64::max);
        if ortho > STRUCTURE_TOL || fixed > STRUCTURE_TOL {
            return Err(Error::Numerical(format!(
                "fixed basis defects too large (orthonormality {ortho:.2e}, fixedness {fixed:.2e})"
            )));
        }
        Ok(b)
    }

    /// The conjugation `(x, y) ↦ (D y, D x)` on `ℂⁿ ⊕ ℂⁿ`, with `U`-matrix
    /// `[[0, U_D], [U_D, 0]]`.
    pub fn double_block(&self) -> Conjugation {
        let n = self.dim();
        let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
        u.set_block(0, n, &self.u);
        u.set_block(n, 0, &self.u);
        Conjugation { u }
    }
}

pub(crate) fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}
