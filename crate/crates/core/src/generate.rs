//! Seeded random instances.
//!
//! All randomness flows through [`instance_rng`]: a ChaCha8 stream cipher
//! keyed by `seed` (expanded with `seed_from_u64`) and positioned on stream
//! number `stream`. ChaCha is counter-based, so instance `k` of a suite is
//! reproducible on its own regardless of how many instances ran before it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conjugation::{random_vector, Conjugation};
use crate::error::{Error, Result};
use crate::matrix::{c64, vector_norm, ComplexMatrix, ComplexVector, I};
use crate::skew::skew_generator;

pub fn instance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    /// `A − Aᵀ` with i.i.d. standard complex normal `A`.
    Dense,
    /// `Σ a_k·F_{2k−1,2k}`.
    BlockSums,
    /// A generic nilpotent element, conjugated by a complex orthogonal matrix.
    Nilpotent,
    /// Block sums with repeated coefficients, rotated by a real orthogonal matrix.
    Repeated,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] =
        [InstanceKind::Dense, InstanceKind::BlockSums, InstanceKind::Nilpotent, InstanceKind::Repeated];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Dense => "dense",
            InstanceKind::BlockSums => "block-sums",
            InstanceKind::Nilpotent => "nilpotent",
            InstanceKind::Repeated => "repeated",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown instance kind '{s}'")))
    }
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let v = random_vector(n, rng);
    let norm = vector_norm(&v);
    v.unscale(norm)
}

/// Haar-distributed unitary matrix (QR of a Gaussian matrix with the phases
/// of `R`'s diagonal absorbed).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_matrix(n, n, rng).into_dmatrix();
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::ONE };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    ComplexMatrix::from_dmatrix(q)
}

/// Real orthogonal matrix from the QR factorization of a real Gaussian matrix.
pub fn random_real_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let q = a.qr().q();
    ComplexMatrix::from_fn(n, n, |i, j| c64(q[(i, j)], 0.0))
}

/// A complex orthogonal matrix (`QᵀQ = I`) by the Cayley transform of a
/// random skew matrix with Frobenius norm `scale`.
pub fn random_complex_orthogonal<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> ComplexMatrix {
    let s = dense_skew(n, rng);
    let s = s.scale_real(scale / s.frobenius_norm().max(f64::MIN_POSITIVE));
    let id = ComplexMatrix::identity(n);
    let plus = (&id + &s).inverse().expect("I + S is invertible for small S");
    &(&id - &s) * &plus
}

/// `U = Q·Qᵀ` for Haar unitary `Q`: a symmetric unitary, hence a conjugation.
pub fn random_conjugation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Conjugation {
    let q = random_unitary(n, rng);
    let u = &q * &q.transpose();
    // exact symmetry
    let u = (&u + &u.transpose()).scale_real(0.5);
    Conjugation::from_matrix_unchecked(u)
}

pub fn dense_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_matrix(n, n, rng);
    &a - &a.transpose()
}

/// `Σ_k a_k·F_{2k−1,2k}` using as many coefficients as given (at most `n/2`).
pub fn block_sums(n: usize, coefficients: &[Complex64]) -> Result<ComplexMatrix> {
    if 2 * coefficients.len() > n {
        return Err(Error::Parameter(format!("{} block coefficients do not fit in dimension {n}", coefficients.len())));
    }
    let mut t = ComplexMatrix::zeros(n, n);
    for (k, &a) in coefficients.iter().enumerate() {
        t += &skew_generator(n, 2 * k, 2 * k + 1).scale(a);
    }
    Ok(t)
}

pub fn random_block_sums<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let coeffs: Vec<Complex64> = (0..n / 2).map(|_| complex_normal(rng)).collect();
    block_sums(n, &coeffs).expect("n/2 blocks fit")
}

/// Block sums whose coefficients come from `{i, 2i, 1+i}` with the first
/// value repeated, then rotated by a random real orthogonal matrix.
pub fn repeated_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let pool = [I, c64(0.0, 2.0), c64(1.0, 1.0)];
    let mut coeffs: Vec<Complex64> = (0..n / 2).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    if coeffs.len() >= 2 {
        coeffs[1] = coeffs[0];
    }
    let t = block_sums(n, &coeffs).expect("n/2 blocks fit");
    let q = random_real_orthogonal(n, rng);
    &(&q * &t) * &q.transpose()
}

/// A generic nilpotent element of so(n).
///
/// In the isotropic basis `a_k = (e_{2k−1} + i·e_{2k})/√2`, `b_k = conj(a_k)`
/// (plus `e_n` when `n` is odd) the symmetric bilinear form is the
/// antidiagonal `J`, and `X = J·K` with `K` skew and supported strictly below
/// the antidiagonal is strictly upper triangular with `XᵀJ + JX = 0`. Mapping
/// back with the unitary basis matrix `P` (`PᵀP = J`) gives a skew nilpotent
/// matrix, which is then mixed by a complex orthogonal similarity.
pub fn nilpotent_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let m = n / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = ComplexMatrix::zeros(n, n);
    for k in 0..m {
        // a_k in column k, b_k in column n-1-k
        p[(2 * k, k)] = c64(s, 0.0);
        p[(2 * k + 1, k)] = c64(0.0, s);
        p[(2 * k, n - 1 - k)] = c64(s, 0.0);
        p[(2 * k + 1, n - 1 - k)] = c64(0.0, -s);
    }
    if n % 2 == 1 {
        p[(n - 1, m)] = Complex64::ONE;
    }
    let mut k_mat = ComplexMatrix::zeros(n, n);
    for row in 0..n {
        for col in 0..row {
            if row + col > n - 1 {
                let z = complex_normal(rng);
                k_mat[(row, col)] = z;
                k_mat[(col, row)] = -z;
            }
        }
    }
    let j = ComplexMatrix::from_fn(n, n, |r, c| if r + c == n - 1 { Complex64::ONE } else { Complex64::ZERO });
    let x = &j * &k_mat;
    let t = &(&p * &x) * &p.adjoint();
    let q = random_complex_orthogonal(n, 0.5, rng);
    let t = &(&q * &t) * &q.transpose();
    // remove rounding asymmetry
    (&t - &t.transpose()).scale_real(0.5)
}

pub fn generate<R: Rng + ?Sized>(kind: InstanceKind, n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::Parameter(format!("instances need n >= 2, got {n}")));
    }
    Ok(match kind {
        InstanceKind::Dense => dense_skew(n, rng),
        InstanceKind::BlockSums => random_block_sums(n, rng),
        InstanceKind::Nilpotent => nilpotent_skew(n, rng),
        InstanceKind::Repeated => repeated_skew(n, rng),
    })
}

/// Random element of `O_C`: the skew part `½(X − C·X*·C)` of a Gaussian `X`.
pub fn random_member<R: Rng + ?Sized>(c: &Conjugation, rng: &mut R) -> ComplexMatrix {
    let x = random_matrix(c.dim(), c.dim(), rng);
    (&x - &c.sandwich(&x.adjoint())).scale_real(0.5)
}

/// Random element of `S_C`: the symmetric part `½(X + C·X*·C)`.
pub fn random_symmetric_member<R: Rng + ?Sized>(c: &Conjugation, rng: &mut R) -> ComplexMatrix {
    let x = random_matrix(c.dim(), c.dim(), rng);
    (&x + &c.sandwich(&x.adjoint())).scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eigenvalues, ToleranceProfile};
    use crate::skew::is_member;

    #[test]
    fn kinds_are_skew() {
        let tol = ToleranceProfile::default();
        let canonical = |n| Conjugation::canonical(n);
        for kind in InstanceKind::ALL {
            for n in 2..=8 {
                let t = generate(kind, n, &mut instance_rng(1, n as u64)).unwrap();
                assert!(is_member(&t, &canonical(n), &tol).unwrap(), "{kind} n={n}");
            }
        }
    }

    #[test]
    fn nilpotent_is_nilpotent() {
        for n in 2..=8 {
            let t = nilpotent_skew(n, &mut instance_rng(4, n as u64));
            let p = t.pow(n as u32);
            assert!(p.max_abs() <= 1e-9 * t.norm().powi(n as i32).max(1.0), "n={n}");
        }
    }

    #[test]
    fn nilpotent_n3_is_a_single_jordan_block() {
        let t = nilpotent_skew(3, &mut instance_rng(9, 0));
        assert!(t.pow(2).max_abs() > 1e-3);
        assert!(eigenvalues(&t).unwrap().iter().all(|z| z.norm() < 1e-4 * t.norm()));
    }

    #[test]
    fn deterministic_streams() {
        let a = dense_skew(4, &mut instance_rng(7, 0));
        let b = dense_skew(4, &mut instance_rng(7, 0));
        let c = dense_skew(4, &mut instance_rng(7, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_conjugations_validate() {
        let tol = ToleranceProfile::default();
        for n in 1..6 {
            let c = random_conjugation(n, &mut instance_rng(2, n as u64));
            assert!(Conjugation::from_matrix(c.matrix().clone(), &tol).is_ok());
        }
    }

    #[test]
    fn complex_orthogonal() {
        let q = random_complex_orthogonal(5, 0.5, &mut instance_rng(0, 0));
        assert!((&(q.transpose() * &q) - &ComplexMatrix::identity(5)).max_abs() < 1e-12);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("block-sums".parse::<InstanceKind>().unwrap(), InstanceKind::BlockSums);
        assert!("sparse".parse::<InstanceKind>().is_err());
    }
}
