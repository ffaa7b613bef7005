//! The skew algebra `O_C = {T : CTC = −T*}` and its companion
//! `S_C = {T : CTC = T*}`.
//!
//! With the canonical conjugation these are the complex skew-symmetric and
//! symmetric matrices.

use num_complex::Complex64;

use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::matrix::{outer, svd, vector_norm, ComplexMatrix, ComplexVector, ToleranceProfile};

/// A matrix together with the conjugation it is skew for.
#[derive(Debug, Clone)]
pub struct SkewElement {
    t: ComplexMatrix,
    c: Conjugation,
    residual: f64,
}

impl SkewElement {
    pub fn new(t: ComplexMatrix, c: Conjugation, tol: &ToleranceProfile) -> Result<Self> {
        check_dims(&t, &c)?;
        let residual = member_residual(&t, &c);
        let threshold = tol.member_threshold(t.frobenius_norm());
        if residual > threshold {
            return Err(Error::Membership { residual, threshold });
        }
        Ok(SkewElement { t, c, residual })
    }

    pub fn canonical(t: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let n = t.require_square()?;
        Self::new(t, Conjugation::canonical(n), tol)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn conjugation(&self) -> &Conjugation {
        &self.c
    }

    /// `‖CTC + T*‖_F`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }
}

fn check_dims(t: &ComplexMatrix, c: &Conjugation) -> Result<()> {
    t.require_shape(c.dim(), c.dim())
}

/// `‖CTC + T*‖_F`.
pub fn member_residual(t: &ComplexMatrix, c: &Conjugation) -> f64 {
    (&c.sandwich(t) + &t.adjoint()).frobenius_norm()
}

/// Whether `CTC = −T*` within `max(atol, rtol·‖T‖_F)`.
pub fn is_member(t: &ComplexMatrix, c: &Conjugation, tol: &ToleranceProfile) -> Result<bool> {
    check_dims(t, c)?;
    Ok(member_residual(t, c) <= tol.member_threshold(t.frobenius_norm()))
}

/// The unique decomposition `X = sym + skew` with `sym ∈ S_C`, `skew ∈ O_C`:
/// `sym = ½(X + CX*C)` and `skew = ½(X − CX*C)`.
pub fn split(x: &ComplexMatrix, c: &Conjugation) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_dims(x, c)?;
    let reflected = c.sandwich(&x.adjoint());
    let sym = (x + &reflected).scale_real(0.5);
    let skew = (x - &reflected).scale_real(0.5);
    Ok((sym, skew))
}

/// `F_{jk} = E_{jk} − E_{kj}` with zero-based `j, k`.
pub fn skew_generator(n: usize, j: usize, k: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(j, k)] = Complex64::ONE;
    m[(k, j)] = -Complex64::ONE;
    m
}

/// Index pairs `(j, k)`, `j < k`, in lexicographic order.
pub fn skew_index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect()
}

/// Pairs `(j, k)`, `j ≤ k`, in lexicographic order.
pub fn sym_index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).collect()
}

/// The basis `F_{jk}`, `j < k`, of the skew-symmetric matrices, unnormalized
/// (`tr(F·F*) = 2`).
pub fn skew_basis(n: usize) -> Vec<ComplexMatrix> {
    skew_index_pairs(n).into_iter().map(|(j, k)| skew_generator(n, j, k)).collect()
}

/// The basis `E_{jj}` and `E_{jk} + E_{kj}` (`j < k`) of the symmetric
/// matrices, ordered like [`sym_index_pairs`].
pub fn sym_basis(n: usize) -> Vec<ComplexMatrix> {
    sym_index_pairs(n)
        .into_iter()
        .map(|(j, k)| {
            let mut m = ComplexMatrix::unit(n, j, k);
            m[(k, j)] = Complex64::ONE;
            m
        })
        .collect()
}

/// Coordinates of a skew-symmetric matrix in [`skew_basis`]: its entries
/// above the diagonal.
pub fn skew_coordinates(x: &ComplexMatrix) -> Vec<Complex64> {
    skew_index_pairs(x.nrows()).into_iter().map(|(j, k)| x[(j, k)]).collect()
}

pub fn from_skew_coordinates(n: usize, coords: &[Complex64]) -> Result<ComplexMatrix> {
    let pairs = skew_index_pairs(n);
    if pairs.len() != coords.len() {
        return Err(Error::Dimension(format!(
            "so({n}) has dimension {}, got {} coordinates",
            pairs.len(),
            coords.len()
        )));
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (&(j, k), &z) in pairs.iter().zip(coords) {
        m[(j, k)] = z;
        m[(k, j)] = -z;
    }
    Ok(m)
}

/// Coordinates of a symmetric matrix in [`sym_basis`]: entries on and above
/// the diagonal.
pub fn sym_coordinates(x: &ComplexMatrix) -> Vec<Complex64> {
    sym_index_pairs(x.nrows()).into_iter().map(|(j, k)| x[(j, k)]).collect()
}

const UNIT_TOL: f64 = 1e-10;

/// `X = e ⊗ (Cf) − f ⊗ (Ce)` for unit vectors `e`, `f`. Always in `O_C`,
/// with `1 − |⟨f, e⟩|² ≤ ‖X‖ ≤ ‖X‖_p ≤ 2`.
pub fn rank_two(e: &ComplexVector, f: &ComplexVector, c: &Conjugation) -> Result<ComplexMatrix> {
    if e.len() != c.dim() || f.len() != c.dim() {
        return Err(Error::Dimension("vectors must match the conjugation's dimension".into()));
    }
    for v in [e, f] {
        let norm = vector_norm(v);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
    }
    two_vector_element(e, f, c)
}

/// `e ⊗ (Cf) − f ⊗ (Ce)` without normalization requirements.
pub(crate) fn two_vector_element(e: &ComplexVector, f: &ComplexVector, c: &Conjugation) -> Result<ComplexMatrix> {
    Ok(&outer(e, &c.apply(f))? - &outer(f, &c.apply(e))?)
}

/// `φ(X) = X ⊕ (−CX*C)`, a Lie homomorphism into the skew algebra of
/// [`Conjugation::double_block`].
pub fn embed_double(x: &ComplexMatrix, c: &Conjugation) -> Result<ComplexMatrix> {
    check_dims(x, c)?;
    Ok(x.direct_sum(&-c.sandwich(&x.adjoint())))
}

/// Membership test through the three-block description of `O_C` for a
/// conjugation of the form
///
/// ```text
///     C = [[0, 0, C₃], [0, C₂, 0], [C₁, 0, 0]]    on ℂ ⊕ ℂⁿ⁻² ⊕ ℂ
/// ```
///
/// `R` is skew exactly when its corners `(1,3)` and `(3,1)` vanish,
/// `X ∈ O_{C₂}`, and the lower blocks are determined by the upper ones:
/// `Ỹ = −C₁Y*C₃`, `Ẑ = −C₂Z*C₃`, `W̌ = −C₁W*C₂`.
///
/// The block defects are combined with the multiplicities they have inside
/// `CRC + R*`, so the verdict coincides with [`is_member`].
pub fn three_block_check(r: &ComplexMatrix, c: &Conjugation, tol: &ToleranceProfile) -> Result<bool> {
    let n = c.dim();
    if n < 3 {
        return Err(Error::BlockShape(format!("three-block form needs dimension >= 3, got {n}")));
    }
    check_dims(r, c)?;
    let m = n - 2;
    let u = c.matrix();
    let off_pattern =
        [u.block(0, 0, 1, m + 1), u.block(1, 0, m, 1), u.block(1, m + 1, m, 1), u.block(m + 1, 1, 1, m + 1)];
    if off_pattern.iter().any(|b| b.max_abs() > 1e-10) {
        return Err(Error::BlockShape("conjugation is not antidiagonal over (1, n-2, 1)".into()));
    }
    // U-blocks: C₃ = u13·conj(·), C₁ = u31·conj(·), C₂ = U2·conj(·)
    let u13 = u[(0, m + 1)];
    let u31 = u[(m + 1, 0)];
    let u2 = u.block(1, 1, m, m);

    let y = r[(0, 0)];
    let z = r.block(0, 1, 1, m);
    let w = r.block(1, 0, m, 1);
    let x = r.block(1, 1, m, m);
    let z_hat = r.block(1, m + 1, m, 1);
    let w_check = r.block(m + 1, 1, 1, m);
    let y_tilde = r[(m + 1, m + 1)];

    // antilinear A∘L∘B with matrices U_A, U_B has matrix U_A·conj(L)·conj(U_B)
    let y_expected = -u31 * y * u13.conj();
    let z_hat_expected = (&u2 * &z.adjoint().conj()).scale(-u13.conj());
    let w_check_expected = (&w.adjoint().conj() * &u2.conj()).scale(-u31);

    let x_residual = (&(&(&u2 * &x.conj()) * &u2.conj()) + &x.adjoint()).frobenius_norm();
    let total = 4.0 * r[(0, m + 1)].norm_sqr()
        + 4.0 * r[(m + 1, 0)].norm_sqr()
        + 2.0 * (y_tilde - y_expected).norm_sqr()
        + 2.0 * (&z_hat - &z_hat_expected).frobenius_norm().powi(2)
        + 2.0 * (&w_check - &w_check_expected).frobenius_norm().powi(2)
        + x_residual * x_residual;
    Ok(total.sqrt() <= tol.member_threshold(r.frobenius_norm()))
}

/// `tr(AB)`. Vanishes whenever `A ∈ S_C` and `B ∈ O_C`.
pub fn trace_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.ncols() != b.nrows() || a.nrows() != b.ncols() {
        return Err(Error::Dimension(format!(
            "cannot pair {}x{} with {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    // tr(AB) = Σ_ij A_ij B_ji without forming the product
    let mut acc = Complex64::ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}

/// A skew `X` with `‖X‖₁ = 1` and `tr(XT) = ‖T‖`, attaining the trace-norm /
/// operator-norm duality on the skew-symmetric matrices.
///
/// With a top singular pair `T·v = s·u` the skew pairing gives
/// `T·conj(u) = −s·conj(v)` and `vᵀu = 0`, so
/// `X = ½(v·conj(u)ᵀ − conj(u)·vᵀ)` has singular values `½, ½`.
/// Only the canonical conjugation is supported.
pub fn dual_witness(t: &SkewElement, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    if !t.conjugation().is_canonical() {
        return Err(Error::Parameter("dual witness is built for the canonical conjugation; change basis first".into()));
    }
    let m = t.matrix();
    let d = svd(m)?;
    let s = d.values[0];
    if s <= tol.atol {
        return Err(Error::DegenerateZero);
    }
    let v = d.v.column(0);
    let u = m.mul_vec(&v).unscale(s);
    let u_bar = u.map(|z| z.conj());
    let x = &(&v * u_bar.transpose()) - &(&u_bar * v.transpose());
    Ok(ComplexMatrix::from_dmatrix(x).scale_real(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{instance_rng, random_conjugation, random_matrix, random_member, random_unit_vector};
    use crate::matrix::{c64, schatten_norm, I};

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn membership_examples() {
        let c = Conjugation::canonical(2);
        assert!(is_member(&skew_generator(2, 0, 1), &c, &tol()).unwrap());
        assert!(!is_member(&ComplexMatrix::identity(2), &c, &tol()).unwrap());
        assert!(matches!(is_member(&ComplexMatrix::identity(3), &c, &tol()), Err(Error::Dimension(_))));
    }

    #[test]
    fn double_block_membership_form() {
        // [[A, E], [F, −(D A* D)]] with E, F ∈ O_D
        let mut rng = instance_rng(21, 0);
        for n in 1..5 {
            let d = random_conjugation(n, &mut rng);
            let a = random_matrix(n, n, &mut rng);
            let e = random_member(&d, &mut rng);
            let f = random_member(&d, &mut rng);
            let mut t = ComplexMatrix::zeros(2 * n, 2 * n);
            t.set_block(0, 0, &a);
            t.set_block(0, n, &e);
            t.set_block(n, 0, &f);
            t.set_block(n, n, &-d.sandwich(&a.adjoint()));
            assert!(is_member(&t, &d.double_block(), &tol()).unwrap());
            // breaking the lower-right block breaks membership
            let mut bad = t.clone();
            bad.set_block(n, n, &a);
            assert!(!is_member(&bad, &d.double_block(), &tol()).unwrap() || a.max_abs() < 1e-6);
        }
    }

    #[test]
    fn split_examples() {
        let c = Conjugation::canonical(2);
        let f = skew_generator(2, 0, 1);
        let (sym, skew) = split(&f, &c).unwrap();
        assert_eq!(sym, ComplexMatrix::zeros(2, 2));
        assert_eq!(skew, f);

        let s = ComplexMatrix::from_row_major(2, 2, &[c64(1.0, 0.0), I, I, c64(2.0, -1.0)]).unwrap();
        let (sym, skew) = split(&s, &c).unwrap();
        assert_eq!(sym, s);
        assert_eq!(skew, ComplexMatrix::zeros(2, 2));

        let e12 = ComplexMatrix::unit(2, 0, 1);
        let (sym, skew) = split(&e12, &c).unwrap();
        let half = |m: ComplexMatrix| m.scale_real(0.5);
        assert_eq!(sym, half(&e12 + &ComplexMatrix::unit(2, 1, 0)));
        assert_eq!(skew, half(&e12 - &ComplexMatrix::unit(2, 1, 0)));
    }

    #[test]
    fn split_parts_for_random_conjugations() {
        let mut rng = instance_rng(22, 0);
        for n in 1..6 {
            let c = random_conjugation(n, &mut rng);
            let x = random_matrix(n, n, &mut rng);
            let (sym, skew) = split(&x, &c).unwrap();
            let scale = 1e-12 * x.frobenius_norm();
            assert!((&(&sym + &skew) - &x).frobenius_norm() <= scale);
            assert!((&c.sandwich(&sym) - &sym.adjoint()).frobenius_norm() <= scale);
            assert!((&c.sandwich(&skew) + &skew.adjoint()).frobenius_norm() <= scale);
            // idempotence
            let (sym2, skew2) = split(&sym, &c).unwrap();
            assert!((&sym2 - &sym).frobenius_norm() <= scale && skew2.frobenius_norm() <= scale);
            let (sym3, skew3) = split(&skew, &c).unwrap();
            assert!(sym3.frobenius_norm() <= scale && (&skew3 - &skew).frobenius_norm() <= scale);
        }
    }

    #[test]
    fn skew_basis_examples() {
        assert_eq!(skew_basis(2), vec![skew_generator(2, 0, 1)]);
        assert_eq!(skew_basis(3), vec![skew_generator(3, 0, 1), skew_generator(3, 0, 2), skew_generator(3, 1, 2)]);
        assert_eq!(skew_basis(4).len(), 6);
        let b = skew_basis(4);
        for (i, f) in b.iter().enumerate() {
            for (j, g) in b.iter().enumerate() {
                let p = trace_pair(f, &g.adjoint()).unwrap();
                let expected = if i == j { 2.0 } else { 0.0 };
                assert_eq!(p, c64(expected, 0.0));
            }
        }
        assert_eq!(sym_basis(3).len(), 6);
    }

    #[test]
    fn coordinates_round_trip() {
        let coords = vec![c64(1.0, 2.0), c64(-3.0, 0.5), I];
        let x = from_skew_coordinates(3, &coords).unwrap();
        assert_eq!(skew_coordinates(&x), coords);
        assert!(from_skew_coordinates(3, &coords[..2]).is_err());
    }

    #[test]
    fn rank_two_examples() {
        let c = Conjugation::canonical(3);
        let e1 = ComplexVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let e2 = ComplexVector::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(rank_two(&e1, &e1, &c).unwrap(), ComplexMatrix::zeros(3, 3));
        let x = rank_two(&e1, &e2, &c).unwrap();
        assert_eq!(x, skew_generator(3, 0, 1));
        assert!((x.norm() - 1.0).abs() < 1e-12);
        assert!((schatten_norm(&x, 1.0).unwrap() - 2.0).abs() < 1e-12);
        let long = &e1 * c64(2.0, 0.0);
        assert!(matches!(rank_two(&long, &e2, &c), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn rank_two_is_member_for_random_conjugations() {
        let mut rng = instance_rng(23, 0);
        for n in 2..6 {
            let c = random_conjugation(n, &mut rng);
            let e = random_unit_vector(n, &mut rng);
            let f = random_unit_vector(n, &mut rng);
            let x = rank_two(&e, &f, &c).unwrap();
            assert!(is_member(&x, &c, &tol()).unwrap());
        }
    }

    #[test]
    fn embed_double_examples() {
        let c = Conjugation::canonical(2);
        let id = ComplexMatrix::identity(2);
        assert_eq!(embed_double(&id, &c).unwrap(), id.direct_sum(&-&id));
        let e12 = ComplexMatrix::unit(2, 0, 1);
        assert_eq!(embed_double(&e12, &c).unwrap(), e12.direct_sum(&-ComplexMatrix::unit(2, 1, 0)));
        let x = ComplexMatrix::identity(3);
        assert!(matches!(embed_double(&x, &c), Err(Error::Dimension(_))));
    }

    fn three_block_conjugation(m: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Conjugation {
        let c2 = random_conjugation(m, rng);
        let phase = Complex64::from_polar(1.0, 0.7);
        let mut u = ComplexMatrix::zeros(m + 2, m + 2);
        u[(0, m + 1)] = phase;
        u[(m + 1, 0)] = phase;
        u.set_block(1, 1, c2.matrix());
        Conjugation::from_matrix(u, &tol()).unwrap()
    }

    #[test]
    fn three_block_examples() {
        let mut rng = instance_rng(24, 0);
        for m in 1..5 {
            let c = three_block_conjugation(m, &mut rng);
            let n = m + 2;
            assert!(three_block_check(&ComplexMatrix::zeros(n, n), &c, &tol()).unwrap());
            // assembled from a random member of O_C, the display holds
            let r = random_member(&c, &mut rng);
            assert!(three_block_check(&r, &c, &tol()).unwrap());
            let mut corner = r.clone();
            corner[(0, n - 1)] += c64(1.0, 0.0);
            assert!(!three_block_check(&corner, &c, &tol()).unwrap());
            // agreement with the direct test on arbitrary input
            for cand in [r.clone(), corner, random_matrix(n, n, &mut rng)] {
                assert_eq!(three_block_check(&cand, &c, &tol()).unwrap(), is_member(&cand, &c, &tol()).unwrap());
            }
        }
        let c = Conjugation::canonical(3);
        assert!(matches!(three_block_check(&ComplexMatrix::zeros(3, 3), &c, &tol()), Err(Error::BlockShape(_))));
    }

    #[test]
    fn trace_pair_examples() {
        let f = skew_generator(2, 0, 1);
        assert_eq!(trace_pair(&ComplexMatrix::identity(2), &f).unwrap(), c64(0.0, 0.0));
        assert_eq!(trace_pair(&f, &f).unwrap(), c64(-2.0, 0.0));
        let a = ComplexMatrix::diagonal(&[c64(1.0, 0.0), c64(2.0, 0.0)]);
        let b = ComplexMatrix::diagonal(&[c64(3.0, 0.0), c64(4.0, 0.0)]);
        assert_eq!(trace_pair(&a, &b).unwrap(), c64(11.0, 0.0));
        assert!(trace_pair(&a, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn dual_witness_examples() {
        let f = skew_generator(2, 0, 1);
        let t = SkewElement::canonical(f.clone(), &tol()).unwrap();
        let x = dual_witness(&t, &tol()).unwrap();
        assert!((&x + &f.scale_real(0.5)).max_abs() < 1e-14, "{x:?}");
        assert!((trace_pair(&x, &f).unwrap() - 1.0).norm() < 1e-14);
        assert!((schatten_norm(&x, 1.0).unwrap() - 1.0).abs() < 1e-12);

        let t2 = SkewElement::canonical(f.scale_real(2.0), &tol()).unwrap();
        let x2 = dual_witness(&t2, &tol()).unwrap();
        assert!((trace_pair(&x2, t2.matrix()).unwrap() - 2.0).norm() < 1e-13);

        let zero = SkewElement::canonical(ComplexMatrix::zeros(3, 3), &tol()).unwrap();
        assert!(matches!(dual_witness(&zero, &tol()), Err(Error::DegenerateZero)));
    }

    #[test]
    fn skew_element_rejects_non_members() {
        let err = SkewElement::canonical(ComplexMatrix::identity(2), &tol()).unwrap_err();
        assert!(matches!(err, Error::Membership { .. }));
    }
}
