//! Lie ideals of so(n): bracket closure of generators and verification.
//!
//! so(n) is simple for n = 3 and n ≥ 5; so(4) splits into two commuting
//! three-dimensional ideals.

use num_complex::Complex64;

use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ToleranceProfile};
use crate::skew::{is_member, skew_basis};

/// Relative tolerance for span membership and ideal verification.
pub const IDEAL_TOL: f64 = 1e-8;

/// `AB − BA`.
pub fn bracket(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    b.require_shape(n, n)?;
    Ok(a.commutator(b))
}

/// Frobenius inner product `tr(B*·A)`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.as_dmatrix().dotc(b.as_dmatrix()).conj()
}

/// A subspace of so(n) with a Frobenius-orthonormal basis.
#[derive(Debug, Clone)]
pub struct IdealSubspace {
    pub n: usize,
    pub basis: Vec<ComplexMatrix>,
    /// Set once [`is_lie_ideal`] has confirmed bracket closure.
    pub verified: bool,
}

impl IdealSubspace {
    pub fn zero(n: usize) -> Self {
        IdealSubspace { n, basis: Vec::new(), verified: false }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::zero(n);
        for f in skew_basis(n) {
            s.try_extend(&f);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `X` minus its orthogonal projection onto the span.
    pub fn residual(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut r = x.clone();
        // two passes for orthogonality to working precision
        for _ in 0..2 {
            for b in &self.basis {
                let c = frobenius_inner(&r, b);
                r -= &b.scale(c);
            }
        }
        r
    }

    /// Distance of `X` from the span, in Frobenius norm.
    pub fn distance(&self, x: &ComplexMatrix) -> f64 {
        self.residual(x).frobenius_norm()
    }

    /// Adds the part of `X` orthogonal to the span if it is not negligible
    /// relative to `‖X‖`. Returns whether the dimension grew.
    pub fn try_extend(&mut self, x: &ComplexMatrix) -> bool {
        let norm = x.frobenius_norm();
        if norm == 0.0 {
            return false;
        }
        let r = self.residual(x);
        let rn = r.frobenius_norm();
        if rn <= IDEAL_TOL * norm {
            return false;
        }
        self.basis.push(r.scale_real(1.0 / rn));
        self.verified = false;
        true
    }
}

fn check_generator(x: &ComplexMatrix, n: usize, tol: &ToleranceProfile) -> Result<()> {
    x.require_shape(n, n)?;
    if !is_member(x, &Conjugation::canonical(n), tol)? {
        let residual = (x + &x.transpose()).frobenius_norm();
        return Err(Error::Membership { residual, threshold: tol.member_threshold(x.frobenius_norm()) });
    }
    Ok(())
}

/// The smallest ideal of so(n) containing the generators: the span is
/// saturated with brackets `[F_{jk}, X]` until its dimension stops growing.
/// By linearity it suffices to bracket each orthonormal basis vector once.
pub fn ideal_closure(generators: &[ComplexMatrix], n: usize, tol: &ToleranceProfile) -> Result<IdealSubspace> {
    let mut s = IdealSubspace::zero(n);
    for g in generators {
        check_generator(g, n, tol)?;
        s.try_extend(g);
    }
    let basis = skew_basis(n);
    let full = basis.len();
    let mut next = 0;
    while next < s.dim() && s.dim() < full {
        let x = s.basis[next].clone();
        next += 1;
        for f in &basis {
            s.try_extend(&f.commutator(&x));
        }
    }
    s.verified = is_lie_ideal(&s);
    Ok(s)
}

/// Largest relative residual `‖[F, X] − proj [F, X]‖ / (‖F‖·‖X‖)` over the
/// basis `F` of so(n) and the basis `X` of the subspace.
pub fn ideal_defect(s: &IdealSubspace) -> f64 {
    let mut worst: f64 = 0.0;
    for f in skew_basis(s.n) {
        for x in &s.basis {
            let scale = f.frobenius_norm() * x.frobenius_norm();
            worst = worst.max(s.distance(&f.commutator(x)) / scale);
        }
    }
    worst
}

pub fn is_lie_ideal(s: &IdealSubspace) -> bool {
    ideal_defect(s) <= IDEAL_TOL
}

/// The trace-orthogonal complement of the subspace inside so(n).
pub fn orthogonal_complement(s: &IdealSubspace) -> IdealSubspace {
    let mut joint = s.clone();
    let start = joint.dim();
    for f in skew_basis(s.n) {
        joint.try_extend(&f);
    }
    let mut c = IdealSubspace { n: s.n, basis: joint.basis.split_off(start), verified: false };
    c.verified = is_lie_ideal(&c);
    c
}

/// `max ‖[X, Y]‖_F` over the two bases.
pub fn max_cross_bracket(a: &IdealSubspace, b: &IdealSubspace) -> f64 {
    a.basis.iter().flat_map(|x| b.basis.iter().map(move |y| x.commutator(y).frobenius_norm())).fold(0.0, f64::max)
}

/// `max |⟨X, Y⟩|` over the two bases.
pub fn max_cross_inner(a: &IdealSubspace, b: &IdealSubspace) -> f64 {
    a.basis.iter().flat_map(|x| b.basis.iter().map(move |y| frobenius_inner(x, y).norm())).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{dense_skew, instance_rng};
    use crate::skew::skew_generator;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn bracket_examples() {
        let (f12, f13, f23) = (skew_generator(3, 0, 1), skew_generator(3, 0, 2), skew_generator(3, 1, 2));
        assert_eq!(bracket(&f12, &f13).unwrap(), -f23);
        assert_eq!(bracket(&f12, &f12).unwrap(), ComplexMatrix::zeros(3, 3));
        let f = skew_generator(2, 0, 1);
        assert_eq!(bracket(&f, &f).unwrap(), ComplexMatrix::zeros(2, 2));
        assert!(matches!(bracket(&f, &f12), Err(Error::Dimension(_))));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(ideal_closure(&[skew_generator(3, 0, 1)], 3, &tol()).unwrap().dim(), 3);

        let seed = &skew_generator(4, 0, 1) + &skew_generator(4, 2, 3);
        let ideal = ideal_closure(&[seed], 4, &tol()).unwrap();
        assert_eq!(ideal.dim(), 3);
        assert!(ideal.verified);
        let complement = orthogonal_complement(&ideal);
        assert_eq!(complement.dim(), 3);
        assert!(complement.verified);
        assert!(max_cross_bracket(&ideal, &complement) < 1e-10);
        assert!(max_cross_inner(&ideal, &complement) < 1e-12);

        let mut rng = instance_rng(4, 0);
        assert_eq!(ideal_closure(&[dense_skew(4, &mut rng)], 4, &tol()).unwrap().dim(), 6);
    }

    #[test]
    fn closure_rejects_non_skew() {
        assert!(matches!(ideal_closure(&[ComplexMatrix::identity(3)], 3, &tol()), Err(Error::Membership { .. })));
    }

    #[test]
    fn ideal_checks() {
        assert!(is_lie_ideal(&IdealSubspace::full(4)));
        assert!(is_lie_ideal(&IdealSubspace::zero(4)));
        let mut line = IdealSubspace::zero(3);
        line.try_extend(&skew_generator(3, 0, 1));
        assert!(!is_lie_ideal(&line));
    }

    #[test]
    fn closure_is_monotone() {
        let mut rng = instance_rng(8, 0);
        let seed = &skew_generator(4, 0, 1) + &skew_generator(4, 2, 3);
        let small = ideal_closure(std::slice::from_ref(&seed), 4, &tol()).unwrap().dim();
        let big = ideal_closure(&[seed, dense_skew(4, &mut rng)], 4, &tol()).unwrap().dim();
        assert!(big >= small);
    }
}
