//! Spectra with multiplicities, Riesz idempotents and the exceptional set Ξ.
//!
//! Raw eigenvalues are grouped into clusters before any multiplicity logic
//! runs. A defective eigenvalue of a computed matrix does not come back as a
//! repeated value but as a small ring of radius about `(ε·‖M‖)^{1/k}·‖M‖^{1−1/k}`
//! for a Jordan block of size `k`, so besides single linkage at the cluster
//! radius, [`cluster_values`] also accepts a group of `k` values whose
//! diameter is consistent with that scatter (see [`defect_diameter`]).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{eigenvalues, rank_tol, svd_values, ComplexMatrix, ToleranceProfile};
use crate::setgeom::{distinct_pair_sum, lex_cmp, PointSet};
use crate::skew::SkewElement;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Distinct eigenvalues with algebraic multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSet {
    pub points: Vec<SpectralPoint>,
    pub cluster_radius: f64,
}

impl SpectrumSet {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn distinct_values(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::new(self.distinct_values(), self.cluster_radius)
    }

    /// Index of the cluster nearest to `z` and its distance.
    pub fn nearest(&self, z: Complex64) -> Option<(usize, f64)> {
        self.points.iter().enumerate().map(|(k, p)| (k, (p.value - z).norm())).min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn multiplicity_at(&self, z: Complex64) -> usize {
        match self.nearest(z) {
            Some((k, d)) if d <= self.cluster_radius => self.points[k].multiplicity,
            _ => 0,
        }
    }
}

/// Backward error, in units of `dim·ε·‖M‖`, assumed when judging whether a
/// group of eigenvalues is the scatter of one defective eigenvalue.
pub const DEFECT_BACKWARD_FACTOR: f64 = 1e3;

/// Largest diameter of `k` computed eigenvalues still attributed to one
/// eigenvalue of algebraic multiplicity `k` for a matrix of the given
/// dimension and norm.
pub fn defect_diameter(k: usize, dim: usize, norm: f64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    let delta = DEFECT_BACKWARD_FACTOR * dim as f64 * f64::EPSILON;
    2.0 * delta.powf(1.0 / k as f64) * norm
}

struct Node {
    members: Vec<usize>,
    height: f64,
    children: Option<(usize, usize)>,
}

/// Groups values into clusters reported at their centroids.
///
/// Builds the single-linkage dendrogram and takes, top-down, the coarsest
/// nodes that are acceptable: either every linkage inside is at most
/// `radius`, or (with `defect` set to `Some((dim, norm))`) the node's
/// diameter is within [`defect_diameter`] for its size.
pub fn cluster_values(values: &[Complex64], radius: f64, defect: Option<(usize, f64)>) -> Vec<SpectralPoint> {
    let n = values.len();
    let mut nodes: Vec<Node> = (0..n).map(|k| Node { members: vec![k], height: 0.0, children: None }).collect();
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(((values[i] - values[j]).norm(), i, j));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    // union-find over dendrogram node ids
    let mut owner: Vec<usize> = (0..n).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (d, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        let (a, b) = (owner[ri], owner[rj]);
        let mut members = nodes[a].members.clone();
        members.extend_from_slice(&nodes[b].members);
        nodes.push(Node { members, height: d, children: Some((a, b)) });
        parent[rj] = ri;
        owner[ri] = nodes.len() - 1;
    }
    let diameter = |members: &[usize]| {
        let mut d: f64 = 0.0;
        for (x, &p) in members.iter().enumerate() {
            for &q in &members[x + 1..] {
                d = d.max((values[p] - values[q]).norm());
            }
        }
        d
    };
    let acceptable = |node: &Node| {
        node.height <= radius
            || defect
                .is_some_and(|(dim, norm)| diameter(&node.members) <= defect_diameter(node.members.len(), dim, norm))
    };
    let mut roots: Vec<usize> = (0..n).map(|k| owner[find(&mut parent, k)]).collect();
    roots.sort_unstable();
    roots.dedup();
    let mut stack = roots;
    let mut out = Vec::new();
    while let Some(id) = stack.pop() {
        let node = &nodes[id];
        match node.children {
            Some((a, b)) if !acceptable(node) => {
                stack.push(a);
                stack.push(b);
            }
            _ => {
                let sum: Complex64 = node.members.iter().map(|&k| values[k]).sum();
                out.push(SpectralPoint { value: sum / node.members.len() as f64, multiplicity: node.members.len() });
            }
        }
    }
    sort_points(&mut out, radius);
    out
}

/// Lexicographic by (real, imaginary) part, comparing on a grid of spacing
/// `radius` so that rounding noise does not reorder values.
fn sort_points(points: &mut [SpectralPoint], radius: f64) {
    let q = radius.max(f64::MIN_POSITIVE);
    let key = |z: Complex64| ((z.re / q).round() as i64, (z.im / q).round() as i64);
    points.sort_by(|a, b| key(a.value).cmp(&key(b.value)).then(lex_cmp(&a.value, &b.value)));
}

pub(crate) fn spectrum_with_raw(t: &ComplexMatrix, tol: &ToleranceProfile) -> Result<(SpectrumSet, Vec<Complex64>)> {
    tol.validate()?;
    let n = t.require_square()?;
    let raw = eigenvalues(t)?;
    let max_abs = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = tol.cluster_radius(max_abs);
    let defect = if tol.defect_merge {
        let norm = svd_values(t)?.first().copied().unwrap_or(0.0);
        Some((n, norm))
    } else {
        None
    };
    let points = cluster_values(&raw, radius, defect);
    Ok((SpectrumSet { points, cluster_radius: radius }, raw))
}

/// Clustered spectrum of a square matrix.
pub fn spectrum(t: &ComplexMatrix, tol: &ToleranceProfile) -> Result<SpectrumSet> {
    spectrum_with_raw(t, tol).map(|(s, _)| s)
}

/// Whether the spectrum, with multiplicities, is invariant under `λ ↦ −λ`.
pub fn check_symmetric_spectrum(t: &ComplexMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let s = spectrum(t, tol)?;
    Ok(s.points.iter().all(|p| {
        s.points.iter().any(|q| (q.value + p.value).norm() <= s.cluster_radius && q.multiplicity == p.multiplicity)
    }))
}

/// `E = (1/2πi)∮(ζ − T)⁻¹ dζ` over the circle of radius `r` about `z`, by the
/// trapezoidal rule with `tol.contour_points` nodes:
/// `E ≈ (1/N)·Σ_k r·ω_k·(ζ_k − T)⁻¹`, `ζ_k = z + r·ω_k`, `ω_k = e^{2πik/N}`.
pub fn riesz_idempotent(t: &ComplexMatrix, z: Complex64, r: f64, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    let n = t.require_square()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Parameter(format!("contour radius must be positive, got {r}")));
    }
    let (spec, raw) = spectrum_with_raw(t, tol)?;
    let touches = || Error::ContourTouchesSpectrum { center: format!("{z}"), radius: r };
    let enclosed: Vec<&SpectralPoint> = spec.points.iter().filter(|p| (p.value - z).norm() <= r).collect();
    if enclosed.len() != 1 {
        return Err(touches());
    }
    // raw eigenvalues of the enclosed cluster inside, all others outside
    let inside = raw.iter().filter(|&&l| (l - z).norm() < r).count();
    if inside != enclosed[0].multiplicity {
        return Err(touches());
    }
    let nodes = tol.contour_points;
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in 0..nodes {
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / nodes as f64);
        let zeta = z + omega * r;
        if raw.iter().any(|&l| (l - zeta).norm() <= tol.atol) {
            return Err(Error::SingularResolvent { node: format!("{zeta}") });
        }
        let resolvent = (-t.shift(zeta)).inverse().map_err(|_| Error::SingularResolvent { node: format!("{zeta}") })?;
        acc += &resolvent.scale(omega * r);
    }
    Ok(acc.scale_real(1.0 / nodes as f64))
}

/// Contour radius used when none is given: half the distance from `z` to the
/// nearest cluster other than the one nearest `z`, or `max(1, ‖T‖)/2` when
/// there is no other cluster.
pub fn default_contour_radius(spec: &SpectrumSet, z: Complex64, scale: f64) -> f64 {
    let own = spec.nearest(z).map(|(k, _)| k);
    let gap = spec
        .points
        .iter()
        .enumerate()
        .filter(|(k, _)| Some(*k) != own)
        .map(|(_, p)| (p.value - z).norm())
        .fold(f64::INFINITY, f64::min);
    if gap.is_finite() {
        gap / 2.0
    } else {
        scale.max(1.0) / 2.0
    }
}

/// Riesz idempotent with [`default_contour_radius`].
pub fn riesz_projection(t: &ComplexMatrix, z: Complex64, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    let spec = spectrum(t, tol)?;
    let scale = svd_values(t)?.first().copied().unwrap_or(0.0);
    riesz_idempotent(t, z, default_contour_radius(&spec, z, scale), tol)
}

/// `dim H(z; T)`: the algebraic multiplicity of the cluster at `z`, or 0.
pub fn riesz_dim(t: &ComplexMatrix, z: Complex64, tol: &ToleranceProfile) -> Result<usize> {
    Ok(spectrum(t, tol)?.multiplicity_at(z))
}

/// The exceptional spectral points of a skew matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct XiSet {
    pub values: Vec<Complex64>,
}

impl XiSet {
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn doubled(&self) -> Vec<Complex64> {
        self.values.iter().map(|z| z * 2.0).collect()
    }
}

/// `Ξ(T) = {z ∈ σ(T) : rank (T − z)² = n − 1 and 2z is not a sum of two
/// distinct points of σ(T)}`.
pub fn xi_set(t: &SkewElement, tol: &ToleranceProfile) -> Result<XiSet> {
    xi_of_matrix(t.matrix(), &spectrum(t.matrix(), tol)?, tol)
}

pub(crate) fn xi_of_matrix(t: &ComplexMatrix, spec: &SpectrumSet, tol: &ToleranceProfile) -> Result<XiSet> {
    let n = t.require_square()?;
    if n < 2 {
        return Err(Error::Parameter("the exceptional set needs n >= 2".into()));
    }
    let points = spec.to_point_set();
    let mut values = Vec::new();
    for p in &spec.points {
        let z = p.value;
        if distinct_pair_sum(&points, z * 2.0).is_some() {
            continue;
        }
        let shifted = t.shift(z);
        if rank_tol(&(&shifted * &shifted), tol)? == n - 1 {
            values.push(z);
        }
    }
    Ok(XiSet { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c64, I};
    use crate::skew::skew_generator;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn sample_t() -> ComplexMatrix {
        skew_generator(3, 0, 1).scale(I)
    }

    fn assert_points(s: &SpectrumSet, expected: &[(Complex64, usize)]) {
        assert_eq!(s.points.len(), expected.len(), "{s:?}");
        for &(v, m) in expected {
            assert_eq!(s.multiplicity_at(v), m, "{v} in {s:?}");
        }
    }

    #[test]
    fn spectrum_examples() {
        let f = skew_generator(2, 0, 1);
        assert_points(&spectrum(&f, &tol()).unwrap(), &[(I, 1), (-I, 1)]);
        assert_points(&spectrum(&f.scale(I), &tol()).unwrap(), &[(c64(1.0, 0.0), 1), (c64(-1.0, 0.0), 1)]);
        assert_points(&spectrum(&ComplexMatrix::zeros(3, 3), &tol()).unwrap(), &[(c64(0.0, 0.0), 3)]);
    }

    #[test]
    fn spectrum_orders_lexicographically() {
        let s = spectrum(&sample_t(), &tol()).unwrap();
        let v: Vec<f64> = s.distinct_values().iter().map(|z| z.re).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]), "{v:?}");
    }

    #[test]
    fn defective_eigenvalue_is_regrouped() {
        // 4x4 Jordan block: computed eigenvalues scatter at ~ε^{1/4}
        let j = ComplexMatrix::from_fn(4, 4, |i, k| if k == i + 1 { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let s = spectrum(&j, &tol()).unwrap();
        assert_points(&s, &[(c64(0.0, 0.0), 4)]);
        let loose = ToleranceProfile { defect_merge: false, ..tol() };
        // without regrouping the scatter may or may not be visible, but the
        // multiplicities still add up
        assert_eq!(spectrum(&j, &loose).unwrap().total_multiplicity(), 4);
    }

    #[test]
    fn cluster_values_keeps_separated_points() {
        let v = [c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0 + 1e-12, 0.0), c64(0.0, 1.0)];
        let c = cluster_values(&v, 1e-9, None);
        assert_eq!(c.len(), 3);
        assert_eq!(c.iter().map(|p| p.multiplicity).sum::<usize>(), 4);
    }

    #[test]
    fn symmetric_spectrum_examples() {
        assert!(check_symmetric_spectrum(&sample_t(), &tol()).unwrap());
        let d = ComplexMatrix::diagonal(&[c64(1.0, 0.0), c64(2.0, 0.0)]);
        assert!(!check_symmetric_spectrum(&d, &tol()).unwrap());
    }

    #[test]
    fn riesz_examples() {
        let d = ComplexMatrix::diagonal(&[c64(1.0, 0.0), c64(2.0, 0.0)]);
        let e = riesz_idempotent(&d, c64(1.0, 0.0), 0.4, &tol()).unwrap();
        let expected = ComplexMatrix::diagonal(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert!((&e - &expected).max_abs() < 1e-10, "{e:?}");

        let jordan = ComplexMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let e = riesz_idempotent(&jordan, c64(1.0, 0.0), 0.5, &tol()).unwrap();
        assert!((&e - &ComplexMatrix::identity(2)).max_abs() < 1e-10);

        let e = riesz_idempotent(&sample_t(), c64(1.0, 0.0), 0.4, &tol()).unwrap();
        assert_eq!(rank_tol(&e, &tol()).unwrap(), 1);
    }

    #[test]
    fn riesz_precondition_errors() {
        let d = ComplexMatrix::diagonal(&[c64(1.0, 0.0), c64(2.0, 0.0)]);
        assert!(matches!(riesz_idempotent(&d, c64(1.0, 0.0), 1.5, &tol()), Err(Error::ContourTouchesSpectrum { .. })));
        assert!(matches!(riesz_idempotent(&d, c64(5.0, 0.0), 0.5, &tol()), Err(Error::ContourTouchesSpectrum { .. })));
        // a node lands on the eigenvalue 2
        assert!(matches!(
            riesz_idempotent(&d, c64(1.0, 0.0), 1.0, &tol()),
            Err(Error::SingularResolvent { .. }) | Err(Error::ContourTouchesSpectrum { .. })
        ));
    }

    #[test]
    fn riesz_dim_examples() {
        let d = ComplexMatrix::diagonal(&[c64(1.0, 0.0), c64(1.0, 0.0), c64(2.0, 0.0)]);
        assert_eq!(riesz_dim(&d, c64(1.0, 0.0), &tol()).unwrap(), 2);
        let j = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(riesz_dim(&j, c64(0.0, 0.0), &tol()).unwrap(), 2);
        assert_eq!(riesz_dim(&sample_t(), c64(1.0, 0.0), &tol()).unwrap(), 1);
        assert_eq!(riesz_dim(&sample_t(), c64(7.0, 0.0), &tol()).unwrap(), 0);
    }

    #[test]
    fn xi_examples() {
        let t = SkewElement::canonical(sample_t(), &tol()).unwrap();
        let xi = xi_set(&t, &tol()).unwrap();
        let mut v: Vec<f64> = xi.values.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        assert_eq!(v.len(), 2);
        assert!((v[0] + 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);

        let zero = SkewElement::canonical(ComplexMatrix::zeros(4, 4), &tol()).unwrap();
        assert!(xi_set(&zero, &tol()).unwrap().is_empty());

        let coeffs = [I, c64(0.0, 2.0), c64(0.0, 2.0)];
        let t7 = crate::generate::block_sums(7, &coeffs).unwrap();
        let t7 = SkewElement::canonical(t7, &tol()).unwrap();
        assert!(xi_set(&t7, &tol()).unwrap().is_empty());
    }
}
