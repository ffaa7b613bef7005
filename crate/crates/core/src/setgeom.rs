//! Finite complex point sets and the boundary sum property of planar regions.
//!
//! A [`PointSet`] is a deduplicated list of representatives: two values closer
//! than the merge radius are the same point. Spectra, sum sets and the set of
//! doubled exceptional points are all handled as point sets.
//!
//! For a bounded connected open set `Ω` every sum `z₁ + z₂` of two points of
//! `Ω` is also a sum `b₁ + b₂` of two boundary points. With `w = z₁ + z₂` the
//! point reflection `h(z) = w − z` maps `Ω` onto a set meeting `Ω`, so
//! `∂Ω ∩ h(∂Ω)` is nonempty, and any `b₁` in it gives `b₂ = w − b₁ ∈ ∂Ω`.
//! [`boundary_sum_property`] checks this on sampled interior pairs by
//! intersecting the boundary with its reflection.

use std::collections::{BTreeSet, VecDeque};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::c64;

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    values: Vec<Complex64>,
    tol: f64,
}

/// Total order on complex numbers: real part, then imaginary part.
pub fn lex_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl PointSet {
    /// Greedy deduplication: values are visited in lexicographic order and a
    /// value is kept unless it lies within `tol` of an already kept one.
    pub fn new(values: impl IntoIterator<Item = Complex64>, tol: f64) -> Self {
        let mut sorted: Vec<Complex64> = values.into_iter().collect();
        sorted.sort_by(lex_cmp);
        let mut kept: Vec<Complex64> = Vec::with_capacity(sorted.len());
        for z in sorted {
            if kept.iter().all(|k| (k - z).norm() > tol) {
                kept.push(z);
            }
        }
        PointSet { values: kept, tol }
    }

    pub fn empty(tol: f64) -> Self {
        PointSet { values: Vec::new(), tol }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.values.iter().any(|v| (v - z).norm() <= self.tol)
    }

    pub fn negated(&self) -> PointSet {
        PointSet::new(self.values.iter().map(|z| -z), self.tol)
    }

    /// Representatives lying within `radius` of none of `remove`.
    pub fn without(&self, remove: &[Complex64], radius: f64) -> PointSet {
        PointSet {
            values: self.values.iter().copied().filter(|v| remove.iter().all(|r| (v - r).norm() > radius)).collect(),
            tol: self.tol,
        }
    }

    /// Whether every representative lies within `radius` of a point of `other`.
    pub fn is_subset_of(&self, other: &PointSet, radius: f64) -> bool {
        self.values.iter().all(|v| other.values.iter().any(|w| (v - w).norm() <= radius))
    }
}

/// `{a + b}` deduplicated at `max(A.tol, B.tol)`.
pub fn sumset(a: &PointSet, b: &PointSet) -> PointSet {
    let tol = a.tol.max(b.tol);
    PointSet::new(a.values.iter().flat_map(|x| b.values.iter().map(move |y| x + y)), tol)
}

/// A pair of distinct representatives `z₁ ≠ z₂` with `|z₁ + z₂ − t| ≤ tol`,
/// searched exhaustively over ordered pairs.
pub fn distinct_pair_sum(s: &PointSet, t: Complex64) -> Option<(Complex64, Complex64)> {
    let v = &s.values;
    for i in 0..v.len() {
        for j in 0..v.len() {
            if i != j && (v[i] + v[j] - t).norm() <= s.tol {
                return Some((v[i], v[j]));
            }
        }
    }
    None
}

/// `S = −S`: negation maps each representative within `tol` of another.
pub fn neg_symmetric(s: &PointSet) -> bool {
    s.values.iter().all(|z| s.values.iter().any(|w| (w + z).norm() <= s.tol))
}

/// Hausdorff distance between the representative sets (`0` for two empty
/// sets, `∞` when exactly one is empty).
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let directed = |x: &[Complex64], y: &[Complex64]| {
        x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// A closed segment in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Complex64,
    pub b: Complex64,
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

fn dot(u: Complex64, v: Complex64) -> f64 {
    u.re * v.re + u.im * v.im
}

impl Segment {
    pub fn reflected(&self, w: Complex64) -> Segment {
        Segment { a: w - self.a, b: w - self.b }
    }

    pub fn distance_to(&self, p: Complex64) -> f64 {
        let d = self.b - self.a;
        let len2 = d.norm_sqr();
        if len2 == 0.0 {
            return (p - self.a).norm();
        }
        let t = (dot(p - self.a, d) / len2).clamp(0.0, 1.0);
        (p - (self.a + d * t)).norm()
    }

    /// A point common to both segments, if they meet within `eps`.
    pub fn intersection(&self, other: &Segment, eps: f64) -> Option<Complex64> {
        let r = self.b - self.a;
        let s = other.b - other.a;
        let denom = cross(r, s);
        let qp = other.a - self.a;
        if denom.abs() > 1e-14 * r.norm() * s.norm() {
            let t = cross(qp, s) / denom;
            let u = cross(qp, r) / denom;
            let slack_t = eps / r.norm().max(f64::MIN_POSITIVE);
            let slack_u = eps / s.norm().max(f64::MIN_POSITIVE);
            if (-slack_t..=1.0 + slack_t).contains(&t) && (-slack_u..=1.0 + slack_u).contains(&u) {
                return Some(self.a + r * t.clamp(0.0, 1.0));
            }
            return None;
        }
        // parallel: any endpoint lying on the other segment
        [other.a, other.b]
            .into_iter()
            .find(|&p| self.distance_to(p) <= eps)
            .or_else(|| [self.a, self.b].into_iter().find(|&p| other.distance_to(p) <= eps))
    }
}

/// Bounded planar region given by its boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanarRegion {
    /// A finite set, equal to its own boundary.
    FinitePoints(Vec<Complex64>),
    /// Closed, non-self-intersecting vertex chain; the interior is the
    /// bounded component of its complement.
    Polygon(Vec<Complex64>),
    /// A connected union of closed unit cells `[i, i+1] × [j, j+1]` scaled by
    /// `cell`; the boundary is made of the cell edges not shared by two cells.
    Grid { cells: BTreeSet<(i64, i64)>, cell: f64 },
}

impl PlanarRegion {
    pub fn polygon(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateRegion);
        }
        Ok(PlanarRegion::Polygon(vertices))
    }

    /// Regular `k`-gon inscribed in the circle of radius `r` about `center`.
    pub fn regular_polygon(center: Complex64, r: f64, k: usize) -> Result<Self> {
        let vertices =
            (0..k).map(|j| center + Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / k as f64)).collect();
        Self::polygon(vertices)
    }

    pub fn grid(cells: impl IntoIterator<Item = (i64, i64)>, cell: f64) -> Result<Self> {
        let cells: BTreeSet<(i64, i64)> = cells.into_iter().collect();
        if cells.is_empty() || cell.is_nan() || cell <= 0.0 {
            return Err(Error::DegenerateRegion);
        }
        if !grid_connected(&cells) {
            return Err(Error::Parameter("grid cells must form a connected region".into()));
        }
        Ok(PlanarRegion::Grid { cells, cell })
    }

    pub fn boundary_segments(&self) -> Vec<Segment> {
        match self {
            PlanarRegion::FinitePoints(points) => points.iter().map(|&p| Segment { a: p, b: p }).collect(),
            PlanarRegion::Polygon(v) => (0..v.len()).map(|k| Segment { a: v[k], b: v[(k + 1) % v.len()] }).collect(),
            PlanarRegion::Grid { cells, cell } => {
                let h = *cell;
                let pt = |i: i64, j: i64| c64(i as f64 * h, j as f64 * h);
                let mut out = Vec::new();
                for &(i, j) in cells {
                    if !cells.contains(&(i, j - 1)) {
                        out.push(Segment { a: pt(i, j), b: pt(i + 1, j) });
                    }
                    if !cells.contains(&(i, j + 1)) {
                        out.push(Segment { a: pt(i, j + 1), b: pt(i + 1, j + 1) });
                    }
                    if !cells.contains(&(i - 1, j)) {
                        out.push(Segment { a: pt(i, j), b: pt(i, j + 1) });
                    }
                    if !cells.contains(&(i + 1, j)) {
                        out.push(Segment { a: pt(i + 1, j), b: pt(i + 1, j + 1) });
                    }
                }
                out
            }
        }
    }

    fn boundary_points(&self) -> Vec<Complex64> {
        self.boundary_segments().iter().flat_map(|s| [s.a, s.b]).collect()
    }

    pub fn diameter(&self) -> f64 {
        let pts = self.boundary_points();
        let mut d: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                d = d.max((p - q).norm());
            }
        }
        d
    }

    pub fn has_interior(&self) -> bool {
        !matches!(self, PlanarRegion::FinitePoints(_))
    }

    fn distance_to_boundary(&self, p: Complex64) -> f64 {
        self.boundary_segments().iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Whether `p` is an interior point at distance more than `margin` from
    /// the boundary.
    pub fn contains_interior(&self, p: Complex64, margin: f64) -> bool {
        let inside = match self {
            PlanarRegion::FinitePoints(_) => false,
            PlanarRegion::Polygon(v) => point_in_polygon(v, p),
            PlanarRegion::Grid { cells, cell } => {
                cells.contains(&((p.re / cell).floor() as i64, (p.im / cell).floor() as i64))
            }
        };
        inside && self.distance_to_boundary(p) > margin
    }

    /// A random point of the region: an interior point when the interior is
    /// nonempty, otherwise one of the points of a finite set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Complex64> {
        match self {
            PlanarRegion::FinitePoints(points) => {
                if points.is_empty() {
                    return Err(Error::DegenerateRegion);
                }
                Ok(points[rng.random_range(0..points.len())])
            }
            PlanarRegion::Polygon(v) => {
                let (lo, hi) = bounding_box(v);
                let margin = 1e-9 * (hi - lo).norm();
                for _ in 0..100_000 {
                    let p = c64(rng.random_range(lo.re..hi.re), rng.random_range(lo.im..hi.im));
                    if self.contains_interior(p, margin) {
                        return Ok(p);
                    }
                }
                Err(Error::DegenerateRegion)
            }
            PlanarRegion::Grid { cells, cell } => {
                let idx = rng.random_range(0..cells.len());
                let &(i, j) = cells.iter().nth(idx).expect("index in range");
                // stay off the cell edges
                let u: f64 = rng.random_range(0.01..0.99);
                let v: f64 = rng.random_range(0.01..0.99);
                Ok(c64((i as f64 + u) * cell, (j as f64 + v) * cell))
            }
        }
    }
}

fn bounding_box(v: &[Complex64]) -> (Complex64, Complex64) {
    let lo = v.iter().fold(c64(f64::INFINITY, f64::INFINITY), |a, p| c64(a.re.min(p.re), a.im.min(p.im)));
    let hi = v.iter().fold(c64(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| c64(a.re.max(p.re), a.im.max(p.im)));
    (lo, hi)
}

fn point_in_polygon(v: &[Complex64], p: Complex64) -> bool {
    let mut inside = false;
    let n = v.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if p.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn grid_connected(cells: &BTreeSet<(i64, i64)>) -> bool {
    let Some(&start) = cells.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((i, j)) = queue.pop_front() {
        for nb in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
            if cells.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen.len() == cells.len()
}

/// Two boundary points with `b₁ + b₂ = w`, found by intersecting the
/// boundary with its point reflection `z ↦ w − z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPair {
    pub b1: Complex64,
    pub b2: Complex64,
    /// `|b₁ + b₂ − w|`.
    pub defect: f64,
}

/// Searches `∂Ω ∩ (w − ∂Ω)`; `eps` is the distance at which two segments
/// count as meeting.
pub fn boundary_pair_for_sum(region: &PlanarRegion, w: Complex64, eps: f64) -> Result<Option<BoundaryPair>> {
    let segments = region.boundary_segments();
    if segments.is_empty() {
        return Err(Error::DegenerateRegion);
    }
    let mut best: Option<BoundaryPair> = None;
    for s in &segments {
        for t in &segments {
            let reflected = t.reflected(w);
            if let Some(b1) = s.intersection(&reflected, eps) {
                // b1 on s and (approximately) on w − t, so b2 = nearest point of t to w − b1
                let b2 = nearest_on_segment(t, w - b1);
                let defect = (b1 + b2 - w).norm();
                if best.is_none_or(|b| defect < b.defect) {
                    best = Some(BoundaryPair { b1, b2, defect });
                }
                if defect == 0.0 {
                    return Ok(best);
                }
            }
        }
    }
    Ok(best)
}

fn nearest_on_segment(s: &Segment, p: Complex64) -> Complex64 {
    let d = s.b - s.a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return s.a;
    }
    s.a + d * (dot(p - s.a, d) / len2).clamp(0.0, 1.0)
}

/// One checked interior pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumCertificate {
    pub z1: Complex64,
    pub z2: Complex64,
    pub pair: BoundaryPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySumReport {
    pub holds: bool,
    pub certificates: Vec<SumCertificate>,
    /// First sampled pair with no boundary realization within tolerance.
    pub failure: Option<(Complex64, Complex64)>,
    /// Largest `|b₁ + b₂ − (z₁ + z₂)| / diameter` over the certificates.
    pub max_relative_defect: f64,
}

/// Samples `samples` pairs of points of the region and realizes each sum as a
/// sum of two boundary points within `tol·diameter`.
pub fn boundary_sum_property<R: Rng + ?Sized>(
    region: &PlanarRegion,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<BoundarySumReport> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample pair".into()));
    }
    let segments = region.boundary_segments();
    if segments.is_empty() {
        return Err(Error::DegenerateRegion);
    }
    let diameter = region.diameter();
    let allowed = tol * diameter.max(f64::MIN_POSITIVE);
    let mut report = BoundarySumReport {
        holds: true,
        certificates: Vec::with_capacity(samples),
        failure: None,
        max_relative_defect: 0.0,
    };
    for _ in 0..samples {
        let z1 = region.sample(rng)?;
        let z2 = region.sample(rng)?;
        match boundary_pair_for_sum(region, z1 + z2, allowed)? {
            Some(pair) if pair.defect <= allowed => {
                let rel = pair.defect / diameter.max(f64::MIN_POSITIVE);
                report.max_relative_defect = report.max_relative_defect.max(rel);
                report.certificates.push(SumCertificate { z1, z2, pair });
            }
            _ => {
                report.holds = false;
                report.failure.get_or_insert((z1, z2));
            }
        }
    }
    Ok(report)
}

/// Distinct boundary points `b₁ ≠ b₂` with `b₁ + b₂ = 2z` for an interior
/// point `z` (distinct because `z` itself is not on the boundary).
pub fn distinct_boundary_pair(region: &PlanarRegion, z: Complex64, tol: f64) -> Result<Option<BoundaryPair>> {
    let allowed = tol * region.diameter();
    Ok(boundary_pair_for_sum(region, z * 2.0, allowed)?
        .filter(|p| p.defect <= allowed && (p.b1 - p.b2).norm() > allowed))
}

/// Star-shaped polygon with `k` vertices at sorted random angles and random
/// radii in `[0.3, 1]`; generally non-convex.
pub fn random_star_polygon<R: Rng + ?Sized>(k: usize, rng: &mut R) -> PlanarRegion {
    let mut angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let vertices = angles.into_iter().map(|a| Complex64::from_polar(rng.random_range(0.3..1.0), a)).collect();
    PlanarRegion::Polygon(vertices)
}

/// Connected grid region grown from the origin by `cells − 1` random
/// attachments to existing cells.
pub fn random_grid_region<R: Rng + ?Sized>(cells: usize, rng: &mut R) -> PlanarRegion {
    let mut set = BTreeSet::from([(0i64, 0i64)]);
    let mut list = vec![(0i64, 0i64)];
    while set.len() < cells.max(1) {
        let (i, j) = list[rng.random_range(0..list.len())];
        let nb = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)][rng.random_range(0..4)];
        if set.insert(nb) {
            list.push(nb);
        }
    }
    PlanarRegion::Grid { cells: set, cell: 1.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::instance_rng;

    fn pts(v: &[(f64, f64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(a, b)| c64(a, b)), 1e-9)
    }

    fn reals(s: &PointSet) -> Vec<f64> {
        s.values().iter().map(|z| z.re).collect()
    }

    #[test]
    fn sumset_examples() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(reals(&sumset(&a, &a)), vec![0.0, 1.0, 2.0]);
        let b = pts(&[(1.0, 0.0), (-1.0, 0.0), (2.0, 0.0), (-2.0, 0.0)]);
        assert_eq!(reals(&sumset(&b, &b)), vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(sumset(&PointSet::empty(1e-9), &a).is_empty());
    }

    #[test]
    fn distinct_pair_sum_examples() {
        let s = pts(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]);
        assert_eq!(distinct_pair_sum(&s, c64(2.0, 0.0)), None);
        let (a, b) = distinct_pair_sum(&s, c64(0.0, 0.0)).unwrap();
        assert!((a + b).norm() < 1e-12 && a != b);
        assert_eq!(distinct_pair_sum(&pts(&[(1.0, 0.0)]), c64(2.0, 0.0)), None);
    }

    #[test]
    fn neg_symmetric_examples() {
        assert!(neg_symmetric(&pts(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)])));
        assert!(!neg_symmetric(&pts(&[(1.0, 0.0), (2.0, 0.0)])));
        assert!(neg_symmetric(&PointSet::empty(1e-9)));
    }

    #[test]
    fn dedup_and_hausdorff() {
        let s = PointSet::new([c64(1.0, 0.0), c64(1.0 + 1e-12, 0.0), c64(2.0, 0.0)], 1e-9);
        assert_eq!(s.len(), 2);
        assert_eq!(hausdorff(&[], &[]), 0.0);
        assert!(hausdorff(&[c64(0.0, 0.0)], &[]).is_infinite());
        assert_eq!(hausdorff(&[c64(0.0, 0.0)], &[c64(0.0, 0.0), c64(3.0, 4.0)]), 5.0);
    }

    #[test]
    fn segment_intersections() {
        let s = Segment { a: c64(0.0, 0.0), b: c64(2.0, 0.0) };
        let t = Segment { a: c64(1.0, -1.0), b: c64(1.0, 1.0) };
        assert_eq!(s.intersection(&t, 1e-12), Some(c64(1.0, 0.0)));
        let far = Segment { a: c64(3.0, -1.0), b: c64(3.0, 1.0) };
        assert_eq!(s.intersection(&far, 1e-12), None);
        let overlap = Segment { a: c64(1.5, 0.0), b: c64(4.0, 0.0) };
        assert!(s.intersection(&overlap, 1e-12).is_some());
    }

    #[test]
    fn disc_realizes_every_sum() {
        let disc = PlanarRegion::regular_polygon(c64(0.0, 0.0), 1.0, 256).unwrap();
        let mut rng = instance_rng(1, 0);
        let report = boundary_sum_property(&disc, 50, 1e-3, &mut rng).unwrap();
        assert!(report.holds, "{:?}", report.failure);
        assert_eq!(report.certificates.len(), 50);
    }

    #[test]
    fn l_shape_realizes_every_sum() {
        let l = PlanarRegion::grid([(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)], 1.0).unwrap();
        let mut rng = instance_rng(2, 0);
        let report = boundary_sum_property(&l, 100, 1e-3, &mut rng).unwrap();
        assert!(report.holds, "{:?}", report.failure);
        for c in &report.certificates {
            assert!(l.distance_to_boundary(c.pair.b1) < 1e-9);
            assert!(l.distance_to_boundary(c.pair.b2) < 1e-9);
        }
    }

    #[test]
    fn finite_points_are_their_own_boundary() {
        let set = PlanarRegion::FinitePoints(vec![c64(0.0, 0.0), c64(1.0, 2.0), c64(-3.0, 0.5)]);
        let mut rng = instance_rng(3, 0);
        let report = boundary_sum_property(&set, 20, 1e-3, &mut rng).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn empty_boundary_is_degenerate() {
        let empty = PlanarRegion::FinitePoints(vec![]);
        let mut rng = instance_rng(3, 0);
        assert!(matches!(boundary_sum_property(&empty, 1, 1e-3, &mut rng), Err(Error::DegenerateRegion)));
        assert!(PlanarRegion::grid([(0, 0), (5, 5)], 1.0).is_err());
    }

    #[test]
    fn interior_points_have_distinct_boundary_pairs() {
        let mut rng = instance_rng(4, 0);
        let poly = random_star_polygon(12, &mut rng);
        for _ in 0..20 {
            let z = poly.sample(&mut rng).unwrap();
            let pair = distinct_boundary_pair(&poly, z, 1e-3).unwrap().expect("pair exists");
            assert!((pair.b1 + pair.b2 - z * 2.0).norm() <= 1e-3 * poly.diameter());
            assert!(pair.b1 != pair.b2);
        }
    }
}
