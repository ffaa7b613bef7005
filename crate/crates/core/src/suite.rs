//! The verification suite: one [`PropertyLine`] per acceptance property.
//!
//! Every randomized property draws instance `k` from
//! `instance_rng(seed, k)`, so lines are reproducible for a fixed seed and
//! independent of evaluation order. Populations run in parallel and are
//! merged by instance index.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::conjugation::Conjugation;
use crate::derivation::{ad_spectrum_formula, ad_spectrum_oracle, delta_full};
use crate::error::{Error, Result};
use crate::generate::{
    block_sums, dense_skew, generate, instance_rng, random_conjugation, random_matrix, random_member,
    random_symmetric_member, random_unit_vector, repeated_skew, InstanceKind,
};
use crate::ideals::{ideal_closure, is_lie_ideal, max_cross_bracket, max_cross_inner, orthogonal_complement};
use crate::matrix::{c64, inner, rank_tol, schatten_norm, svd_values, ComplexMatrix, ToleranceProfile, I};
use crate::setgeom::{
    boundary_sum_property, distinct_boundary_pair, hausdorff, random_grid_region, random_star_polygon, sumset,
    PlanarRegion,
};
use crate::skew::{dual_witness, embed_double, rank_two, skew_generator, trace_pair, SkewElement};
use crate::spectra::{default_contour_radius, riesz_idempotent, spectrum, xi_set, SpectrumSet};

/// One measured quantity of a property and its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when the value must be at least the threshold.
    pub at_least: bool,
}

impl Metric {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Metric { name: name.into(), value, threshold, at_least: false }
    }

    fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Metric { name: name.into(), value, threshold, at_least: true }
    }

    pub fn passed(&self) -> bool {
        if self.at_least {
            self.value >= self.threshold
        } else {
            self.value <= self.threshold
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyLine {
    pub id: u32,
    pub name: String,
    pub population: usize,
    /// The headline metric; further ones are in `metrics`.
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub elapsed_ms: f64,
    pub metrics: Vec<Metric>,
    pub note: Option<String>,
}

impl PropertyLine {
    fn new(id: u32, name: &str, population: usize, metrics: Vec<Metric>, started: Instant) -> Self {
        let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        let head = metrics.first().cloned().unwrap_or_else(|| Metric::at_most("none", 0.0, 0.0));
        PropertyLine {
            id,
            name: name.into(),
            population,
            max_residual: head.value,
            threshold: head.threshold,
            passed: metrics.iter().all(Metric::passed),
            elapsed_ms,
            metrics,
            note: None,
        }
    }

    fn with_time_budget(mut self, seconds: f64) -> Self {
        let m = Metric::at_most("elapsed_s", self.elapsed_ms / 1e3, seconds);
        self.passed &= m.passed();
        self.metrics.push(m);
        self
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    fn failed(id: u32, name: &str, err: Error, started: Instant) -> Self {
        let mut line = PropertyLine::new(id, name, 0, vec![Metric::at_most("error", f64::INFINITY, 0.0)], started);
        line.note = Some(format!("error: {err}"));
        line
    }
}

impl fmt::Display for PropertyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} n={:<5}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.population
        )?;
        for m in &self.metrics {
            let op = if m.at_least { ">=" } else { "<=" };
            write!(f, " {}={:.3e}{}{:.1e}", m.name, m.value, op, m.threshold)?;
        }
        write!(f, " ({:.0} ms)", self.elapsed_ms)?;
        if let Some(note) = &self.note {
            write!(f, " note: {note}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Derivation,
    Duality,
    Ideals,
    Geometry,
    Riesz,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "derivation", "duality", "ideals", "geometry", "riesz"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Derivation => "derivation",
            Suite::Duality => "duality",
            Suite::Ideals => "ideals",
            Suite::Geometry => "geometry",
            Suite::Riesz => "riesz",
        }
    }

    /// Property ids run by this suite.
    pub fn ids(self) -> Vec<u32> {
        match self {
            Suite::All => (1..=13).collect(),
            Suite::Derivation => vec![1, 2, 3, 4, 5, 13],
            Suite::Duality => vec![6, 7, 8, 12],
            Suite::Ideals => vec![10],
            Suite::Geometry => vec![11],
            Suite::Riesz => vec![9],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "derivation" => Suite::Derivation,
            "duality" => Suite::Duality,
            "ideals" => Suite::Ideals,
            "geometry" => Suite::Geometry,
            "riesz" => Suite::Riesz,
            _ => return Err(Error::Parameter(format!("unknown suite '{s}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Replaces the population size of every randomized property.
    pub count: Option<usize>,
    pub tol: ToleranceProfile,
}

impl SuiteOptions {
    fn count(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }

    /// Random source of instance `k` of property `id`.
    fn rng(&self, id: u32, k: usize) -> rand_chacha::ChaCha8Rng {
        instance_rng(self.seed, (u64::from(id) << 32) | k as u64)
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<PropertyLine> {
    suite.ids().into_iter().map(|id| run_property(id, opts)).collect()
}

pub fn run_property(id: u32, opts: &SuiteOptions) -> PropertyLine {
    let started = Instant::now();
    let (name, result) = match id {
        1 => ("block-sums example n=7", block_sums_example(opts, started)),
        2 => ("first example n=3", first_example(opts, started)),
        3 => ("oracle agreement", oracle_agreement(opts, started)),
        4 => ("xi discriminates n=6", xi_discriminates(opts, started)),
        5 => ("spectral symmetry", spectral_symmetry(opts, started)),
        6 => ("trace orthogonality", trace_orthogonality(opts, started)),
        7 => ("dual witness", dual_witness_property(opts, started)),
        8 => ("embedding", embedding(opts, started)),
        9 => ("riesz idempotents", riesz(opts, started)),
        10 => ("ideals", ideals(opts, started)),
        11 => ("boundary sums", geometry(opts, started)),
        12 => ("norm bounds", norm_bounds(opts, started)),
        13 => ("delta relation", delta_relation(opts, started)),
        _ => ("unknown", Err(Error::Parameter(format!("no property {id}")))),
    };
    result.unwrap_or_else(|e| PropertyLine::failed(id, name, e, started))
}

fn reals(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&x| c64(x, 0.0)).collect()
}

fn symmetric_reals(nonneg: &[f64]) -> Vec<Complex64> {
    let mut v = reals(nonneg);
    v.extend(nonneg.iter().filter(|&&x| x != 0.0).map(|&x| c64(-x, 0.0)));
    v
}

fn canonical(t: ComplexMatrix, tol: &ToleranceProfile) -> Result<SkewElement> {
    SkewElement::canonical(t, tol)
}

/// Formula and oracle against a known answer; returns the two distances.
fn example_distances(t: &SkewElement, expected: &[Complex64], tol: &ToleranceProfile) -> Result<(f64, f64)> {
    let formula = ad_spectrum_formula(t, tol)?;
    let oracle = ad_spectrum_oracle(t, tol)?;
    Ok((hausdorff(formula.values(), expected), hausdorff(&oracle.distinct_values(), expected)))
}

fn block_sums_example(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let t = canonical(block_sums(7, &[I, c64(0.0, 2.0), c64(0.0, 2.0)])?, &opts.tol)?;
    let expected = symmetric_reals(&[0.0, 1.0, 2.0, 3.0, 4.0]);
    let (f, o) = example_distances(&t, &expected, &opts.tol)?;
    let xi = xi_set(&t, &opts.tol)?;
    let metrics =
        vec![Metric::at_most("hausdorff", f.max(o), 1e-8), Metric::at_most("xi_size", xi.values.len() as f64, 0.0)];
    Ok(PropertyLine::new(1, "block-sums example n=7", 1, metrics, started).with_time_budget(1.0))
}

fn first_example(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let t = canonical(skew_generator(3, 0, 1).scale(I), &opts.tol)?;
    let expected = symmetric_reals(&[0.0, 1.0]);
    let (f, o) = example_distances(&t, &expected, &opts.tol)?;
    let metrics = vec![Metric::at_most("hausdorff", f.max(o), 1e-8)];
    Ok(PropertyLine::new(2, "first example n=3", 1, metrics, started)
        .with_time_budget(1.0)
        .with_note("derived {0, 1, -1} asserted; the value {0} printed for this example in the literature contradicts the closed formula"))
}

/// Instance `k` of the agreement population: kinds cycle, sizes sweep 2..=8.
pub fn agreement_instance(seed: u64, k: usize) -> Result<(InstanceKind, ComplexMatrix)> {
    let mut rng = instance_rng(seed, (3u64 << 32) | k as u64);
    let kind = InstanceKind::ALL[k % InstanceKind::ALL.len()];
    let n = 2 + (k / InstanceKind::ALL.len()) % 7;
    Ok((kind, generate(kind, n, &mut rng)?))
}

/// `h(formula, oracle) / (1 + ‖T‖)`.
pub fn agreement_residual(t: &SkewElement, tol: &ToleranceProfile) -> Result<f64> {
    let formula = ad_spectrum_formula(t, tol)?;
    let oracle = ad_spectrum_oracle(t, tol)?;
    let norm = svd_values(t.matrix())?.first().copied().unwrap_or(0.0);
    Ok(hausdorff(formula.values(), &oracle.distinct_values()) / (1.0 + norm))
}

fn oracle_agreement(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(200);
    let residuals: Vec<Result<f64>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let (_, t) = agreement_instance(opts.seed, k)?;
            agreement_residual(&canonical(t, &opts.tol)?, &opts.tol)
        })
        .collect();
    let worst = collect_max(residuals)?;
    let metrics = vec![Metric::at_most("hausdorff_rel", worst, 1e-6)];
    Ok(PropertyLine::new(3, "oracle agreement", count, metrics, started).with_time_budget(60.0))
}

fn collect_max(values: Vec<Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

fn xi_discriminates(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let t = canonical(block_sums(6, &[I, c64(0.0, 2.0), c64(0.0, 2.0)])?, &opts.tol)?;
    let expected = symmetric_reals(&[0.0, 1.0, 3.0, 4.0]);
    let (f, o) = example_distances(&t, &expected, &opts.tol)?;
    let xi = xi_set(&t, &opts.tol)?;
    let xi_dist = hausdorff(&xi.values, &symmetric_reals(&[1.0]));
    let metrics = vec![Metric::at_most("hausdorff", f.max(o), 1e-8), Metric::at_most("xi_distance", xi_dist, 1e-8)];
    Ok(PropertyLine::new(4, "xi discriminates n=6", 1, metrics, started))
}

/// Worst `min |λ + μ| / radius` over clusters `λ`, with `μ` ranging over
/// clusters of equal multiplicity.
fn symmetry_defect(s: &SpectrumSet) -> f64 {
    s.points
        .iter()
        .map(|p| {
            s.points
                .iter()
                .filter(|q| q.multiplicity == p.multiplicity)
                .map(|q| (p.value + q.value).norm())
                .fold(f64::INFINITY, f64::min)
                / s.cluster_radius
        })
        .fold(0.0, f64::max)
}

fn random_size<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

fn spectral_symmetry(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(100);
    let results: Vec<Result<(f64, bool)>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(5, k);
            let n = random_size(&mut rng, 2, 8);
            let kind = InstanceKind::ALL[k % InstanceKind::ALL.len()];
            let s = spectrum(&generate(kind, n, &mut rng)?, &opts.tol)?;
            Ok((symmetry_defect(&s), s.total_multiplicity() == n))
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for r in results {
        let (d, complete) = r?;
        worst = worst.max(d);
        if d > 1.0 || !complete {
            failures += 1;
        }
    }
    let metrics =
        vec![Metric::at_most("failures", failures as f64, 0.0), Metric::at_most("defect_over_radius", worst, 1.0)];
    Ok(PropertyLine::new(5, "spectral symmetry", count, metrics, started))
}

fn trace_orthogonality(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(100);
    let results: Vec<Result<f64>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(6, k);
            let n = random_size(&mut rng, 2, 8);
            let c = random_conjugation(n, &mut rng);
            let a = random_symmetric_member(&c, &mut rng);
            let b = random_member(&c, &mut rng);
            Ok(trace_pair(&a, &b)?.norm() / (a.frobenius_norm() * b.frobenius_norm()))
        })
        .collect();
    let metrics = vec![Metric::at_most("trace_rel", collect_max(results)?, 1e-10)];
    Ok(PropertyLine::new(6, "trace orthogonality", count, metrics, started))
}

fn dual_witness_property(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(50);
    let results: Vec<Result<(f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(7, k);
            let n = random_size(&mut rng, 2, 8);
            let t = canonical(dense_skew(n, &mut rng), &opts.tol)?;
            let x = dual_witness(&t, &opts.tol)?;
            let norm = svd_values(t.matrix())?[0];
            let trace_norm = schatten_norm(&x, 1.0)?;
            let pairing = (&x * t.matrix()).trace();
            Ok(((trace_norm - 1.0).abs(), (pairing - c64(norm, 0.0)).norm() / norm))
        })
        .collect();
    let (mut unit, mut attain) = (0.0f64, 0.0f64);
    for r in results {
        let (u, a) = r?;
        unit = unit.max(u);
        attain = attain.max(a);
    }
    let metrics =
        vec![Metric::at_most("trace_norm_defect", unit, 1e-8), Metric::at_most("pairing_defect_rel", attain, 1e-8)];
    Ok(PropertyLine::new(7, "dual witness", count, metrics, started))
}

fn embedding(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(50);
    let results: Vec<Result<(f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(8, k);
            let n = random_size(&mut rng, 2, 8);
            let c = random_conjugation(n, &mut rng);
            let x = random_matrix(n, n, &mut rng);
            let y = random_matrix(n, n, &mut rng);
            let (px, py) = (embed_double(&x, &c)?, embed_double(&y, &c)?);
            let hom = (&embed_double(&x.commutator(&y), &c)? - &px.commutator(&py)).norm();
            let (nx, ny) = (x.norm(), y.norm());
            Ok((hom / (1.0 + nx * ny), (px.norm() - nx).abs()))
        })
        .collect();
    let (mut hom, mut iso) = (0.0f64, 0.0f64);
    for r in results {
        let (h, i) = r?;
        hom = hom.max(h);
        iso = iso.max(i);
    }
    let metrics = vec![Metric::at_most("bracket_defect_rel", hom, 1e-10), Metric::at_most("norm_defect", iso, 1e-10)];
    Ok(PropertyLine::new(8, "embedding", count, metrics, started))
}

/// A random skew matrix whose clusters are pairwise at least `0.05·‖T‖`
/// apart; odd instances carry repeated eigenvalues.
fn separated_instance<R: Rng + ?Sized>(
    k: usize,
    rng: &mut R,
    tol: &ToleranceProfile,
) -> Result<(ComplexMatrix, SpectrumSet)> {
    for _ in 0..100 {
        let n = random_size(rng, 2, 7);
        let t = if k % 2 == 1 && n >= 4 { repeated_skew(n, rng) } else { dense_skew(n, rng) };
        let s = spectrum(&t, tol)?;
        let scale = svd_values(&t)?[0];
        let gap = s
            .points
            .iter()
            .enumerate()
            .flat_map(|(i, p)| s.points[i + 1..].iter().map(move |q| (p.value - q.value).norm()))
            .fold(f64::INFINITY, f64::min);
        if gap >= 0.05 * scale {
            return Ok((t, s));
        }
    }
    Err(Error::Numerical("no well-separated instance found".into()))
}

struct RieszStats {
    idempotency: f64,
    rank_mismatches: usize,
    partition: f64,
    commutation: f64,
    doubling: f64,
}

fn riesz_instance(opts: &SuiteOptions, k: usize) -> Result<RieszStats> {
    let tol = &opts.tol;
    let mut rng = opts.rng(9, k);
    let (t, s) = separated_instance(k, &mut rng, tol)?;
    let n = t.nrows();
    let scale = svd_values(&t)?[0];
    let mut stats =
        RieszStats { idempotency: 0.0, rank_mismatches: 0, partition: 0.0, commutation: 0.0, doubling: f64::INFINITY };
    let mut sum = ComplexMatrix::zeros(n, n);
    for p in &s.points {
        let r = default_contour_radius(&s, p.value, scale);
        let e = riesz_idempotent(&t, p.value, r, tol)?;
        stats.idempotency = stats.idempotency.max((&(&e * &e) - &e).norm());
        stats.commutation = stats.commutation.max(t.commutator(&e).norm() / (scale * e.norm()));
        if rank_tol(&e, tol)? != p.multiplicity {
            stats.rank_mismatches += 1;
        }
        // geometric convergence: compare 8 and 16 nodes against the reference
        let at = |nodes: usize| riesz_idempotent(&t, p.value, r, &ToleranceProfile { contour_points: nodes, ..*tol });
        let (coarse, fine) = ((&at(8)? - &e).norm(), (&at(16)? - &e).norm());
        stats.doubling = stats.doubling.min(coarse / fine.max(f64::MIN_POSITIVE));
        sum += &e;
    }
    stats.partition = (&sum - &ComplexMatrix::identity(n)).norm();
    Ok(stats)
}

fn riesz(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(20);
    let results: Vec<Result<RieszStats>> = (0..count).into_par_iter().map(|k| riesz_instance(opts, k)).collect();
    let (mut idem, mut ranks, mut part, mut comm, mut dbl) = (0.0f64, 0usize, 0.0f64, 0.0f64, f64::INFINITY);
    for r in results {
        let s = r?;
        idem = idem.max(s.idempotency);
        ranks += s.rank_mismatches;
        part = part.max(s.partition);
        comm = comm.max(s.commutation);
        dbl = dbl.min(s.doubling);
    }
    let metrics = vec![
        Metric::at_most("idempotency", idem, 1e-8),
        Metric::at_most("rank_mismatches", ranks as f64, 0.0),
        Metric::at_most("partition_of_unity", part, 1e-7),
        Metric::at_most("commutation_rel", comm, 1e-8),
        Metric::at_least("doubling_gain", dbl, 10.0),
    ];
    Ok(PropertyLine::new(9, "riesz idempotents", count, metrics, started))
}

fn ideals(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(20);
    let sizes = [3usize, 5, 6, 7];
    let jobs: Vec<(usize, usize)> = sizes.iter().flat_map(|&n| (0..count).map(move |k| (n, k))).collect();
    let results: Vec<Result<bool>> = jobs
        .par_iter()
        .map(|&(n, k)| {
            let mut rng = opts.rng(10, n * 1000 + k);
            let g = dense_skew(n, &mut rng);
            let closure = ideal_closure(&[g], n, &opts.tol)?;
            Ok(closure.dim() == n * (n - 1) / 2)
        })
        .collect();
    let mut not_full = 0usize;
    for r in results {
        if !r? {
            not_full += 1;
        }
    }
    let seed = &skew_generator(4, 0, 1) + &skew_generator(4, 2, 3);
    let ideal = ideal_closure(&[seed], 4, &opts.tol)?;
    let complement = orthogonal_complement(&ideal);
    let so4_ok = ideal.dim() == 3 && complement.dim() == 3 && is_lie_ideal(&ideal) && is_lie_ideal(&complement);
    let metrics = vec![
        Metric::at_most("non_simple_closures", not_full as f64, 0.0),
        Metric::at_least("so4_ideals_verified", f64::from(u8::from(so4_ok)), 1.0),
        Metric::at_most("so4_cross_bracket", max_cross_bracket(&ideal, &complement), 1e-10),
        Metric::at_most("so4_cross_inner", max_cross_inner(&ideal, &complement), 1e-10),
    ];
    Ok(PropertyLine::new(10, "ideals", jobs.len() + 1, metrics, started))
}

/// Region `k` of the geometry population: star polygons and grid regions
/// alternate.
pub fn geometry_region<R: Rng + ?Sized>(k: usize, rng: &mut R) -> PlanarRegion {
    if k.is_multiple_of(2) {
        let vertices = rng.random_range(5..=12);
        random_star_polygon(vertices, rng)
    } else {
        let cells = rng.random_range(4..=12);
        random_grid_region(cells, rng)
    }
}

fn geometry(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    const TOL: f64 = 1e-3;
    let regions = opts.count(20);
    let pairs = opts.count(100);
    let results: Vec<Result<(f64, usize, usize)>> = (0..regions)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(11, k);
            let region = geometry_region(k, &mut rng);
            let report = boundary_sum_property(&region, pairs, TOL, &mut rng)?;
            let unrealized = pairs - report.certificates.len();
            // distinct boundary pairs for interior points (midpoints of the samples)
            let mut missing = 0;
            for cert in &report.certificates {
                let z = (cert.z1 + cert.z2) / 2.0;
                if region.contains_interior(z, TOL * region.diameter())
                    && distinct_boundary_pair(&region, z, TOL)?.is_none()
                {
                    missing += 1;
                }
            }
            Ok((report.max_relative_defect, unrealized, missing))
        })
        .collect();
    let (mut defect, mut unrealized, mut missing) = (0.0f64, 0usize, 0usize);
    for r in results {
        let (d, u, m) = r?;
        defect = defect.max(d);
        unrealized += u;
        missing += m;
    }
    let metrics = vec![
        Metric::at_most("relative_defect", defect, TOL),
        Metric::at_most("unrealized_pairs", unrealized as f64, 0.0),
        Metric::at_most("missing_distinct_pairs", missing as f64, 0.0),
    ];
    Ok(PropertyLine::new(11, "boundary sums", regions * pairs, metrics, started))
}

fn norm_bounds(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(100);
    let results: Vec<Result<f64>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(12, k);
            let n = random_size(&mut rng, 2, 8);
            let c = if k.is_multiple_of(2) { Conjugation::canonical(n) } else { random_conjugation(n, &mut rng) };
            let e = random_unit_vector(n, &mut rng);
            // mix f towards e to cover the whole range of |⟨f, e⟩|
            let g = random_unit_vector(n, &mut rng);
            let w: f64 = rng.random_range(0.0..1.0);
            let f = &e * c64(w, 0.0) + &g * c64(1.0 - w, 0.0);
            let f = &f / c64(crate::matrix::vector_norm(&f), 0.0);
            let x = rank_two(&e, &f, &c)?;
            let op = x.norm();
            let overlap = 1.0 - inner(&f, &e).norm_sqr();
            let mut worst = overlap - op;
            for p in [1.0, 2.0, 3.0, f64::INFINITY] {
                let sp = schatten_norm(&x, p)?;
                worst = worst.max(op - sp).max(sp - 2.0);
            }
            Ok(worst)
        })
        .collect();
    let metrics = vec![Metric::at_most("max_violation", collect_max(results)?, 1e-10)];
    Ok(PropertyLine::new(12, "norm bounds", count, metrics, started))
}

fn delta_relation(opts: &SuiteOptions, started: Instant) -> Result<PropertyLine> {
    let count = opts.count(50);
    let results: Vec<Result<(f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = opts.rng(13, k);
            let n = random_size(&mut rng, 2, 6);
            let kind = InstanceKind::ALL[k % InstanceKind::ALL.len()];
            let t = canonical(generate(kind, n, &mut rng)?, &opts.tol)?;
            let delta = spectrum(&delta_full(t.matrix())?, &opts.tol)?;
            let points = spectrum(t.matrix(), &opts.tol)?.to_point_set();
            let sums = sumset(&points, &points);
            let radius = delta.cluster_radius.max(sums.tol());
            let set_distance = hausdorff(&delta.distinct_values(), sums.values()) / radius;
            let oracle = ad_spectrum_oracle(&t, &opts.tol)?.to_point_set();
            let outside = oracle
                .values()
                .iter()
                .map(|z| delta.distinct_values().iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
                / radius;
            Ok((set_distance, outside))
        })
        .collect();
    let (mut dist, mut outside) = (0.0f64, 0.0f64);
    for r in results {
        let (d, o) = r?;
        dist = dist.max(d);
        outside = outside.max(o);
    }
    let metrics = vec![
        Metric::at_most("sumset_distance_over_radius", dist, 1.0),
        Metric::at_most("ad_outside_delta_over_radius", outside, 1.0),
    ];
    Ok(PropertyLine::new(13, "delta relation", count, metrics, started))
}
