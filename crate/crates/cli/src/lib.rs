//! Front end of the `orthlie` command: instance generation, analysis
//! reports and the verification suite, all as JSON.

pub mod document;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use orthlie::matrix::svd_values;
use orthlie::suite::Metric;
use orthlie::{
    ad_spectrum_formula, ad_spectrum_oracle, block_sums, generate, hausdorff, instance_rng, run_suite, spectrum,
    xi_set, Complex64, InstanceKind, PropertyLine, SkewElement, SpectrumSet, Suite, SuiteOptions, ToleranceProfile,
};

use document::{pair, MatrixDocument, Pair};

/// Relative bound on the Hausdorff distance between formula and oracle:
/// `AGREEMENT_RTOL·(1 + ‖T‖)`.
pub const AGREEMENT_RTOL: f64 = 1e-6;

/// Seeded instance as a document. `coefficients` replaces the random
/// coefficients of the block-sums kind.
pub fn generate_document(
    n: usize,
    kind: InstanceKind,
    seed: u64,
    coefficients: Option<&[Complex64]>,
) -> Result<MatrixDocument> {
    let t = match coefficients {
        Some(c) if kind == InstanceKind::BlockSums => block_sums(n, c)?,
        Some(_) => bail!("coefficients apply only to the block-sums kind"),
        None => generate(kind, n, &mut instance_rng(seed, 0))?,
    };
    let mut doc = MatrixDocument::from_matrix(&t);
    doc.generator = Some(kind.name().to_owned());
    if coefficients.is_none() {
        doc.seed = Some(seed);
    }
    Ok(doc)
}

/// Comma-separated complex numbers such as `i,2i,-1+0.5i`.
pub fn parse_coefficients(text: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<Complex64>().with_context(|| format!("cannot parse coefficient '{s}'"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToleranceEcho {
    pub atol: f64,
    pub rtol: f64,
    pub cluster: Option<f64>,
    pub contour_points: usize,
    pub defect_merge: bool,
}

impl From<&ToleranceProfile> for ToleranceEcho {
    fn from(t: &ToleranceProfile) -> Self {
        ToleranceEcho {
            atol: t.atol,
            rtol: t.rtol,
            cluster: t.cluster_override,
            contour_points: t.contour_points,
            defect_merge: t.defect_merge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralEntry {
    pub value: Pair,
    pub multiplicity: usize,
}

fn entries(s: &SpectrumSet) -> Vec<SpectralEntry> {
    s.points.iter().map(|p| SpectralEntry { value: pair(p.value), multiplicity: p.multiplicity }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "AGREE")]
    Agree,
    #[serde(rename = "DISAGREE")]
    Disagree,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub input_digest: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub generator: Option<String>,
    pub tolerance: ToleranceEcho,
    pub cluster_radius: f64,
    pub spectrum: Vec<SpectralEntry>,
    pub xi: Vec<Pair>,
    pub formula: Vec<Pair>,
    pub oracle: Vec<SpectralEntry>,
    pub hausdorff_distance: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Spectrum, Ξ, and `σ(ad_T)` by formula and by brute force. Fails when the
/// document is invalid or the matrix is not in the skew algebra.
pub fn analyze(doc: &MatrixDocument, tol: &ToleranceProfile) -> Result<AnalysisReport> {
    tol.validate()?;
    let c = doc.conjugation(tol)?;
    let t = SkewElement::new(doc.matrix()?, c.clone(), tol)?;
    let spec = spectrum(t.matrix(), tol)?;
    let xi = xi_set(&t, tol)?;
    let formula = ad_spectrum_formula(&t, tol)?;
    let oracle = ad_spectrum_oracle(&t, tol)?;
    let distance = hausdorff(formula.values(), &oracle.distinct_values());
    let norm = svd_values(t.matrix())?.first().copied().unwrap_or(0.0);
    let threshold = AGREEMENT_RTOL * (1.0 + norm);
    let mut notes = Vec::new();
    if !c.is_canonical() {
        notes.push("ad_T built in a basis of vectors fixed by the conjugation".to_owned());
    }
    if !xi.is_empty() {
        notes.push(format!("{} sum(s) 2z with z in xi removed from the sumset", xi.values.len()));
    }
    Ok(AnalysisReport {
        input_digest: doc.digest(),
        n: doc.n,
        seed: doc.seed,
        generator: doc.generator.clone(),
        tolerance: tol.into(),
        cluster_radius: spec.cluster_radius,
        spectrum: entries(&spec),
        xi: xi.values.iter().copied().map(pair).collect(),
        formula: formula.values().iter().copied().map(pair).collect(),
        oracle: entries(&oracle),
        hausdorff_distance: distance,
        threshold,
        verdict: if distance <= threshold { Verdict::Agree } else { Verdict::Disagree },
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRecord {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub at_least: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyRecord {
    pub id: u32,
    pub name: String,
    pub population: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub elapsed_ms: f64,
    pub metrics: Vec<MetricRecord>,
    pub note: Option<String>,
}

impl From<&PropertyLine> for PropertyRecord {
    fn from(l: &PropertyLine) -> Self {
        let metric = |m: &Metric| MetricRecord {
            name: m.name.clone(),
            value: m.value,
            threshold: m.threshold,
            at_least: m.at_least,
            passed: m.passed(),
        };
        PropertyRecord {
            id: l.id,
            name: l.name.clone(),
            population: l.population,
            max_residual: l.max_residual,
            threshold: l.threshold,
            passed: l.passed,
            elapsed_ms: l.elapsed_ms,
            metrics: l.metrics.iter().map(metric).collect(),
            note: l.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub count: Option<usize>,
    pub tolerance: ToleranceEcho,
    pub passed: bool,
    pub properties: Vec<PropertyRecord>,
}

pub fn verify(suite: Suite, opts: &SuiteOptions) -> (Vec<PropertyLine>, VerifyReport) {
    let lines = run_suite(suite, opts);
    let report = VerifyReport {
        suite: suite.name().to_owned(),
        seed: opts.seed,
        count: opts.count,
        tolerance: (&opts.tol).into(),
        passed: lines.iter().all(|l| l.passed),
        properties: lines.iter().map(PropertyRecord::from).collect(),
    };
    (lines, report)
}
