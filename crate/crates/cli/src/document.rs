//! JSON matrix documents.
//!
//! Complex numbers are `[re, im]` pairs. Doubles are written in shortest
//! round-trip form and parsed exactly, so `parse(emit(doc)) == doc` bit for
//! bit.

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use orthlie::{Complex64, ComplexMatrix, Conjugation, ToleranceProfile};

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn unpair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// The symmetric unitary `U` of a conjugation `x ↦ U·conj(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugationDocument {
    pub n: usize,
    pub entries: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub n: usize,
    /// Row-major entries.
    pub entries: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<ConjugationDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

fn entries_of(m: &ComplexMatrix) -> Vec<Pair> {
    m.row_major().into_iter().map(pair).collect()
}

fn matrix_of(n: usize, entries: &[Pair], what: &str) -> Result<ComplexMatrix> {
    ensure!(n >= 1, "{what}: n must be positive");
    ensure!(entries.len() == n * n, "{what}: expected {} entries for n = {n}, found {}", n * n, entries.len());
    ensure!(entries.iter().all(|p| p[0].is_finite() && p[1].is_finite()), "{what}: entries must be finite");
    let values: Vec<Complex64> = entries.iter().copied().map(unpair).collect();
    Ok(ComplexMatrix::from_row_major(n, n, &values)?)
}

impl MatrixDocument {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixDocument { n: m.nrows(), entries: entries_of(m), conjugation: None, seed: None, generator: None }
    }

    pub fn with_conjugation(mut self, c: &Conjugation) -> Self {
        self.conjugation = Some(ConjugationDocument { n: c.dim(), entries: entries_of(c.matrix()) });
        self
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        matrix_of(self.n, &self.entries, "matrix")
    }

    /// The stated conjugation, or the canonical one.
    pub fn conjugation(&self, tol: &ToleranceProfile) -> Result<Conjugation> {
        match &self.conjugation {
            None => Ok(Conjugation::canonical(self.n)),
            Some(c) => {
                if c.n != self.n {
                    bail!("conjugation has n = {} but the matrix has n = {}", c.n, self.n);
                }
                let u = matrix_of(c.n, &c.entries, "conjugation")?;
                Conjugation::from_matrix(u, tol).context("invalid conjugation")
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_str(text).context("malformed matrix document")?;
        doc.matrix()?;
        Ok(doc)
    }

    /// Compact JSON with a trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// `sha256:` followed by the hex digest of the compact serialization, so
    /// formatting differences in the input do not change it.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_vec(self).expect("documents serialize");
        format!("sha256:{}", hex::encode(Sha256::digest(&compact)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orthlie::matrix::c64;

    #[test]
    fn round_trip_preserves_bits() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            &[c64(0.1, -0.0), c64(1e-300, 3.0), c64(-2.5e17, 0.3), c64(f64::MIN_POSITIVE, 1.0 / 3.0)],
        )
        .unwrap();
        let doc = MatrixDocument::from_matrix(&m);
        let back = MatrixDocument::parse(&doc.emit()).unwrap();
        let bits =
            |d: &MatrixDocument| d.entries.iter().flat_map(|p| [p[0].to_bits(), p[1].to_bits()]).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&doc));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(MatrixDocument::parse("{").is_err());
        assert!(MatrixDocument::parse(r#"{"n": 2, "entries": [[0, 0]]}"#).is_err());
        assert!(MatrixDocument::parse(r#"{"n": 1, "entries": [[0, 0]], "extra": 1}"#).is_err());
        let ok = MatrixDocument::parse(r#"{"n": 1, "entries": [[0, 0]]}"#).unwrap();
        assert_eq!(ok.n, 1);
    }

    #[test]
    fn conjugation_checks() {
        let tol = ToleranceProfile::default();
        let mut doc = MatrixDocument::from_matrix(&ComplexMatrix::zeros(2, 2));
        assert!(doc.conjugation(&tol).unwrap().is_canonical());
        doc.conjugation =
            Some(ConjugationDocument { n: 2, entries: vec![[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]] });
        assert!(doc.conjugation(&tol).is_err());
        doc.conjugation = Some(ConjugationDocument { n: 3, entries: vec![[0.0, 0.0]; 9] });
        assert!(doc.conjugation(&tol).is_err());
    }

    #[test]
    fn digest_ignores_formatting() {
        let a = MatrixDocument::parse(r#"{"n":1,"entries":[[1.5,0]]}"#).unwrap();
        let b = MatrixDocument::parse("{\n  \"n\": 1,\n  \"entries\": [ [1.5, 0.0] ]\n}").unwrap();
        assert_eq!(a.digest(), b.digest());
        assert!(a.digest().starts_with("sha256:"));
        assert_eq!(a.digest().len(), 7 + 64);
    }
}
