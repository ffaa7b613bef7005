//! Numerical toolkit for the orthogonal Lie algebra so(n, ℂ) of complex
//! skew-symmetric matrices, taken with respect to a conjugation `C`.
//!
//! The central computation is the spectrum of the inner derivation
//! `ad_T : X ↦ [T, X]`, obtained two ways: brute force on the explicit
//! `ad_T` matrix, and the closed formula
//! `σ(ad_T) = (σ(T) + σ(T)) \ {2z : z ∈ Ξ(T)}`. Around it sit the structural
//! identities of the skew algebra (splitting, trace duality, the doubling
//! embedding), Riesz idempotents, Lie ideals and a planar sum-set lemma.
//!
//! ```
//! use orthlie::{ad_spectrum_formula, ad_spectrum_oracle, block_sums, SkewElement, ToleranceProfile};
//! use orthlie::matrix::c64;
//!
//! let tol = ToleranceProfile::default();
//! let t = block_sums(6, &[c64(0.0, 1.0), c64(0.0, 2.0), c64(0.0, 2.0)]).unwrap();
//! let t = SkewElement::canonical(t, &tol).unwrap();
//! let formula = ad_spectrum_formula(&t, &tol).unwrap();
//! let oracle = ad_spectrum_oracle(&t, &tol).unwrap();
//! assert_eq!(formula.len(), 7); // 0, ±1, ±3, ±4
//! assert_eq!(oracle.points.len(), 7);
//! ```

pub mod conjugation;
pub mod derivation;
pub mod error;
pub mod generate;
pub mod ideals;
pub mod matrix;
pub mod setgeom;
pub mod skew;
pub mod spectra;
pub mod suite;

pub use num_complex::{self, Complex64};

pub use conjugation::Conjugation;
pub use derivation::{
    ad_matrix, ad_spectrum_formula, ad_spectrum_oracle, ad_trace_antisymmetry, delta_blocks, delta_full,
    eig_pair_vector, jordan_pair_vector, AdMatrix,
};
pub use error::{Error, Result};
pub use generate::{block_sums, generate, instance_rng, InstanceKind};
pub use ideals::{bracket, ideal_closure, is_lie_ideal, orthogonal_complement, IdealSubspace};
pub use matrix::{ComplexMatrix, ComplexVector, ToleranceProfile};
pub use setgeom::{hausdorff, PlanarRegion, PointSet};
pub use skew::{is_member, split, SkewElement};
pub use spectra::{riesz_dim, riesz_idempotent, spectrum, xi_set, SpectralPoint, SpectrumSet, XiSet};
pub use suite::{run_property, run_suite, PropertyLine, Suite, SuiteOptions};
