//! Fixed inputs shared by the benchmarks.

use orthlie::generate::dense_skew;
use orthlie::{instance_rng, ComplexMatrix, SkewElement, ToleranceProfile};

/// Dense skew element of size `n`, identical across runs.
pub fn dense_element(n: usize) -> SkewElement {
    let mut rng = instance_rng(0xbe7c, n as u64);
    SkewElement::canonical(dense_skew(n, &mut rng), &ToleranceProfile::default()).expect("generated matrix is skew")
}

/// Generator used for ideal-closure timings.
pub fn closure_generator(n: usize) -> ComplexMatrix {
    dense_element(n).matrix().clone()
}
