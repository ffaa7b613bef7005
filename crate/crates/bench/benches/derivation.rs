use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use orthlie::spectra::riesz_projection;
use orthlie::{ad_spectrum_formula, ad_spectrum_oracle, ideal_closure, spectrum, ToleranceProfile};
use orthlie_bench::{closure_generator, dense_element};

fn ad_spectrum(c: &mut Criterion) {
    let tol = ToleranceProfile::default();
    let mut group = c.benchmark_group("ad_spectrum");
    for n in [4usize, 6, 8] {
        let t = dense_element(n);
        group.bench_with_input(BenchmarkId::new("oracle", n), &t, |b, t| {
            b.iter(|| ad_spectrum_oracle(black_box(t), &tol).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("formula", n), &t, |b, t| {
            b.iter(|| ad_spectrum_formula(black_box(t), &tol).unwrap())
        });
    }
    group.finish();
}

fn riesz(c: &mut Criterion) {
    let tol = ToleranceProfile::default();
    let t = dense_element(6);
    let z = spectrum(t.matrix(), &tol).unwrap().points[0].value;
    c.bench_function("riesz_projection n=6", |b| b.iter(|| riesz_projection(black_box(t.matrix()), z, &tol).unwrap()));
}

fn closure(c: &mut Criterion) {
    let tol = ToleranceProfile::default();
    let mut group = c.benchmark_group("ideal_closure");
    for n in [4usize, 6] {
        let g = closure_generator(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| ideal_closure(std::slice::from_ref(black_box(g)), n, &tol).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ad_spectrum, riesz, closure);
criterion_main!(benches);
