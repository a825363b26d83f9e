use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use orlicz_core::algebra::convolve;
use orlicz_core::lattice::{ball, DEFAULT_BALL_BUDGET};
use orlicz_core::orlicz::{luxemburg_of_magnitudes, orlicz_of_magnitudes};
use orlicz_core::young::{conjugate, lookup, YoungFunction, YoungSpec};
use orlicz_core::{Complex64, FinSuppFn};

fn bench_conjugate(c: &mut Criterion) {
    let mut group = c.benchmark_group("conjugate");
    for (name, phi) in [
        ("power_1.5", YoungFunction::power(1.5).unwrap()),
        ("entropy", YoungFunction::entropy()),
        ("cosh", YoungFunction::cosh_minus_one()),
    ] {
        group.bench_function(name, |b| b.iter(|| conjugate(&phi, black_box(2.5)).unwrap()));
    }
    group.finish();
}

fn bench_norms(c: &mut Criterion) {
    let pair = lookup(&YoungSpec::new("power", Some(1.5))).unwrap();
    let mut group = c.benchmark_group("norms");
    for n in [8usize, 64, 512] {
        let mags: Vec<f64> = (0..n).map(|k| 1.0 / (1.0 + k as f64)).collect();
        group.bench_with_input(BenchmarkId::new("luxemburg", n), &mags, |b, m| {
            b.iter(|| luxemburg_of_magnitudes(&pair.phi, m).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("orlicz", n), &mags, |b, m| {
            b.iter(|| orlicz_of_magnitudes(&pair, m).unwrap())
        });
    }
    group.finish();
}

fn bench_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for (dim, r) in [(1usize, 64u64), (2, 8)] {
        let pts = ball(dim, r, DEFAULT_BALL_BUDGET).unwrap();
        let f = FinSuppFn::from_entries(
            dim,
            pts.iter().enumerate().map(|(i, p)| (p.clone(), Complex64::new(1.0, i as f64))),
        )
        .unwrap();
        group.bench_function(format!("ball_d{dim}_r{r}"), |b| b.iter(|| convolve(&f, &f).unwrap()));
    }
    group.finish();
}

criterion_group!(kernels, bench_conjugate, bench_norms, bench_convolution);
criterion_main!(kernels);
