//! Dense kernel timings: Jacobi eigendecomposition, one-sided Jacobi
//! SVD, and the end-to-end certificate on the Singer family.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use etf_core::constructions::{harmonic_etf, singer_difference_set};
use etf_core::gap_certificate::certify;
use etf_core::matcore::{hermitian_eigen, singular_values};
use etf_core::rng::random_hermitian;
use etf_core::{DEFAULT_REL_TOL, DEFAULT_TOL};

fn bench_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eigen");
    for size in [16usize, 32, 64] {
        let m = random_hermitian(size, 42);
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| {
            b.iter(|| hermitian_eigen(m, DEFAULT_TOL).unwrap().values[0])
        });
    }
    group.finish();
}

fn bench_svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_svd");
    for size in [16usize, 32, 64] {
        let m = random_hermitian(size, 7);
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| {
            b.iter(|| singular_values(m)[0])
        });
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_singer");
    group.sample_size(10);
    for q in [2u64, 3, 4] {
        let frame = harmonic_etf(&singer_difference_set(q).unwrap());
        group.bench_with_input(BenchmarkId::from_parameter(q), &frame, |b, f| {
            b.iter(|| certify(f, DEFAULT_TOL, DEFAULT_REL_TOL).unwrap().passed)
        });
    }
    group.finish();
}

criterion_group!(benches, bench_eigen, bench_svd, bench_certify);
criterion_main!(benches);
