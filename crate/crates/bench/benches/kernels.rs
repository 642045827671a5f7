use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hydrolens::gaussian_ppt::{build_covariance, detection_map, partial_transpose, symplectic_eigenvalues, GridAxis};
use hydrolens::hydrogenic::{radial_momentum, radial_position};
use hydrolens::linear_entropy::radial_sum;
use hydrolens::oracle::{integrate, QuadratureSpec};
use hydrolens::specfun::{wigner3j, ThreeJArgs};
use hydrolens::{MomentSet, QuantumNumbers};
use hydrolens_bench::{shell_tops, RATIOS};

fn radial_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("radial");
    for qn in shell_tops(6) {
        g.bench_with_input(BenchmarkId::new("position", qn.n()), &qn, |b, &qn| {
            b.iter(|| radial_position(qn, 1.0, black_box(3.7)))
        });
        g.bench_with_input(BenchmarkId::new("momentum", qn.n()), &qn, |b, &qn| {
            b.iter(|| radial_momentum(qn, 1.0, black_box(0.42)))
        });
    }
    g.finish();
}

fn normalization_quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("momentum_normalization");
    for qn in shell_tops(5) {
        g.bench_with_input(BenchmarkId::from_parameter(qn.n()), &qn, |b, &qn| {
            b.iter(|| {
                let f = |k: f64| k * k * radial_momentum(qn, 1.0, k).unwrap_or(f64::NAN).powi(2);
                integrate(&QuadratureSpec::momentum(f, qn.n(), 1.0).rel_tol(1e-12))
            })
        });
    }
    g.finish();
}

fn three_j(c: &mut Criterion) {
    let mut g = c.benchmark_group("wigner3j");
    for j in [2u32, 5, 10, 40] {
        let args = ThreeJArgs::new([j, j, j], [0, 0, 0]);
        g.bench_with_input(BenchmarkId::from_parameter(j), &args, |b, &args| {
            b.iter(|| wigner3j(black_box(args)))
        });
    }
    g.finish();
}

fn linear_entropy_radial(c: &mut Criterion) {
    let mut g = c.benchmark_group("radial_sum");
    for n in [1u32, 3, 6, 10] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| radial_sum(black_box(n), 0, 1.0))
        });
    }
    g.finish();
}

fn symplectic(c: &mut Criterion) {
    let mut g = c.benchmark_group("symplectic_eigenvalues");
    for ratio in RATIOS {
        let sigma = build_covariance(&MomentSet::new(QuantumNumbers::ground(), ratio).unwrap()).unwrap();
        let transposed = partial_transpose(&sigma).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(ratio), &transposed, |b, s| {
            b.iter(|| symplectic_eigenvalues(black_box(s)))
        });
    }
    g.finish();
}

fn map(c: &mut Criterion) {
    let axis = GridAxis::new(0.5, 2.0, 64).unwrap();
    let mut g = c.benchmark_group("detection_map_64x64");
    for threads in [1usize, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| detection_map(QuantumNumbers::ground(), axis, axis, t))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    radial_functions,
    normalization_quadrature,
    three_j,
    linear_entropy_radial,
    symplectic,
    map
);
criterion_main!(benches);
