use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hurstlab_core::scaling::{data_collapse, variance_curve};
use hurstlab_core::stats::ks_two_sample;
use hurstlab_core::structure::{ck_grid, ck_residual, structure_report, StructureProbes, TransitionKernel};
use hurstlab_core::{gen_fbm, gen_scaling_markov_exact, make_grid, GridKind, ProcessSpec};
use std::hint::black_box;

fn ks(c: &mut Criterion) {
    let grid = make_grid(GridKind::Uniform, 0.0, 1.0, 2).unwrap();
    let mut group = c.benchmark_group("ks_two_sample");
    for n in [1_000, 10_000, 100_000] {
        let a = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.5, 1.0).unwrap(), &grid, n, 1).unwrap();
        let b = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.5, 1.0).unwrap(), &grid, n, 2).unwrap();
        let (xa, xb) = (a.column(1), b.column(1));
        group.bench_with_input(BenchmarkId::from_parameter(n), &(xa, xb), |bench, (xa, xb)| {
            bench.iter(|| black_box(ks_two_sample(xa, xb).unwrap()))
        });
    }
    group.finish();
}

fn scaling(c: &mut Criterion) {
    let grid = make_grid(GridKind::Geometric, 1.0, 1024.0, 11).unwrap();
    let e = gen_fbm(&ProcessSpec::fbm(0.7, 1.0).unwrap(), &grid, 4096, 1).unwrap();
    let times = grid.times().to_vec();
    c.bench_function("variance_fit", |b| b.iter(|| black_box(variance_curve(&e).unwrap().fit().unwrap())));
    c.bench_function("data_collapse", |b| b.iter(|| black_box(data_collapse(&e, 0.7, &times).unwrap())));
}

fn structure(c: &mut Criterion) {
    let mut group = c.benchmark_group("ck_residual");
    let k = TransitionKernel::new(0.7, 1.0).unwrap();
    for points in [512, 2048] {
        let grid = ck_grid(&k, 1.0, 4.0, points);
        group.bench_with_input(BenchmarkId::from_parameter(points), &grid, |b, grid| {
            b.iter(|| black_box(ck_residual(&k, 1.0, 2.0, 4.0, grid).unwrap()))
        });
    }
    group.finish();

    let grid = make_grid(GridKind::Uniform, 0.0, 16.0, 17).unwrap();
    let e = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.7, 1.0).unwrap(), &grid, 10_000, 1).unwrap();
    let probes = StructureProbes::default();
    c.bench_function("structure_report", |b| b.iter(|| black_box(structure_report(&e, &probes, k).unwrap())));
}

criterion_group!(benches, ks, scaling, structure);
criterion_main!(benches);
