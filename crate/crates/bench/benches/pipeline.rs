use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use smc_bench::{interval_model, random_model};
use smc_core::graph::{Quotient, TransformConfig};
use smc_core::sampler::{path_rng, sample_path, DEFAULT_STEP_CAP};
use smc_core::{bundled, interval_iteration, run_smc, support_view, RunConfig};

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("interval_iteration");
    for states in [50, 200, 1000] {
        let imdp = interval_model(&random_model(states, 7), 0.05, 7);
        group.bench_with_input(BenchmarkId::from_parameter(states), &imdp, |b, imdp| {
            b.iter(|| interval_iteration(black_box(imdp), 1e-6))
        });
    }
    group.finish();
}

fn transforms(c: &mut Criterion) {
    let g = support_view(&random_model(500, 3));
    c.bench_function("quotient_full_500", |b| {
        b.iter(|| Quotient::build(black_box(&g), TransformConfig::full()))
    });
}

fn sampling(c: &mut Criterion) {
    let m = bundled::load("mec_rooms").unwrap();
    let q = Quotient::build(&support_view(&m), TransformConfig::full());
    c.bench_function("sample_1000_paths_mec_rooms", |b| {
        b.iter(|| {
            (0..1000)
                .map(|i| sample_path(&m, &q, DEFAULT_STEP_CAP, &mut path_rng(1, i)).steps)
                .sum::<u64>()
        })
    });
}

fn end_to_end(c: &mut Criterion) {
    let m = bundled::load("fig2").unwrap();
    let cfg = RunConfig {
        epsilon: 0.05,
        ..RunConfig::full()
    };
    let mut group = c.benchmark_group("run_smc");
    group.sample_size(10);
    group.bench_function("fig2_full", |b| b.iter(|| run_smc(black_box(&m), &cfg)));
    group.bench_function("fig2_baseline", |b| {
        b.iter(|| {
            run_smc(
                black_box(&m),
                &RunConfig {
                    epsilon: 0.05,
                    ..RunConfig::baseline()
                },
            )
        })
    });
    group.finish();
}

criterion_group!(benches, solver, transforms, sampling, end_to_end);
criterion_main!(benches);
