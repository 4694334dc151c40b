//! Batch-throughput benchmarks comparing the data-parallel path (the
//! library's `par` helpers, rayon under default features) against an
//! explicit sequential loop over the same work.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use optsynth_core::complexity::{score, ComplexityWeights, DEFAULT_BIGM_THRESHOLD};
use optsynth_core::generators::{generate, generate_batch, GeneratorConfig, ParamValue};
use optsynth_core::solver::{solve_builtin, SolverLimits};
use optsynth_core::{par, ProblemData};

fn config() -> GeneratorConfig {
    GeneratorConfig::new("bin_packing", 2024).with("n_items", ParamValue::IntRange(4, 6))
}

fn batch(n: usize) -> Vec<ProblemData> {
    generate_batch(&config(), n).into_iter().map(Result::unwrap).collect()
}

fn bench_generate(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_batch");
    for n in [32usize, 128] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| generate_batch(&config(), n))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| {
                let seeds = optsynth_core::rng::sub_seeds(2024, n);
                seeds
                    .iter()
                    .map(|&s| {
                        let sub = GeneratorConfig { seed: s, ..config() };
                        generate(&sub).unwrap()
                    })
                    .collect::<Vec<_>>()
            })
        });
    }
    group.finish();
}

fn bench_score(c: &mut Criterion) {
    let instances = batch(128);
    let weights = ComplexityWeights::default();
    let mut group = c.benchmark_group("score_batch");
    group.bench_function("parallel", |b| {
        b.iter(|| {
            par::map_ordered(&instances, |pd| {
                score(pd, &weights, DEFAULT_BIGM_THRESHOLD).unwrap().score
            })
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            instances
                .iter()
                .map(|pd| score(pd, &weights, DEFAULT_BIGM_THRESHOLD).unwrap().score)
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let instances = batch(16);
    let limits = SolverLimits::default();
    let mut group = c.benchmark_group("solve_batch");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| par::map_ordered(&instances, |pd| solve_builtin(pd, &limits).unwrap().status))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            instances
                .iter()
                .map(|pd| solve_builtin(pd, &limits).unwrap().status)
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_generate, bench_score, bench_solve);
criterion_main!(benches);
