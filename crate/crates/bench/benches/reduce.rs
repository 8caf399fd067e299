//! Reduction, observation and GoI throughput.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sic_bench::{duplication_workload, many_total_nets};
use sic_core::encodings::corpus;
use sic_core::rewrite::{reduce, Strategy};
use sic_core::structure::decompose;
use sic_core::{all_obs_paths, goi_matrix};

fn strategies(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduce");
    for (name, net) in [("many_total", many_total_nets(200, 7)), ("duplication", duplication_workload(3))] {
        for (sname, s) in [("full_parallel", Strategy::FullParallel), ("leftmost", Strategy::Leftmost)] {
            g.bench_with_input(BenchmarkId::new(name, sname), &net, |b, n| {
                b.iter(|| reduce(black_box(n), s, 100_000))
            });
        }
    }
    g.finish();
}

fn observation(c: &mut Criterion) {
    let iota = corpus()["iota"].clone();
    c.bench_function("all_obs_paths/iota_budget_10", |b| b.iter(|| all_obs_paths(black_box(&iota), 10)));
}

fn goi(c: &mut Criterion) {
    let (nu, _) = decompose(&corpus()["fig1"]);
    c.bench_function("goi_matrix/fig1", |b| b.iter(|| goi_matrix(black_box(&nu))));
}

criterion_group!(benches, strategies, observation, goi);
criterion_main!(benches);
