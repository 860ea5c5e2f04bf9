use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ruin_bench::{erlang2, poisson, THETAS};
use ruin_core::mc::estimate_reach_prob_with;
use ruin_core::*;

fn analytic(c: &mut Criterion) {
    let mut g = c.benchmark_group("analytic");
    for theta in THETAS {
        g.bench_with_input(
            BenchmarkId::new("survival_classical", theta),
            &poisson(theta),
            |b, m| b.iter(|| survival_classical(black_box(m)).unwrap()),
        );
        g.bench_with_input(
            BenchmarkId::new("survival_erlang2", theta),
            &erlang2(theta),
            |b, m| b.iter(|| survival_erlang2(black_box(m)).unwrap()),
        );
        g.bench_with_input(
            BenchmarkId::new("solve_chi_b20", theta),
            &poisson(theta),
            |b, m| b.iter(|| solve_chi(black_box(m), 20.0).unwrap()),
        );
    }
    g.finish();
}

fn roots(c: &mut Criterion) {
    let den = erlang_lt(&erlang2(-1.0), SignVariant::Minus).unwrap().den;
    c.bench_function("poly_roots_degree7", |b| {
        b.iter(|| poly_roots(black_box(&den)).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_pair");
    for (name, m) in [("poisson", poisson(0.5)), ("erlang2", erlang2(0.5))] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        g.bench_function(name, |b| b.iter(|| sample_pair(black_box(&m), &mut rng)));
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("reach_prob_10k");
    g.sample_size(10);
    for (name, m) in [("poisson", poisson(0.5)), ("erlang2", erlang2(0.5))] {
        g.bench_function(name, |b| {
            b.iter(|| estimate_reach_prob_with(black_box(&m), 0.0, 20.0, 10_000, 3, 1).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, analytic, roots, sampling, simulation);
criterion_main!(benches);
