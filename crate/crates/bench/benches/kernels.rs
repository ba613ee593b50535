use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sicforge::group::{m_dl, ordered_product_bound};
use sicforge::jordan::check_jordan_sic_criterion;
use sicforge::lie::{check_lie_sic_criterion, lie_structure};
use sicforge::rep::enumerate_small_irreps;
use sicforge::sic::{minimize_frame_potential, SolverConfig};
use sicforge::simplex::check_trichotomy;
use sicforge_bench::{adjoint, lie};

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    for d in [3usize, 4, 5] {
        let cfg = SolverConfig { restarts: 1, ..SolverConfig::default() };
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| minimize_frame_potential(black_box(d), &cfg).unwrap())
        });
    }
    g.finish();
}

fn checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("checks");
    for d in [3usize, 5] {
        let adj = adjoint(d);
        let lb = lie(d);
        g.bench_function(BenchmarkId::new("trichotomy", d), |b| b.iter(|| check_trichotomy(black_box(&adj), 1e-8).unwrap()));
        g.bench_function(BenchmarkId::new("lie_structure", d), |b| b.iter(|| lie_structure(black_box(&lb)).unwrap()));
        g.bench_function(BenchmarkId::new("lie_criterion", d), |b| {
            b.iter(|| check_lie_sic_criterion(black_box(&lb), 1e-8).unwrap())
        });
        g.bench_function(BenchmarkId::new("jordan_criterion", d), |b| {
            b.iter(|| check_jordan_sic_criterion(black_box(&adj), 1e-8).unwrap())
        });
        g.bench_function(BenchmarkId::new("m_dl", d), |b| b.iter(|| m_dl(black_box(&adj)).unwrap()));
    }
    g.finish();
}

fn combinatorics(c: &mut Criterion) {
    let v = [3.0, -1.0, 2.0, 2.0, 0.5, -4.0];
    c.bench_function("ordered_product_bound", |b| b.iter(|| ordered_product_bound(black_box(&v)).unwrap()));
    c.bench_function("enumerate_small_irreps/10", |b| {
        b.iter(|| enumerate_small_irreps(black_box(10), 99).unwrap())
    });
}

criterion_group!(benches, solver, checks, combinatorics);
criterion_main!(benches);
