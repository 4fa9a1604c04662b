use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use csix_core::{
    brute_force_minimum, build_schedule, check_feasibility, decodability_rank_check,
    exhaustive_feasibility, plan_transmissions, run_exchange, ProblemInstance,
};

fn bench_schedule(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_schedule");
    for n in [8, 16, 32, 64] {
        let instance = ProblemInstance::new(n, n / 2).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &instance, |b, i| {
            b.iter(|| build_schedule(black_box(i)))
        });
    }
    group.finish();
}

fn bench_feasibility(c: &mut Criterion) {
    let instance = ProblemInstance::new(14, 7).unwrap();
    let plan = plan_transmissions(&instance);
    c.bench_function("check_feasibility/sorted_prefix/14", |b| {
        b.iter(|| check_feasibility(black_box(&plan), &instance))
    });
    c.bench_function("check_feasibility/exhaustive/14", |b| {
        b.iter(|| exhaustive_feasibility(black_box(&plan), &instance))
    });
}

fn bench_exchange(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_exchange");
    for (n, k) in [(6, 3), (12, 10), (20, 20)] {
        let instance = ProblemInstance::new(n, k).unwrap();
        group.bench_with_input(BenchmarkId::new("32bit", format!("{n}x{k}")), &instance, |b, i| {
            b.iter(|| run_exchange(black_box(i), 0, 32).unwrap())
        });
    }
    group.finish();
}

fn bench_oracles(c: &mut Criterion) {
    let instance = ProblemInstance::new(20, 10).unwrap();
    let schedule = build_schedule(&instance);
    c.bench_function("decodability_rank_check/20x10", |b| {
        b.iter(|| decodability_rank_check(black_box(&instance), &schedule))
    });
    let instance = ProblemInstance::new(6, 3).unwrap();
    c.bench_function("brute_force_minimum/6x3", |b| {
        b.iter(|| brute_force_minimum(black_box(&instance)).unwrap())
    });
}

criterion_group!(benches, bench_schedule, bench_feasibility, bench_exchange, bench_oracles);
criterion_main!(benches);
