use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use survsched::dynamic::{admit_background, BackgroundFlow, DynamicState};
use survsched::fixtures::table1_instance;
use survsched::oracle::{solve_exact, DEFAULT_NODE_BUDGET};
use survsched::sched::{mqbs_coverage_phase, schedule_baseline, schedule_mqbs};
use survsched_bench::default_cell;

fn heuristics(c: &mut Criterion) {
    let mut g = c.benchmark_group("heuristics");
    for objects in [30, 50, 80] {
        let inst = default_cell(50, objects, 1);
        g.bench_with_input(BenchmarkId::new("mqbs", objects), &inst, |b, i| {
            b.iter(|| schedule_mqbs(black_box(i)))
        });
        g.bench_with_input(BenchmarkId::new("baseline", objects), &inst, |b, i| {
            b.iter(|| schedule_baseline(black_box(i)))
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let inst = table1_instance();
    c.bench_function("oracle/table1", |b| {
        b.iter(|| solve_exact(black_box(&inst), DEFAULT_NODE_BUDGET))
    });
}

fn admission(c: &mut Criterion) {
    let inst = default_cell(50, 50, 2);
    let alloc = mqbs_coverage_phase(&inst).expect("coverable");
    let state = DynamicState::new(inst, alloc, 3, 6).expect("valid thresholds");
    c.bench_function("dynamic/admit", |b| {
        b.iter_batched(
            || state.clone(),
            |mut s| admit_background(&mut s, BackgroundFlow::new(0, vec![2, 2, 2, 2])),
            criterion::BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, heuristics, oracle, admission);
criterion_main!(benches);
