use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use loopforge::harness::{verify, ExhaustiveScope};
use loopforge::{canonical_form, enumerate_loops, find_t_witnesses, is_wip, FiniteLoop};

fn enumeration(c: &mut Criterion) {
    c.bench_function("enumerate n=5", |b| b.iter(|| enumerate_loops(black_box(5)).unwrap().count()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("enumerate n=6", |b| b.iter(|| enumerate_loops(black_box(6)).unwrap().count()));
    g.bench_function("verify thm3.1a n<=5", |b| b.iter(|| verify("thm3.1a", ExhaustiveScope::up_to(5)).unwrap()));
    g.finish();
}

fn per_loop(c: &mut Criterion) {
    let loops: Vec<FiniteLoop> = enumerate_loops(6).unwrap().step_by(97).collect();
    c.bench_function("canonical_form order 6", |b| {
        b.iter(|| loops.iter().map(|l| canonical_form(l).canonical.table()[7]).sum::<usize>())
    });
    c.bench_function("find_t_witnesses order 6", |b| {
        b.iter(|| loops.iter().map(|l| find_t_witnesses(l).len()).sum::<usize>())
    });
    c.bench_function("is_wip order 6", |b| b.iter(|| loops.iter().filter(|l| is_wip(l)).count()));
}

criterion_group!(benches, enumeration, per_loop);
criterion_main!(benches);
