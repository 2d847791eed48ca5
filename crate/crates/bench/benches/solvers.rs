use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use twist_core::minimize::{
    build_h, minimize_heteroclinic, minimize_segment, phi_estimate, Direction,
};
use twist_core::transition::minimize_transition;
use twist_core::{
    FrenkelKontorova, GeneratingFunction, MinimizeOptions, NeighboringPair, SegmentSpec,
    TransitionSpec,
};

fn setup() -> (FrenkelKontorova, NeighboringPair, MinimizeOptions) {
    (
        FrenkelKontorova::new(1.0, 1.0).unwrap(),
        NeighboringPair::new(0.0, 1.0).unwrap(),
        MinimizeOptions::default(),
    )
}

fn segments(c: &mut Criterion) {
    let (h, _, o) = setup();
    c.bench_function("segment n=40", |b| {
        b.iter(|| minimize_segment(&h, &SegmentSpec::new(40, black_box(0.0), 1.0), &o).unwrap())
    });
}

fn kinks(c: &mut Criterion) {
    let (h, pair, o) = setup();
    c.bench_function("heteroclinic N=40", |b| {
        b.iter(|| {
            minimize_heteroclinic(&h, &pair, Direction::Ascending, black_box(40), &o).unwrap()
        })
    });
    c.bench_function("phi delta=0.1 n_max=20", |b| {
        b.iter(|| phi_estimate(&h, &pair, black_box(0.1), 20, &o).unwrap())
    });
}

fn reduced(c: &mut Criterion) {
    let (h, _, o) = setup();
    let big = build_h(&h, 2, 1, &o).unwrap();
    c.bench_function("H(2,1) eval", |b| {
        b.iter(|| big.eval(black_box(0.3), black_box(0.6)))
    });
}

fn transitions(c: &mut Criterion) {
    let (h, pair, o) = setup();
    let mut g = c.benchmark_group("transition");
    g.sample_size(20);
    for n in [2usize, 3] {
        let spec = TransitionSpec::uniform(n, 40, 0.05, 80, pair).unwrap();
        g.bench_function(format!("{n} transitions spacing 40"), |b| {
            b.iter(|| minimize_transition(&h, black_box(&spec), &o).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, segments, kinks, reduced, transitions);
criterion_main!(benches);
