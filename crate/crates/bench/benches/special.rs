use criterion::{criterion_group, criterion_main, Criterion};
use mana_core::predictions::{exact_mixed_norm, exact_pure_norm, ExactMixedParams};
use mana_core::special::hyp2f1_terminating;
use std::hint::black_box;

fn closed_forms(c: &mut Criterion) {
    c.bench_function("hyp2f1_terminating", |b| {
        b.iter(|| hyp2f1_terminating(black_box(-40.0), 3.0, 45.0, -1.0).unwrap())
    });
    c.bench_function("exact_pure_norm d=243", |b| b.iter(|| exact_pure_norm(black_box(243)).unwrap()));
    c.bench_function("exact_mixed_norm 9x9", |b| {
        b.iter(|| exact_mixed_norm(black_box(&ExactMixedParams::new(9, 9).unwrap())).unwrap())
    });
}

criterion_group!(benches, closed_forms);
criterion_main!(benches);
