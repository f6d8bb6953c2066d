use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mana_core::ensembles::{sample, EnsembleSpec, SeededStream};
use std::hint::black_box;

fn ensembles(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample");
    let specs = [
        EnsembleSpec::Reduced { d_a: 27, d_b: 1 },
        EnsembleSpec::Reduced { d_a: 27, d_b: 27 },
        EnsembleSpec::SimpleMixture { dim: 27, delta: 1.0 },
        EnsembleSpec::AverageMixture { dim: 27, n: 10 },
    ];
    for spec in specs {
        let id = BenchmarkId::new(spec.name(), format!("{}x{}", spec.dim(), spec.knob()));
        let mut i = 0u64;
        g.bench_function(id, |b| {
            b.iter(|| {
                i += 1;
                sample(black_box(&spec), &SeededStream::new(2, i)).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, ensembles);
criterion_main!(benches);
