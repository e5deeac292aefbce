use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gw_core::presentation::EnumerationOptions;
use gw_core::{Execution, Presentation, RingSpec};

fn relation_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("relation_enumeration");
    group.sample_size(10);
    for spec in ["z2k:5", "trunc2:5", "trunc2:6"] {
        let spec = RingSpec::parse(spec).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let opts = EnumerationOptions {
                exec,
                ..EnumerationOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), spec), &opts, |b, opts| {
                b.iter(|| Presentation::build(spec, opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, relation_enumeration);
criterion_main!(benches);
