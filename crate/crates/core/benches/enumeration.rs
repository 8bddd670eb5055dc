use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use uclasses::bruteforce::{enumerate_classes, Options};
use uclasses::root_system::{RootKind, RootSystem};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    for (kind, rank, q) in [(RootKind::B, 2, 8), (RootKind::G, 2, 3), (RootKind::C, 3, 3)] {
        let rs = Arc::new(RootSystem::new(kind, rank).unwrap());
        let label = format!("{}-q{q}", rs.label());
        for parallel in [false, true] {
            let name = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(name, &label), &rs, |b, rs| {
                b.iter(|| enumerate_classes(rs.clone(), q, Options { parallel }).unwrap().class_count())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
