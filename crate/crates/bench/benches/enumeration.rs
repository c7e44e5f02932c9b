use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sorites_lab::covers::creep;
use sorites_lab::{halting_enum, Cover, Numbering, SpeckerSequence};

fn bench_dovetail(c: &mut Criterion) {
    let mut group = c.benchmark_group("dovetail");
    group.sample_size(10);
    for budget in [100_000u64, 1_000_000] {
        group.bench_with_input(BenchmarkId::new("halting", budget), &budget, |b, &budget| {
            b.iter(|| halting_enum(&Numbering::canonical(), black_box(budget)))
        });
        group.bench_with_input(BenchmarkId::new("singular cover", budget), &budget, |b, &budget| {
            b.iter(|| Cover::singular(&Numbering::canonical(), black_box(budget)))
        });
    }
    group.finish();
}

fn bench_specker(c: &mut Criterion) {
    let enumeration = halting_enum(&Numbering::canonical(), 1_000_000);
    c.bench_function("specker horizon, live 10^6", |b| {
        b.iter(|| SpeckerSequence::from_enumeration(enumeration.clone()).horizon(usize::MAX))
    });
    let cover = Cover::singular(&Numbering::canonical(), 1_000_000);
    c.bench_function("creep singular", |b| b.iter(|| creep(&cover, cover.len(), black_box(200))));
}

criterion_group!(benches, bench_dovetail, bench_specker);
criterion_main!(benches);
