//! Persistence pipeline cost: filtered complex construction plus column
//! reduction, for the base filtration and one axis filtration.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mwd_bench::seeded_filtered;
use mwd_core::persistence::{filtered_cuboid, filtered_multiway_dowker, persistence_diagram};

fn bench_diagrams(c: &mut Criterion) {
    let mut group = c.benchmark_group("persistence_diagram");
    group.sample_size(20);
    for (name, dims, density) in [
        ("3x3x3 d0.6", vec![3usize, 3, 3], 0.6),
        ("4x4x4 d0.4", vec![4, 4, 4], 0.4),
        ("4x4 d0.8", vec![4, 4], 0.8),
    ] {
        let fr = seeded_filtered(&dims, density, 23);
        group.bench_with_input(BenchmarkId::new("base", name), &fr, |b, fr| {
            b.iter(|| persistence_diagram(&filtered_cuboid(black_box(fr), 2).unwrap()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("axis0", name), &fr, |b, fr| {
            b.iter(|| {
                persistence_diagram(&filtered_multiway_dowker(black_box(fr), 0, 2).unwrap())
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_diagrams);
criterion_main!(benches);
