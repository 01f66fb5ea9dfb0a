//! Full ternary atlas cost: twenty-two complexes, fifteen inclusions, and
//! twelve verified natural transformations.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mwd_bench::seeded_relation;
use mwd_core::catalog;
use mwd_core::ternary::{build_atlas, natural_transformations, subcomplex_inclusions};

fn bench_atlas(c: &mut Criterion) {
    let mut group = c.benchmark_group("ternary_atlas");
    group.sample_size(20);
    let flag = catalog::cube_flag();
    group.bench_function("cube_flag build", |b| {
        b.iter(|| build_atlas(black_box(&flag), 2).unwrap())
    });
    let atlas = build_atlas(&flag, 2).unwrap();
    group.bench_function("cube_flag inclusions+transformations", |b| {
        b.iter(|| {
            let incs = subcomplex_inclusions(black_box(&atlas)).unwrap();
            let nts = natural_transformations(black_box(&atlas)).unwrap();
            (incs, nts)
        })
    });
    let random = seeded_relation(&[3, 3, 3], 0.5, 5);
    group.bench_function("random 3x3x3 end-to-end", |b| {
        b.iter(|| {
            let atlas = build_atlas(black_box(&random), 2).unwrap();
            natural_transformations(&atlas).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_atlas);
criterion_main!(benches);
