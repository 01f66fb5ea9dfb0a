//! Construction throughput: maximal-box enumeration and cellular chains.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mwd_bench::seeded_relation;
use mwd_core::catalog;
use mwd_core::chains::betti;
use mwd_core::prodcomplex::dowker_product;
use mwd_core::simplicial::cuboid;

fn bench_dowker_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("dowker_product");
    for (name, dims, density) in [
        ("3x3x3 d0.5", vec![3usize, 3, 3], 0.5),
        ("4x4x4 d0.5", vec![4, 4, 4], 0.5),
        ("4x4x4 d0.8", vec![4, 4, 4], 0.8),
        ("3x3x3x3 d0.5", vec![3, 3, 3, 3], 0.5),
    ] {
        let r = seeded_relation(&dims, density, 9);
        group.bench_with_input(BenchmarkId::from_parameter(name), &r, |b, r| {
            b.iter(|| dowker_product(black_box(r)))
        });
    }
    group.finish();
}

fn bench_cellular_homology(c: &mut Criterion) {
    let flag = catalog::cube_flag();
    let p = dowker_product(&flag);
    c.bench_function("cube_flag cellular betti d<=2", |b| {
        b.iter(|| betti(&black_box(&p).cellular_chain_complex(2), false))
    });
    c.bench_function("cube_flag cuboid betti d<=2", |b| {
        b.iter(|| betti(&cuboid(black_box(&flag)).chain_complex(2), false))
    });
}

criterion_group!(benches, bench_dowker_product, bench_cellular_homology);
criterion_main!(benches);
