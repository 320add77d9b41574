use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hstair::echcap::{c_lower, ellipsoid_caps, path_table, toric_caps_with_table};
use hstair::exactnum::{int, rat};
use hstair::Surd;

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("path_table");
    g.sample_size(10);
    for n in [1_001usize, 10_001, 50_001] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| path_table(black_box(n)))
        });
    }
    g.finish();
}

fn toric(c: &mut Criterion) {
    let table = path_table(50_001);
    let mut g = c.benchmark_group("toric_caps");
    g.sample_size(10);
    for (label, b) in [("0", int(0)), ("1/5", rat(1, 5)), ("3/10", rat(3, 10))] {
        g.bench_function(label, |bn| {
            bn.iter(|| toric_caps_with_table(&table, black_box(&b), &int(1), 25_000).unwrap())
        });
    }
    g.finish();
}

fn ellipsoid(c: &mut Criterion) {
    let golden = "3+1*sqrt(5)".parse::<Surd>().unwrap();
    let mut g = c.benchmark_group("ellipsoid_caps");
    g.sample_size(20);
    g.bench_function("rational 29/5", |b| {
        b.iter(|| ellipsoid_caps(&Surd::one(), &Surd::from_rational(rat(29, 5)), 5_000).unwrap())
    });
    g.bench_function("quadratic", |b| {
        b.iter(|| ellipsoid_caps(&Surd::one(), &golden, 5_000).unwrap())
    });
    g.finish();
}

fn lower_bound(c: &mut Criterion) {
    let table = toric_caps_with_table(&path_table(10_001), &rat(3, 10), &int(1), 5_000).unwrap();
    let mut g = c.benchmark_group("c_lower");
    g.sample_size(20);
    g.bench_function("z = 6, K = 5000", |b| {
        b.iter(|| c_lower(&Surd::from_int(6), &table, 5_000).unwrap())
    });
    g.finish();
}

criterion_group!(benches, tables, toric, ellipsoid, lower_bound);
criterion_main!(benches);
