//! Benchmarks for the hot paths: reduction, full fast-path analysis, the
//! brute-force wall oracle, and an exhaustive classification sweep.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bottkit_bench::{dense_tower, m7};
use bottkit_core::{
    all_relations, classify_fano_with, nef_generators_with, oracle_report, relation_degrees_with,
    BottMatrix, Divisor,
};

fn bench_relations(c: &mut Criterion) {
    let m = m7();
    c.bench_function("relations/m7", |b| {
        b.iter(|| all_relations(black_box(&m)))
    });
    let tall = dense_tower(24);
    c.bench_function("relations/dense_r24", |b| {
        b.iter(|| all_relations(black_box(&tall)))
    });
}

fn bench_fast_path(c: &mut Criterion) {
    let m = dense_tower(12);
    let anticanonical = Divisor::anticanonical(m.r());
    c.bench_function("fast_path/dense_r12", |b| {
        b.iter(|| {
            let relations = all_relations(black_box(&m));
            let certificate = relation_degrees_with(&relations, black_box(&anticanonical));
            let generators = nef_generators_with(&relations);
            let fano = classify_fano_with(&m, &relations).expect("routes agree");
            black_box((certificate, generators, fano))
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let m = dense_tower(10);
    let anticanonical = Divisor::anticanonical(m.r());
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("dense_r10", |b| {
        b.iter(|| oracle_report(black_box(&m), black_box(&anticanonical), 16).expect("within cap"))
    });
    group.finish();
}

fn bench_census_sweep(c: &mut Criterion) {
    // The r = 3 box with entries in [-2, 2]: 125 towers classified per
    // iteration, mirroring what the census command does per slice.
    let towers: Vec<BottMatrix> = {
        let mut all = Vec::with_capacity(125);
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                for d in -2..=2i64 {
                    all.push(
                        BottMatrix::from_rows_i64(&[&[a, b], &[d]]).expect("triangle entries"),
                    );
                }
            }
        }
        all
    };
    c.bench_function("census/r3_box", |b| {
        b.iter(|| {
            let mut fano = 0u32;
            for m in &towers {
                let relations = all_relations(black_box(m));
                let report = classify_fano_with(m, &relations).expect("routes agree");
                fano += u32::from(report.is_fano);
            }
            black_box(fano)
        })
    });
}

criterion_group!(
    benches,
    bench_relations,
    bench_fast_path,
    bench_oracle,
    bench_census_sweep
);
criterion_main!(benches);
