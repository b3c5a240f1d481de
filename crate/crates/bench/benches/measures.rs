//! Criterion benchmarks: the closed-form measure on growing alphabets, the
//! iterative measures, and the certified capacity solvers.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use alphainfo::alpha::AlphaOrder;
use alphainfo::capacity;
use alphainfo::prob::{sample_channel, sample_joint, seeded_rng, JointPMF};
use alphainfo::sibson;

fn bench_sibson_mi(c: &mut Criterion) {
    let mut group = c.benchmark_group("sibson_mi");
    let mut rng = seeded_rng(7);
    for &n in &[8usize, 64, 256] {
        let joint = sample_joint(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::new("alpha2", n), &joint, |b, j| {
            b.iter(|| sibson::sibson_mi(black_box(j), AlphaOrder::new(2.0)).value)
        });
        group.bench_with_input(BenchmarkId::new("alpha_inf", n), &joint, |b, j| {
            b.iter(|| sibson::sibson_mi(black_box(j), AlphaOrder::Infinity).value)
        });
    }
    group.finish();
}

fn bench_iterative_measures(c: &mut Criterion) {
    let mut group = c.benchmark_group("iterative");
    let mut rng = seeded_rng(8);
    let joint: JointPMF = sample_joint(&mut rng, 8, 8);
    group.bench_function("csiszar_8x8", |b| {
        b.iter(|| sibson::csiszar_mi(black_box(&joint), AlphaOrder::new(2.0), 1e-9).unwrap())
    });
    group.bench_function("lapidoth_pfister_8x8", |b| {
        b.iter(|| {
            sibson::lapidoth_pfister_mi(black_box(&joint), AlphaOrder::new(2.0), 2, 1e-8).unwrap()
        })
    });
    group.finish();
}

fn bench_capacity(c: &mut Criterion) {
    let mut group = c.benchmark_group("capacity");
    group.sample_size(20);
    let mut rng = seeded_rng(9);
    for &n in &[3usize, 6] {
        let ch = sample_channel(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::new("sibson", n), &ch, |b, ch| {
            b.iter(|| {
                capacity::sibson_capacity(black_box(ch), AlphaOrder::new(2.0), 1e-9)
                    .unwrap()
                    .value
            })
        });
        group.bench_with_input(BenchmarkId::new("zero_error_fb", n), &ch, |b, ch| {
            b.iter(|| {
                capacity::zero_error_feedback_capacity(black_box(ch), 1e-9)
                    .unwrap()
                    .value
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sibson_mi, bench_iterative_measures, bench_capacity);
criterion_main!(benches);
