use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quathyp::exact::{exact_invariants, ExactMatrix};
use quathyp::normal_forms::normalize;
use quathyp::oracle::eigen_classify;
use quathyp::zclass::enumerate_zclasses;
use quathyp::{classify, Field, Model, QMatrix3, Tolerances};
use quathyp_bench::fixtures;
use std::hint::black_box;

fn identity(c: &mut Criterion) {
    let t = Tolerances::default();
    let id = QMatrix3::identity();
    c.bench_function("classify/identity", |b| b.iter(|| classify(black_box(&id), Model::Ball, Field::Quaternion, &t)));
    let exact = ExactMatrix::from_f64(&id).unwrap();
    c.bench_function("exact/identity", |b| b.iter(|| exact_invariants(black_box(&exact), Model::Ball)));
}

fn per_type(c: &mut Criterion) {
    let t = Tolerances::default();
    let mut group = c.benchmark_group("per_type");
    for s in fixtures(Field::Quaternion, 1, 11) {
        let id = format!("{:?}", s.dtype);
        group.bench_with_input(BenchmarkId::new("classify", &id), &s, |b, s| {
            b.iter(|| classify(&s.matrix, s.model, s.field, &t))
        });
        group.bench_with_input(BenchmarkId::new("oracle", &id), &s, |b, s| b.iter(|| eigen_classify(&s.matrix, s.model, &t)));
        group.bench_with_input(BenchmarkId::new("normalize", &id), &s, |b, s| {
            b.iter(|| normalize(&s.matrix, s.model, s.field, &t))
        });
    }
    group.finish();
}

fn zclasses(c: &mut Criterion) {
    c.bench_function("enumerate_zclasses/H", |b| b.iter(|| enumerate_zclasses(Field::Quaternion)));
}

criterion_group!(benches, identity, per_type, zclasses);
criterion_main!(benches);
