use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use medlab_core::constructions::{cyclic_config, gaussian_config};
use medlab_core::optimizer::CentroidObjective;
use medlab_core::verifier::{verify_k_centroid_shatter_with, verify_k_shatter_with};
use medlab_core::{Exec, Scoring, SubsetMode, VerifyOptions};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn lp_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_k_shatter/cyclic(10,4),k=2");
    let x = cyclic_config(10, 4).unwrap();
    for (name, exec) in MODES {
        let opts = VerifyOptions {
            exec,
            ..VerifyOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_k_shatter_with(black_box(&x), 2, Scoring::Linear, &opts).unwrap())
        });
    }
    group.finish();
}

fn centroid_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_k_centroid_shatter/gaussian(64,134),k=2");
    let x = gaussian_config(64, 134, 1).unwrap();
    for (name, exec) in MODES {
        let opts = VerifyOptions {
            exec,
            ..VerifyOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                verify_k_centroid_shatter_with(black_box(&x), 2, Scoring::Euclidean, &opts).unwrap()
            })
        });
    }
    group.finish();
}

fn hinge_loss_and_gradient(c: &mut Criterion) {
    let mut group = c.benchmark_group("centroid_objective/m=80,k=2,d=13");
    let objective = CentroidObjective::new(80, 2, SubsetMode::Exactly).unwrap();
    let x = gaussian_config(80, 13, 5).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| objective.evaluate(black_box(&x), true, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    lp_verification,
    centroid_verification,
    hinge_loss_and_gradient
);
criterion_main!(benches);
