use std::hint::black_box;

use capamp_core::bounds::{beta_witness_private, verify_beta_witness};
use capamp_core::capacity::{ansatz_state, coherent_info, q1_ansatz_value, Ansatz};
use capamp_core::channels::{erasure_channel, private_channel, tensor};
use capamp_core::matcore::eig_hermitian;
use capamp_core::states::zeta_state;
use capamp_core::thresholds::{superactivation_plan, sweep, MarginKind};
use capamp_core::C64;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("eig_hermitian");
    for d in [2, 4, 6] {
        let rho = zeta_state(0.3, d, 1, 1, 1).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(rho.dim()), &rho, |b, rho| {
            b.iter(|| eig_hermitian(black_box(rho.matrix())).unwrap())
        });
    }
    g.finish();
}

fn coherent(c: &mut Criterion) {
    let mut g = c.benchmark_group("coherent_info");
    for d in [2, 3, 4] {
        let ch = private_channel(0.75, d).unwrap();
        let rho = ansatz_state(Ansatz::KeyMixedShieldZero, ch.in_dims()).unwrap();
        g.bench_with_input(BenchmarkId::new("private", d), &(ch, rho), |b, (ch, rho)| {
            b.iter(|| coherent_info(ch, black_box(rho)).unwrap())
        });
    }
    let ch = tensor(&private_channel(0.75, 2).unwrap(), &erasure_channel(0.5, 2).unwrap());
    g.bench_function("private_x_erasure_ansatz", |b| b.iter(|| q1_ansatz_value(black_box(&ch)).unwrap()));
    g.finish();
}

fn witnesses(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    for d in [2, 3, 4] {
        let q = (d + 1) as f64 / (2 * d) as f64;
        let ch = private_channel(q, d).unwrap();
        let w = beta_witness_private(d).unwrap();
        g.bench_with_input(BenchmarkId::new("beta", d), &(ch, w), |b, (ch, w)| {
            b.iter(|| verify_beta_witness(ch, w).unwrap())
        });
    }
    g.finish();
}

fn thresholds(c: &mut Criterion) {
    c.bench_function("sweep_depol_d5_res100", |b| {
        b.iter(|| sweep(MarginKind::Depolarizing, black_box(5), 100).unwrap())
    });
    c.bench_function("superactivation_plan", |b| {
        b.iter(|| superactivation_plan(black_box(0.01), 3, C64::new(0.2, 0.0)).unwrap())
    });
}

criterion_group!(benches, eigen, coherent, witnesses, thresholds);
criterion_main!(benches);
