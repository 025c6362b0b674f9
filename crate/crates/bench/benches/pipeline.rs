//! Benchmarks of the hot paths: state propagation, normal form, map cells.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use levisqueeze::design::{optimal_detuning_exact, DetuningObjective};
use levisqueeze::dynamics::{evolve, DriftDiffusion};
use levisqueeze::metrics::squeezing_report;
use levisqueeze::normalform::NormalForm;
use levisqueeze::{GaussianState, InitialConditions, SystemParams};

fn params() -> SystemParams {
    SystemParams::new(1.0, 0.01, 0.2, 2e-3, 1e-6).expect("valid")
}

fn bench_evolve(c: &mut Criterion) {
    let p = params();
    let dd = DriftDiffusion::from_params(&p);
    let s0 = GaussianState::thermal_vacuum(&InitialConditions::vacuum()).unwrap();
    let grid: Vec<f64> = (1..=100).map(|k| 3.0 * k as f64).collect();
    c.bench_function("evolve_100_steps", |b| {
        b.iter(|| evolve(black_box(&dd), black_box(&s0), black_box(&grid)).unwrap())
    });
}

fn bench_normal_form(c: &mut Criterion) {
    let p = params();
    c.bench_function("normal_form", |b| {
        b.iter(|| NormalForm::compute(black_box(&p)).unwrap())
    });
}

fn bench_report(c: &mut Criterion) {
    let p = params();
    let dd = DriftDiffusion::from_params(&p);
    let s0 = GaussianState::thermal_vacuum(&InitialConditions::vacuum()).unwrap();
    let s = evolve(&dd, &s0, &[150.0]).unwrap().pop().unwrap();
    c.bench_function("squeezing_report", |b| {
        b.iter(|| squeezing_report(black_box(&s)).unwrap())
    });
}

fn bench_map_cell(c: &mut Criterion) {
    c.bench_function("optimal_detuning_cell", |b| {
        b.iter(|| {
            optimal_detuning_exact(
                black_box(1.0),
                black_box(100.0),
                black_box(1.0),
                DetuningObjective::DisplacementNoise { gamma_disp: 0.01 },
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, bench_evolve, bench_normal_form, bench_report, bench_map_cell);
criterion_main!(benches);
