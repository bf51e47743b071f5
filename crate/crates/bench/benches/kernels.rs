use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lytensor_core::barvinok::estimate_fixed_order;
use lytensor_core::sixvertex::TrotterCircuit;
use lytensor_core::*;
use num_complex::Complex64;

fn ground_state(n: usize, s: f64) -> StateTensor {
    let spec = spectral_data(&build_epr_like(&Graph::path(n).unwrap(), s).unwrap()).unwrap();
    spec.ground_state(n).unwrap()
}

fn tensors(c: &mut Criterion) {
    let mut g = c.benchmark_group("tensor");
    for n in [12, 16, 20] {
        let psi =
            StateTensor::from_real(n, &(0..1usize << n).map(|x| 1.0 / (1 + x) as f64).collect::<Vec<_>>()).unwrap();
        let z: Vec<Complex64> = (0..n).map(|a| Complex64::from_polar(0.9, a as f64)).collect();
        g.bench_with_input(BenchmarkId::new("eval_gen_poly", n), &n, |b, _| {
            b.iter(|| psi.eval_gen_poly(black_box(&z)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("hadamard_all", n), &n, |b, _| {
            b.iter(|| black_box(&psi).hadamard_all())
        });
    }
    g.finish();
}

fn lee_yang(c: &mut Criterion) {
    let mut g = c.benchmark_group("lee_yang");
    g.sample_size(10);
    for n in [6, 8, 10] {
        let psi = ground_state(n, 0.5);
        g.bench_with_input(BenchmarkId::new("equatorial_scan", n), &n, |b, _| {
            b.iter(|| min_equatorial_root_modulus(black_box(&psi)).unwrap())
        });
        let r = MultiRadius::uniform(n, 1.0).unwrap();
        let budget = Budget::new(2_000, 1);
        g.bench_with_input(BenchmarkId::new("falsify_ly", n), &n, |b, _| {
            b.iter(|| falsify_ly(black_box(&psi), &r, &budget).unwrap())
        });
    }
    let p = UnivariatePoly::new((0..=24).map(|k| Complex64::new(1.0 / (1 + k) as f64, 0.3)).collect());
    g.bench_function("poly_roots_deg24", |b| b.iter(|| poly_roots(black_box(&p)).unwrap()));
    g.finish();
}

fn estimation(c: &mut Criterion) {
    let mut g = c.benchmark_group("estimation");
    let n = 12;
    let psi = StateTensor::product(&vec![[Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1)]; n]).unwrap();
    let y = vec![0u8; n];
    for p in [2, 4, 6] {
        g.bench_with_input(BenchmarkId::new("fixed_order", p), &p, |b, &p| {
            b.iter(|| estimate_fixed_order(black_box(&psi), &y, p, 3.0).unwrap())
        });
    }
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectra");
    g.sample_size(10);
    for n in [8, 10, 11] {
        let h = build_epr_like(&Graph::path(n).unwrap(), 0.5).unwrap();
        g.bench_with_input(BenchmarkId::new("spectral_data_path", n), &n, |b, _| {
            b.iter(|| spectral_data(black_box(&h)).unwrap())
        });
    }
    g.finish();
}

fn six_vertex(c: &mut Criterion) {
    let mut g = c.benchmark_group("six_vertex");
    g.sample_size(10);
    for gates in [6, 9, 12] {
        let pairs: Vec<(usize, usize)> = (0..gates).map(|k| (k % 3, (k + 1) % 3)).collect();
        let circ = TrotterCircuit::from_pairs(3, &pairs, 0.3, 0.5, 0.2).unwrap();
        g.bench_with_input(BenchmarkId::new("trotter_trace", gates), &gates, |b, _| {
            b.iter(|| trotter_trace(black_box(&circ)).unwrap())
        });
        let (gamma, params) = circuit_to_six_vertex(&circ);
        g.bench_with_input(BenchmarkId::new("eulerian_partition", gates), &gates, |b, _| {
            b.iter(|| eulerian_partition(black_box(&gamma), &params).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, tensors, lee_yang, estimation, spectra, six_vertex);
criterion_main!(benches);
