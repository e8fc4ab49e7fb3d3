use std::hint::black_box;

use boolsd_bench::upper_points;
use boolsd_core::catalog::{self, special};
use boolsd_core::convolution::{bp_forward, free_f_solve};
use boolsd_core::measure_model::pair_from_triplet;
use boolsd_core::sd_analysis::{check_entry, normal_shift_scan, normal_threshold, SdOptions};
use boolsd_core::transforms::{cauchy, k_from_f};
use boolsd_core::optim::linspace;
use criterion::{criterion_group, criterion_main, Criterion};

fn closed_forms(c: &mut Criterion) {
    let pts = upper_points(20);
    c.bench_function("normal_cauchy 400 points", |b| {
        b.iter(|| pts.iter().map(|&z| special::normal_cauchy(black_box(z)).unwrap().re).sum::<f64>())
    });
    let mp = catalog::free_poisson(1.0).unwrap();
    c.bench_function("free_poisson F 400 points", |b| {
        b.iter(|| pts.iter().map(|&z| mp.f_closed.eval(black_box(z)).unwrap().im).sum::<f64>())
    });
}

fn quadrature(c: &mut Criterion) {
    let k = catalog::kesten(3.0).unwrap();
    let pts = upper_points(6);
    c.bench_function("kesten G by quadrature 36 points", |b| {
        b.iter(|| pts.iter().map(|&z| cauchy(&k.measure, black_box(z)).unwrap().im).sum::<f64>())
    });
}

fn boundary(c: &mut Criterion) {
    let n = catalog::normal(0.0, 1.0).unwrap();
    let grid: Vec<f64> = linspace(-4.0, 4.0, 200).into_iter().filter(|&x| x != 0.0).collect();
    c.bench_function("normal k_from_f 200 points", |b| b.iter(|| k_from_f(&n.f_closed, black_box(&grid)).unwrap()));
}

fn analysis(c: &mut Criterion) {
    let mut g = c.benchmark_group("analysis");
    g.sample_size(10);
    let k = catalog::kesten(2.0).unwrap();
    g.bench_function("check_entry kesten", |b| b.iter(|| check_entry(black_box(&k), &SdOptions::default()).unwrap()));
    g.bench_function("normal_threshold", |b| b.iter(normal_threshold));
    g.bench_function("normal_shift_scan 7 shifts", |b| {
        b.iter(|| normal_shift_scan(black_box(&[0.0, 1.0, 2.0, 3.05, 3.2, 4.0, 6.0])).unwrap())
    });
    g.finish();
}

fn free_side(c: &mut Criterion) {
    let e = catalog::kesten(2.0).unwrap();
    let h = bp_forward(&pair_from_triplet(e.triplet.as_ref().unwrap()).unwrap()).unwrap();
    let pts = upper_points(6);
    c.bench_function("free_f_solve 36 points", |b| {
        b.iter(|| pts.iter().map(|&z| free_f_solve(&h, black_box(z)).unwrap().im).sum::<f64>())
    });
}

criterion_group!(benches, closed_forms, quadrature, boundary, analysis, free_side);
criterion_main!(benches);
