use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use gtrig::constants::gl_series;
use gtrig::elliptic::EllipticParams;
use gtrig::identities::check_ma_sin;
use gtrig::numerics::tanh_sinh;
use gtrig::Params;
use std::hint::black_box;

fn bench_params_construction(c: &mut Criterion) {
    c.bench_function("params_new_2_4", |b| {
        b.iter(|| Params::new(black_box(2.0), black_box(4.0)).unwrap().pi())
    });
}

fn bench_sin_eval(c: &mut Criterion) {
    let params = Params::new(2.0, 4.0).unwrap();
    let _ = params.sin(0.4); // warm the inversion cache outside the loop
    c.bench_function("sin_2_4_warm", |b| {
        b.iter(|| params.sin(black_box(0.9)))
    });
    c.bench_function("sin_2_4_cold_cache", |b| {
        b.iter_batched(
            || Params::new(2.0, 4.0).unwrap(),
            |p| p.sin(black_box(0.9)),
            BatchSize::SmallInput,
        )
    });
}

fn bench_arcsin(c: &mut Criterion) {
    let params = Params::new(1.5, 3.0).unwrap();
    c.bench_function("arcsin_1p5_3", |b| {
        b.iter(|| params.arcsin(black_box(0.6)).unwrap())
    });
}

fn bench_quadrature(c: &mut Criterion) {
    c.bench_function("tanh_sinh_lemniscatic", |b| {
        b.iter(|| {
            tanh_sinh(
                |t| 1.0 / (1.0 - t.powi(4)).sqrt(),
                0.0,
                black_box(1.0),
                1e-12,
            )
            .unwrap()
            .value
        })
    });
}

fn bench_complete_k(c: &mut Criterion) {
    let params = Params::new(2.0, 2.0).unwrap();
    let _ = params.sin(0.4);
    c.bench_function("K_2_2_modulus_0p8", |b| {
        b.iter_batched(
            || EllipticParams::new(params.clone(), 0.8).unwrap(),
            |e| e.k_complete().value,
            BatchSize::SmallInput,
        )
    });
}

fn bench_gl_series(c: &mut Criterion) {
    c.bench_function("gl_series_p3", |b| {
        b.iter(|| gl_series(black_box(3.0), 1e-10).unwrap().value)
    });
}

fn bench_identity_point(c: &mut Criterion) {
    c.bench_function("ma_sin_residual_p4", |b| {
        b.iter(|| check_ma_sin(black_box(4.0), black_box(0.5)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_params_construction,
    bench_sin_eval,
    bench_arcsin,
    bench_quadrature,
    bench_complete_k,
    bench_gl_series,
    bench_identity_point
);
criterion_main!(benches);
