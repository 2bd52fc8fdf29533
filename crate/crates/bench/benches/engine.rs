use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gww_bench::fixture;
use gww_core::asymptotics::{thm1_prediction, thm2_prediction};
use gww_core::special::{bessel_i, moment, MomentTable};
use gww_core::toeplitz::{log_det, op_coefficients, y_snapshot};
use gww_core::verify::check_differential_identity;
use gww_core::ModelParams;

fn special(c: &mut Criterion) {
    let (ctx, nu, t) = fixture();
    c.bench_function("bessel_i/nu=0.3,t=16", |b| {
        b.iter(|| bessel_i(black_box(&nu), &t, &ctx).unwrap())
    });
    c.bench_function("moment/k=7", |b| {
        b.iter(|| moment(black_box(7), &nu, &t, &ctx).unwrap())
    });
    let mut g = c.benchmark_group("moment_table");
    for k_max in [16usize, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(k_max), &k_max, |b, &k| {
            b.iter(|| MomentTable::symmetric(&nu, &t, k, &ctx, None).unwrap())
        });
    }
    g.finish();
}

fn toeplitz(c: &mut Criterion) {
    let (ctx, nu, _) = fixture();
    let mut g = c.benchmark_group("log_det");
    g.sample_size(20);
    for (n, tau) in [(16usize, 0.5f64), (32, 0.5), (64, 0.5), (64, 2.0)] {
        let p = ModelParams::from_tau(n, nu.clone(), &ctx.real(tau), &ctx).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("tau={tau}"), n), &p, |b, p| {
            b.iter(|| log_det(black_box(p), &ctx).unwrap())
        });
    }
    g.finish();
    let p = ModelParams::from_tau(32, nu.clone(), &ctx.real(0.5f64), &ctx).unwrap();
    c.bench_function("op_coefficients/n=32", |b| {
        b.iter(|| op_coefficients(black_box(&p), &ctx).unwrap())
    });
    c.bench_function("y_snapshot/n=32", |b| {
        b.iter(|| y_snapshot(black_box(&p), &ctx).unwrap())
    });
}

fn asymptotics(c: &mut Criterion) {
    let (ctx, nu, _) = fixture();
    let sub = ctx.real(0.5f64);
    let sup = ctx.real(2u32);
    c.bench_function("thm1_prediction/n=64", |b| {
        b.iter(|| thm1_prediction(64, &nu, black_box(&sub), true, &ctx).unwrap())
    });
    c.bench_function("thm2_prediction/n=64", |b| {
        b.iter(|| thm2_prediction(64, &nu, black_box(&sup), &ctx).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    let (ctx, _, _) = fixture();
    let p = ModelParams::from_f64(3, 0.35, 0.0, 1.7, &ctx).unwrap();
    let h = ctx.real(1u32) >> 40u32;
    let mut g = c.benchmark_group("identity");
    g.sample_size(10);
    g.bench_function("n=3", |b| {
        b.iter(|| check_differential_identity(black_box(&p), &ctx, &h).unwrap())
    });
    g.finish();
}

criterion_group!(benches, special, toeplitz, asymptotics, verification);
criterion_main!(benches);
