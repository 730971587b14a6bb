use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sodacan::barriers::{build_radial_ode_barrier, KappaBarrier};
use sodacan::classifier::classify;
use sodacan::geometry::Params;
use sodacan::pcalc::{delta_p_radial_power, residual, ORACLE_H};
use sodacan::solver::{solve, DataProfile, SolveConfig};
use sodacan::wiener::capacity_lower_bound_cylinder;

fn bench_pcalc(c: &mut Criterion) {
    c.bench_function("delta_p_radial_power", |b| {
        b.iter(|| delta_p_radial_power(black_box(1.3), black_box(1.4), 2.7, 3, 0.6).unwrap())
    });
    let v = KappaBarrier::new(0.5, 3.0, 2).unwrap().candidate();
    c.bench_function("residual_oracle_kappa", |b| {
        b.iter(|| residual(&v, 3.0, 2, black_box(0.6), black_box(-0.2), ORACLE_H).unwrap())
    });
    let ode = build_radial_ode_barrier(2, 3.0, 2.0).unwrap();
    c.bench_function("radial_ode_eval", |b| b.iter(|| ode.u(black_box(0.7))));
}

fn bench_capacity(c: &mut Criterion) {
    let mut g = c.benchmark_group("capacity");
    g.sample_size(10);
    g.bench_function("cylinder_n3_h4", |b| {
        b.iter(|| capacity_lower_bound_cylinder(3, 1.0, black_box(4.0)).unwrap())
    });
    g.bench_function("cylinder_n2_tall", |b| {
        b.iter(|| capacity_lower_bound_cylinder(2, 1.0, black_box(256.0)).unwrap())
    });
    g.finish();
}

fn bench_classifier(c: &mut Criterion) {
    c.bench_function("classify_sweep", |b| {
        b.iter(|| {
            let mut acc = 0usize;
            for pi in 1..=40u32 {
                let p = (100 + 10 * pi) as f64 / 100.0;
                for li in 1..=40u32 {
                    let l = (10 * li) as f64 / 100.0;
                    acc += classify(3, p, l, 1.0).unwrap().label.kind().len();
                }
            }
            acc
        })
    });
}

fn bench_solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solver");
    g.sample_size(10);
    let cfg = SolveConfig {
        t_end: Some(-0.5),
        ..SolveConfig::moving_can(
            Params::new(3, 2.0, 2.0, 1.0).unwrap(),
            DataProfile::Linear,
            64,
        )
    };
    g.bench_function("moving_can_64_half_span", |b| {
        b.iter(|| solve(black_box(&cfg)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_pcalc, bench_capacity, bench_classifier, bench_solver);
criterion_main!(benches);
