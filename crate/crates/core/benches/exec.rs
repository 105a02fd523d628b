use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ffcalc::curve::{build_staircase, generate_koch, generate_segment, mass_function_with};
use ffcalc::ffde::{solve, FirstOrderFfdeProblem};
use ffcalc::fuzzy::make_triangular;
use ffcalc::fuzzy_calc::{ff_riemann_integral_with, DiffCase, FuzzyFn, QuadratureRule};
use ffcalc::Exec;

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn mass(c: &mut Criterion) {
    let curve = generate_koch(10).unwrap();
    let alpha = 4f64.ln() / 3f64.ln();
    let mut g = c.benchmark_group("mass_koch_level10");
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| mass_function_with(exec, &curve, black_box(alpha), 0.0, 1.0, 10).unwrap())
        });
    }
    g.finish();
}

fn fuzzy_integral(c: &mut Criterion) {
    let curve = generate_segment(14).unwrap();
    let table = build_staircase(&curve, 1.0, 0.0).unwrap();
    let base = make_triangular(-1.0, 0.0, 2.0).unwrap();
    let f = FuzzyFn::new((0.0, 1.0), |u| Ok(base.scale((3.0 * u).exp())));
    let mut g = c.benchmark_group("fuzzy_integral_segment_level14");
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                ff_riemann_integral_with(
                    exec,
                    QuadratureRule::Midpoint,
                    &f,
                    &curve,
                    &table,
                    0.0,
                    1.0,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

fn full_grid_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_example1_case2_1001_levels");
    for (name, exec) in POLICIES {
        let p = FirstOrderFfdeProblem::example1(DiffCase::II)
            .with_resolution(1001, 1024)
            .with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| solve(black_box(&p)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, mass, fuzzy_integral, full_grid_solve);
criterion_main!(benches);
