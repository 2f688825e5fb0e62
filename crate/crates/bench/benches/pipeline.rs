use criterion::{criterion_group, criterion_main, Criterion};
use stabrank_bench::{pick_problem, reference_geometry, reference_pair};
use stabrank_core::carleson::base_half_width;
use stabrank_core::dbar::CauchyTransform;
use stabrank_core::pipeline::{pick_matrix, pick_min_eigenvalue, stabilize, StabilizeOptions};
use stabrank_core::vfield::{build_v, radius_floor, Grid, GridField};
use stabrank_core::Complex64;

fn cauchy_transform(c: &mut Criterion) {
    let grid = Grid::new(256, 4.0, 4.0).unwrap();
    let t = CauchyTransform::new(grid);
    let data = GridField::from_fn(grid, |z| Complex64::new((-(z - Complex64::new(0.0, 2.0)).norm_sqr()).exp(), 0.0));
    c.bench_function("cauchy_transform_256", |b| b.iter(|| t.apply(&data, true).unwrap()));
}

fn v_field(c: &mut Criterion) {
    let (f1, f2) = reference_pair();
    let dp = 0.1 / 15.0;
    let (d, sys) = reference_geometry(dp);
    let half = 2.0 * d.half_width.max(base_half_width(&f2));
    let grid = Grid::new(256, half, half).unwrap();
    c.bench_function("v_field_256", |b| b.iter(|| build_v(grid, &d, &sys, &f1, &f2, radius_floor(&grid)).unwrap()));
}

fn pick(c: &mut Criterion) {
    let (nodes, targets) = pick_problem(8);
    c.bench_function("pick_eigenvalue_8", |b| b.iter(|| pick_min_eigenvalue(&pick_matrix(&nodes, &targets, 3.0))));
}

fn pipeline(c: &mut Criterion) {
    let (f1, f2) = reference_pair();
    let mut opts = StabilizeOptions::new(0.1);
    opts.resolution = 128;
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("reference_128", |b| b.iter(|| stabilize(&f1, &f2, opts)));
    group.finish();
}

criterion_group!(benches, cauchy_transform, v_field, pick, pipeline);
criterion_main!(benches);
