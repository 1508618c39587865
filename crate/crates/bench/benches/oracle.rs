use criterion::{black_box, criterion_group, criterion_main, Criterion};
use voliso::oracle::{
    analytic_second_derivative, brute_force_check, fd_second_derivative, RankOneDirection,
    SampleSpec,
};
use voliso::scan::{scan_domain, ScanSpec};
use voliso::{Grid, Mat2};
use voliso_bench::fixtures;

fn second_derivative(c: &mut Criterion) {
    let f = Mat2::new(1.3, 0.4, -0.2, 0.8);
    let d = RankOneDirection::from_angles(0.3, 1.1);
    for (name, e) in fixtures() {
        c.bench_function(&format!("analytic/{name}"), |b| {
            b.iter(|| analytic_second_derivative(black_box(&e), &f, &d))
        });
        c.bench_function(&format!("fd/{name}"), |b| {
            b.iter(|| fd_second_derivative(black_box(&e), &f, &d, None))
        });
    }
}

fn brute_force(c: &mut Criterion) {
    let spec = SampleSpec {
        n_lambda: 10,
        n_rotations: 4,
        refinements: 200,
        ..SampleSpec::default()
    };
    for (name, e) in fixtures() {
        c.bench_function(&format!("brute/{name}"), |b| {
            b.iter(|| brute_force_check(black_box(&e), &spec))
        });
    }
}

fn scan(c: &mut Criterion) {
    let axis = Grid::log(10f64.powf(-2.5), 10f64.powf(2.5), 64);
    let spec = ScanSpec {
        lambda1: axis,
        lambda2: axis,
        ..ScanSpec::default()
    };
    for (name, e) in fixtures() {
        c.bench_function(&format!("scan64/{name}"), |b| {
            b.iter(|| scan_domain(black_box(&e), &spec))
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = second_derivative, brute_force, scan
}
criterion_main!(benches);
