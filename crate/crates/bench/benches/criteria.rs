use criterion::{black_box, criterion_group, criterion_main, Criterion};
use voliso::criteria::{ks_check, main_check, voliso_check, InfimumDomain, PairGrid};
use voliso::scalar_inf::{infimum_weighted_second, DEFAULT_DOMAIN, DEFAULT_LEVELS};
use voliso::Grid;
use voliso_bench::fixtures;

fn infimum(c: &mut Criterion) {
    for (name, e) in fixtures() {
        c.bench_function(&format!("infimum/h/{name}"), |b| {
            b.iter(|| {
                infimum_weighted_second(
                    black_box(&e.h),
                    DEFAULT_DOMAIN.0,
                    DEFAULT_DOMAIN.1,
                    DEFAULT_LEVELS,
                )
            })
        });
    }
}

fn routes(c: &mut Criterion) {
    let t = Grid::log(1e-2, 1e2, 401);
    let z = Grid::log(1e-2, 1e2, 401);
    let pairs = PairGrid::Split { t, z };
    let domain = InfimumDomain::new(1e-2, 1e2);
    for (name, e) in fixtures() {
        c.bench_function(&format!("main/{name}"), |b| {
            b.iter(|| main_check(black_box(&e), &t, &domain, 1e-8))
        });
        c.bench_function(&format!("voliso/{name}"), |b| {
            b.iter(|| voliso_check(black_box(&e), &t, &z, 1e-8))
        });
        c.bench_function(&format!("ks/{name}"), |b| {
            b.iter(|| ks_check(&black_box(&e).as_general(), &pairs, 1e-8))
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = infimum, routes
}
criterion_main!(benches);
