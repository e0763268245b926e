use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use optapprox::dalpha::gram;
use optapprox::levinson::levinson_solve;
use optapprox::linalg::bareiss_solve;
use optapprox::roots::{first_zero, poly_roots};
use optapprox::{optimal, Alpha};
use optapprox_bench::{cube, dense_polynomial, eta_one};

fn gram_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram");
    for m in [1_000usize, 100_000] {
        let f = eta_one(m);
        group.bench_with_input(BenchmarkId::new("eta_one_n8", m), &f, |b, f| {
            b.iter(|| gram(black_box(f), 8, Alpha::int(-2)).unwrap())
        });
    }
    group.finish();
}

fn exact_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    let f = cube();
    for n in [3usize, 8, 16] {
        let system = gram(&f, n, Alpha::int(-2)).unwrap();
        group.bench_with_input(BenchmarkId::new("bareiss", n), &system, |b, s| {
            b.iter(|| bareiss_solve(black_box(&s.matrix), &s.rhs).unwrap())
        });
    }
    group.finish();
}

// Same Toeplitz system, solved by the recursion and by the dense Cholesky path.
fn hardy_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("hardy");
    let f = dense_polynomial();
    for n in [10usize, 40] {
        group.bench_with_input(BenchmarkId::new("levinson", n), &n, |b, &n| {
            b.iter(|| levinson_solve(black_box(&f), n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cholesky", n), &n, |b, &n| {
            b.iter(|| optimal(black_box(&f), n, Alpha::int(0)).unwrap())
        });
    }
    group.finish();
}

fn roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots");
    let f = dense_polynomial();
    for n in [8usize, 30] {
        let p = optimal(&f, n, Alpha::int(0)).unwrap().p;
        group.bench_with_input(BenchmarkId::new("companion", n), &p, |b, p| {
            b.iter(|| poly_roots(black_box(p)).unwrap())
        });
    }
    let long = eta_one(1_000_000);
    group.bench_function("first_zero_1e6", |b| {
        b.iter(|| first_zero(black_box(&long), Alpha::int(-2)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, gram_assembly, exact_solve, hardy_solvers, roots);
criterion_main!(benches);
