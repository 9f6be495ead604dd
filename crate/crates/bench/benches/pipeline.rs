//! Benchmarks along the pipeline: state sums, cube construction, complex
//! assembly, and Betti tables, on corpus diagrams and seeded random ones.

use arrowpoly::corpus::corpus_diagram;
use arrowpoly::cube::build_cube;
use arrowpoly::homology::betti_table;
use arrowpoly::khovanov::{build_complex, GradingSystem};
use arrowpoly::knotio::random_diagram;
use arrowpoly::moves::random_equivalent;
use arrowpoly::{arrow_polynomial, normalized_arrow_polynomial, VirtualLinkDiagram};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn kishino() -> VirtualLinkDiagram {
    corpus_diagram("kishino").expect("bundled diagram")
}

fn bench_arrow_polynomial(c: &mut Criterion) {
    let mut group = c.benchmark_group("arrow_polynomial");
    group.bench_function("kishino", |b| {
        let d = kishino();
        b.iter(|| black_box(arrow_polynomial(black_box(&d))));
    });
    for n in [8, 12, 16] {
        group.bench_with_input(BenchmarkId::new("random", n), &n, |b, &n| {
            let d = random_diagram(n, 1, 0, 42);
            b.iter(|| black_box(arrow_polynomial(black_box(&d))));
        });
    }
    group.finish();
}

fn bench_normalized(c: &mut Criterion) {
    c.bench_function("normalized_arrow_polynomial/kishino", |b| {
        let d = kishino();
        b.iter(|| black_box(normalized_arrow_polynomial(black_box(&d))));
    });
}

fn bench_cube(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_cube");
    for n in [8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let d = random_diagram(n, 1, 0, 42);
            b.iter(|| black_box(build_cube(black_box(&d)).expect("within limits")));
        });
    }
    group.finish();
}

fn bench_complex(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_complex_full");
    for n in [8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let d = random_diagram(n, 1, 0, 42);
            let cube = build_cube(&d).expect("within limits");
            b.iter(|| {
                black_box(
                    build_complex(black_box(&cube), GradingSystem::Full).expect("within limits"),
                )
            });
        });
    }
    group.finish();
}

fn bench_betti(c: &mut Criterion) {
    let mut group = c.benchmark_group("betti_table_full");
    for n in [8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let d = random_diagram(n, 1, 0, 42);
            let cube = build_cube(&d).expect("within limits");
            let complex = build_complex(&cube, GradingSystem::Full).expect("within limits");
            b.iter(|| black_box(betti_table(black_box(&complex), true)));
        });
    }
    group.finish();
}

fn bench_moves(c: &mut Criterion) {
    c.bench_function("random_equivalent/kishino_8_moves", |b| {
        let d = kishino();
        b.iter(|| black_box(random_equivalent(black_box(&d), 8, 7)));
    });
}

criterion_group!(
    benches,
    bench_arrow_polynomial,
    bench_normalized,
    bench_cube,
    bench_complex,
    bench_betti,
    bench_moves
);
criterion_main!(benches);
