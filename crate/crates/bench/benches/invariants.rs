use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hsikit::grpres::{smith_normal_form, ManifoldDesc};
use hsikit::hsicalc::hsi;
use hsikit::linkdiag::certify_quasi_alternating;
use hsikit::repvar::{enumerate_lens, solve_numeric, SolverOptions, TwistedRepProblem};
use hsikit_bench::{figure_eight, lens_family, sample_matrix};

fn snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [3, 6, 10] {
        let m = sample_matrix(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| smith_normal_form(black_box(m))));
    }
    group.finish();
}

fn lens_ranks(c: &mut Criterion) {
    let family = lens_family(25);
    c.bench_function("hsi_lens_up_to_25", |b| {
        b.iter(|| family.iter().map(|d| hsi(black_box(d)).unwrap().rank).count())
    });
}

fn representations(c: &mut Criterion) {
    let opts = SolverOptions { restarts: 100, ..SolverOptions::default() };
    let prob = TwistedRepProblem::lens(5, 2, (0, 0));
    c.bench_function("solve_numeric_l52", |b| b.iter(|| solve_numeric(black_box(&prob), &opts)));
    c.bench_function("enumerate_lens_l52", |b| b.iter(|| enumerate_lens(black_box(5), 2, (0, 0))));
    let sigma = ManifoldDesc::brieskorn(2, 3, 5);
    c.bench_function("hsi_brieskorn_235", |b| b.iter(|| hsi(black_box(&sigma))));
}

fn quasi_alternating(c: &mut Criterion) {
    let d = figure_eight();
    c.bench_function("qa_figure_eight", |b| b.iter(|| certify_quasi_alternating(black_box(&d), 5)));
}

criterion_group!(benches, snf, lens_ranks, representations, quasi_alternating);
criterion_main!(benches);
