use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use histspline::{
    build_histogram, estimate_pdf, fit_interpolating_spline, select_bin_count, BinRule,
    BoundaryCondition, Samples,
};
use histspline_bench::braking_positions;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::hint::black_box;

fn gaussian(n: usize) -> Samples {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    Samples::new(values).unwrap()
}

fn knuth_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("knuth_scan");
    group.sample_size(10);
    for n in [1_000, 100_000] {
        let samples = gaussian(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &samples, |b, s| {
            b.iter(|| select_bin_count(black_box(s), BinRule::knuth()).unwrap())
        });
    }
    group.finish();
}

fn spline_fit(c: &mut Criterion) {
    let samples = gaussian(10_000);
    let hist = build_histogram(&samples, 200).unwrap();
    let profile = histspline::cumulative_masses(&hist).unwrap();
    let mut group = c.benchmark_group("spline_fit");
    for bc in BoundaryCondition::ALL {
        group.bench_function(bc.name(), |b| {
            b.iter(|| fit_interpolating_spline(profile.x(), profile.mass(), black_box(bc)).unwrap())
        });
    }
    group.finish();
}

fn braking_pipeline(c: &mut Criterion) {
    let samples = Samples::new(braking_positions(100)).unwrap();
    let mut group = c.benchmark_group("estimate_pdf");
    group.sample_size(10);
    group.bench_function("braking_100_series_knuth", |b| {
        b.iter(|| estimate_pdf(black_box(&samples), BinRule::knuth(), BoundaryCondition::NotAKnot).unwrap())
    });
    group.finish();
}

criterion_group!(benches, knuth_scan, spline_fit, braking_pipeline);
criterion_main!(benches);
