use std::hint::black_box;

use cesaro::heat::heat_trace_with;
use cesaro::spectra::Spectrum;
use cesaro::summability::{integer_comb, riesz_sum_with, CesaroOrder};
use cesaro::testfn::TestFunction;
use cesaro::zeta::{lattice_sampling_with, LatticeFunction};
use cesaro::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const PATHS: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn riesz(c: &mut Criterion) {
    let comb = integer_comb(|n| (n as f64).sqrt());
    let mut group = c.benchmark_group("riesz_sum");
    for x in [1e5, 1e7] {
        for (name, exec) in PATHS {
            group.bench_with_input(BenchmarkId::new(name, x), &x, |b, &x| {
                b.iter(|| riesz_sum_with(exec, &comb, CesaroOrder(3), black_box(x)).unwrap())
            });
        }
    }
    group.finish();
}

fn heat(c: &mut Criterion) {
    let torus = Spectrum::torus(4, 200_000).unwrap();
    let mut group = c.benchmark_group("heat_trace_t4");
    for (name, exec) in PATHS {
        group.bench_function(name, |b| {
            b.iter(|| heat_trace_with(exec, &torus, black_box(1e-3), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn lattice(c: &mut Criterion) {
    let g = LatticeFunction::Radial(TestFunction::exp_decay());
    let mut group = c.benchmark_group("lattice_gaussian_n4");
    for (name, exec) in PATHS {
        group.bench_function(name, |b| {
            b.iter(|| lattice_sampling_with(exec, &g, black_box(0.01), 4).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, riesz, heat, lattice);
criterion_main!(benches);
