use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, Criterion};
use dirac_complex::solver::{make_bump, SpectralOp, SpectralSolver};
use dirac_complex::symbols::{SymbolBundle, SymbolContext};
use dirac_complex::weyl::{Partition, WeylSpace};
use dirac_complex::{build_clifford, C64};
use nalgebra::DVector;

fn clifford(c: &mut Criterion) {
    c.bench_function("clifford n=10", |b| b.iter(|| build_clifford(10).unwrap()));
}

fn weyl(c: &mut Criterion) {
    c.bench_function("weyl C311 k=4", |b| b.iter(|| WeylSpace::new(Partition::P311, 4).unwrap()));
}

fn symbols(c: &mut Criterion) {
    let ctx = SymbolContext::new(3, 3).unwrap();
    let xi = [0.3, -0.2, 0.5, 0.1, -0.7, 0.4, 0.2, 0.6, -0.1];
    c.bench_function("symbol bundle k=3 n=3", |b| b.iter(|| SymbolBundle::build(&ctx, &xi).unwrap()));
}

fn solve(c: &mut Criterion) {
    let s = SpectralSolver::new(2, 2, 8, 2.0 * PI).unwrap();
    let dir = DVector::from_element(1, C64::new(1.0, 0.0));
    let phi = make_bump(2, 2, 8, 2.0 * PI, &[PI; 4], 0.6, &dir).unwrap();
    let f = s.apply_spectral(SpectralOp::D0, &phi).unwrap();
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    g.bench_function("solve_d0 k=2 n=2 N=8", |b| b.iter(|| s.solve_d0(&f, 1e-8).unwrap()));
    g.finish();
}

criterion_group!(benches, clifford, weyl, symbols, solve);
criterion_main!(benches);
