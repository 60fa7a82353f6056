//! Criterion benchmarks for the packing solvers and reductions, run through
//! `cargo bench -p alpp-bench`.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};

use alpp_core::colorcoding::{solve_color_coding, ColorCodingOptions};
use alpp_core::generate::{random_gnp, random_grid_subgraph, random_mcc, RandomParams};
use alpp_core::matching::solve_small_ell;
use alpp_core::oracle::oracle_max_packing;
use alpp_core::reductions::{generate_mcc_extended, reduce_sapp_to_alpp};
use alpp_core::td::{heuristic_tree_decomposition, make_nice, solve_dp, StateMode};
use alpp_core::{Instance, ProblemKind};

fn params(k: usize, ell: usize, a: f64) -> RandomParams {
    RandomParams {
        terminal_fraction: a,
        k,
        ell,
        kind: ProblemKind::Alpp,
    }
}

fn matching(c: &mut Criterion) {
    let mut g = c.benchmark_group("matching");
    for n in [50, 200, 800] {
        let inst = random_gnp(n, 6.0 / n as f64, &params(n / 8, 3, 0.3), 1).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve_small_ell(black_box(inst)).unwrap())
        });
    }
    g.finish();
}

fn dp(c: &mut Criterion) {
    let mut g = c.benchmark_group("dp_grid_4x15");
    for ell in [4, 6] {
        let inst = random_grid_subgraph(4, 15, 0.9, &params(3, ell, 0.35), 3).unwrap();
        let nice = make_nice(&heuristic_tree_decomposition(inst.graph(), None));
        for (name, mode) in [("subset", StateMode::Subset), ("counted", StateMode::Counted)] {
            g.bench_function(BenchmarkId::new(name, ell), |b| {
                b.iter(|| solve_dp(black_box(&inst), &nice, mode).unwrap())
            });
        }
    }
    g.finish();
}

fn color_coding(c: &mut Criterion) {
    let mut g = c.benchmark_group("colorcoding");
    g.sample_size(20);
    for (k, ell) in [(1, 3), (2, 2), (2, 3)] {
        let inst = random_gnp(14, 0.35, &params(k, ell, 0.5), 5).unwrap();
        let opts = ColorCodingOptions::default();
        g.bench_function(BenchmarkId::from_parameter(format!("k{k}_ell{ell}")), |b| {
            b.iter(|| solve_color_coding(black_box(&inst), &opts).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let inst: Instance = random_gnp(12, 0.3, &params(2, 4, 0.5), 9).unwrap();
    c.bench_function("oracle_n12", |b| b.iter(|| oracle_max_packing(black_box(&inst)).unwrap()));
}

fn reductions(c: &mut Criterion) {
    let sapp = random_gnp(
        30,
        0.15,
        &RandomParams {
            kind: ProblemKind::Sapp,
            ..params(3, 5, 0.3)
        },
        4,
    )
    .unwrap();
    c.bench_function("reduce_sapp_n30_ell5", |b| b.iter(|| reduce_sapp_to_alpp(black_box(&sapp)).unwrap()));
    let mcc = random_mcc(4, 9, 0.3, true, 2).unwrap();
    c.bench_function("mcc_gadget_k4_n9", |b| b.iter(|| generate_mcc_extended(black_box(&mcc)).unwrap()));
}

pub fn benchmarks(c: &mut Criterion) {
    matching(c);
    dp(c);
    color_coding(c);
    oracle(c);
    reductions(c);
}
