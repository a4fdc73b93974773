use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nlch::harness::{run_sweep, SweepOptions};
use nlch::{Execution, Grid, GridFunction, KernelOperator, KernelSpec, MonotoneGraph, SimConfig};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_apply_b(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_b");
    for n in [256usize, 1024, 2048] {
        let grid = Grid::unit(n);
        let op = KernelOperator::build(KernelSpec::gaussian(0.05, 4.0), grid).unwrap();
        let u = GridFunction::from_fn(grid, |x| (3.0 * x).sin()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &u, |b, u| {
                b.iter(|| op.apply_b_with(exec, black_box(u)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_moreau_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("moreau_oracle");
    group.sample_size(20);
    let graph = MonotoneGraph::Polynomial;
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| graph.moreau_oracle_with(exec, 0.1, black_box(1.3), 1e-5))
        });
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda_sweep");
    group.sample_size(10);
    let cfg = SimConfig {
        n_cells: 128,
        ..SimConfig::default()
    };
    let lambdas = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    for (name, exec) in MODES {
        let opts = SweepOptions {
            exec,
            threads: None,
        };
        group.bench_function(name, |b| {
            b.iter(|| run_sweep(black_box(&cfg), &lambdas, 1e-4, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_apply_b, bench_moreau_oracle, bench_sweep);
criterion_main!(benches);
