use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use sgsweep_bench::{example2, example2_plan};
use sgsweep_core::{
    initialize, prolongate, solve_components, solve_sparse, DerivativeMode, Prolongation, Sweeper,
};

fn sweep(c: &mut Criterion) {
    let (spec, grid, cfg) = example2(160);
    let start = initialize(&spec, &grid, &cfg).expect("initialized field");
    let mut sweeper = Sweeper::new(&spec, &grid, &cfg).expect("sweeper");
    c.bench_function("rk sweep ex2 160^2", |b| {
        b.iter_batched_ref(
            || start.clone(),
            |field| {
                sweeper
                    .rk_iteration(field, 0, DerivativeMode::Weno3, 0)
                    .expect("finite sweep")
            },
            BatchSize::LargeInput,
        )
    });
}

fn prolongation(c: &mut Criterion) {
    let (spec, plan, cfg) = example2_plan(20, 3);
    let components = solve_components(&spec, &plan, &cfg, 1).expect("components converge");
    let target = plan.finest_grid();
    let coarse = components
        .iter()
        .find(|s| s.levels.iter().all(|l| *l == 1))
        .or_else(|| components.first())
        .expect("at least one component");
    let mut group = c.benchmark_group("prolongate to 160^2");
    for (name, method) in [
        ("lagrange", Prolongation::Lagrange),
        ("weno", Prolongation::weno()),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| prolongate(&coarse.field, &target, method).expect("compatible"))
        });
    }
    group.finish();
}

fn sparse_solve(c: &mut Criterion) {
    let (spec, plan, cfg) = example2_plan(10, 2);
    let mut group = c.benchmark_group("sparse ex2");
    group.sample_size(10);
    group.bench_function("N_r=10 N_L=2", |b| {
        b.iter(|| solve_sparse(&spec, &plan, &cfg, Prolongation::weno(), 1).expect("converges"))
    });
    group.finish();
}

criterion_group!(benches, sweep, prolongation, sparse_solve);
criterion_main!(benches);
