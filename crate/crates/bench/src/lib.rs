//! Shared fixtures for the criterion benches.

use sgsweep_core::{
    make_benchmark, CartesianGrid, DerivativeMode, ProblemSpec, SparsePlan, SweepConfig,
};

/// Example 2 with its square grid of `n` cells per axis and the default
/// WENO configuration.
pub fn example2(n: usize) -> (ProblemSpec, CartesianGrid, SweepConfig) {
    let spec = make_benchmark(2, None).expect("example 2 exists");
    let grid = CartesianGrid::new(&spec.origin, &spec.extent, &[n, n]).expect("valid grid");
    let cfg = SweepConfig::for_problem(&spec, DerivativeMode::Weno3);
    (spec, grid, cfg)
}

pub fn example2_plan(root: usize, levels: u32) -> (ProblemSpec, SparsePlan, SweepConfig) {
    let (spec, _, cfg) = example2(root);
    let plan = SparsePlan::semi_coarsened_family(&spec.origin, &spec.extent, &[root, root], levels)
        .expect("valid plan");
    (spec, plan, cfg)
}
