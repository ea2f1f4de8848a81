//! Sparse-grid combination: solve every component grid of a plan
//! independently, prolongate each solution to the finest full grid and form
//! the signed sum.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{CartesianGrid, SparsePlan};
use crate::interp::{prolongate, Prolongation};
use crate::problem::ProblemSpec;
use crate::sweeper::{boundary_band, solve_single_grid, PhaseTimings, ScalarField, SweepConfig};

/// A solved component grid.
#[derive(Debug, Clone)]
pub struct ComponentSolution {
    pub levels: Vec<u32>,
    pub coefficient: i32,
    pub field: ScalarField,
    pub iterations: usize,
    pub warm_start_iterations: usize,
    pub timings: PhaseTimings,
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

/// Solves all component grids of `plan` on `workers` threads. Results are
/// returned in plan order whatever the scheduling.
pub fn solve_components(
    spec: &ProblemSpec,
    plan: &SparsePlan,
    cfg: &SweepConfig,
    workers: usize,
) -> Result<Vec<ComponentSolution>> {
    spec.validate()?;
    cfg.validate()?;
    if plan.dim() != spec.dim() {
        return Err(Error::GridMismatch(format!(
            "plan is {}-dimensional, problem is {}-dimensional",
            plan.dim(),
            spec.dim()
        )));
    }
    let pool = thread_pool(workers)?;
    pool.install(|| {
        plan.entries()
            .par_iter()
            .map(|entry| {
                let sol =
                    solve_single_grid(spec, &entry.grid, cfg).map_err(|e| Error::Component {
                        levels: entry.levels.clone(),
                        source: Box::new(e),
                    })?;
                Ok(ComponentSolution {
                    levels: entry.levels.clone(),
                    coefficient: entry.coefficient,
                    field: sol.field,
                    iterations: sol.iterations,
                    warm_start_iterations: sol.warm_start_iterations,
                    timings: sol.timings,
                })
            })
            .collect()
    })
}

/// Prolongates every component onto `target`, in component order.
pub fn prolongate_components(
    components: &[ComponentSolution],
    target: &CartesianGrid,
    method: Prolongation,
    workers: usize,
) -> Result<Vec<ScalarField>> {
    let pool = thread_pool(workers)?;
    pool.install(|| {
        components
            .par_iter()
            .map(|c| prolongate(&c.field, target, method))
            .collect()
    })
}

/// `sum_k coefficient_k * field_k`, accumulated in the given order.
pub fn combine_fields(terms: &[(i32, &ScalarField)]) -> Result<Vec<f64>> {
    let (_, first) = terms.first().ok_or(Error::Empty("combination terms"))?;
    let grid = first.grid();
    let mut out = vec![0.0; grid.len()];
    for (coefficient, field) in terms {
        if !field.grid().same_points(grid) {
            return Err(Error::GridMismatch(
                "combination terms live on different grids".into(),
            ));
        }
        let c = *coefficient as f64;
        for (o, v) in out.iter_mut().zip(field.values()) {
            *o += c * v;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SparseTimings {
    pub solve: Duration,
    pub prolongation: Duration,
    pub combination: Duration,
}

impl SparseTimings {
    pub fn total(&self) -> Duration {
        self.solve + self.prolongation + self.combination
    }
}

#[derive(Debug, Clone)]
pub struct SparseSolution {
    /// Combined field on the finest full grid. Points of that grid's
    /// boundary band are flagged fixed.
    pub field: ScalarField,
    pub components: Vec<ComponentSolution>,
    pub timings: SparseTimings,
}

/// Combines already solved components onto the plan's finest grid.
pub fn combine_components(
    spec: &ProblemSpec,
    plan: &SparsePlan,
    components: &[ComponentSolution],
    method: Prolongation,
    cfg: &SweepConfig,
    workers: usize,
) -> Result<(ScalarField, Duration, Duration)> {
    let target = plan.finest_grid();
    let start = Instant::now();
    let fields = prolongate_components(components, &target, method, workers)?;
    let prolongation = start.elapsed();

    let start = Instant::now();
    let terms: Vec<(i32, &ScalarField)> = components
        .iter()
        .zip(&fields)
        .map(|(c, f)| (c.coefficient, f))
        .collect();
    let values = combine_fields(&terms)?;
    let (fixed, _) = boundary_band(spec, &target, cfg.band_radius, cfg.band_shape)?;
    let field = ScalarField::new(target, values, fixed)?;
    Ok((field, prolongation, start.elapsed()))
}

/// Solves `spec` with the combination technique on `plan`.
pub fn solve_sparse(
    spec: &ProblemSpec,
    plan: &SparsePlan,
    cfg: &SweepConfig,
    method: Prolongation,
    workers: usize,
) -> Result<SparseSolution> {
    let start = Instant::now();
    let components = solve_components(spec, plan, cfg, workers)?;
    let solve = start.elapsed();
    let (field, prolongation, combination) =
        combine_components(spec, plan, &components, method, cfg, workers)?;
    Ok(SparseSolution {
        field,
        components,
        timings: SparseTimings {
            solve,
            prolongation,
            combination,
        },
    })
}
