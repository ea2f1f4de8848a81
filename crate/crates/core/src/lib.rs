//! Runge-Kutta fixed-point fast sweeping with third-order WENO derivatives
//! for static Hamilton-Jacobi equations `H(x, grad phi) = f(x)`, on single
//! Cartesian grids and with the sparse-grid combination technique on
//! semi-coarsened grid families.

pub mod analysis;
pub mod combine;
pub mod deriv;
pub mod error;
pub mod grid;
pub mod interp;
pub mod problem;
pub mod sweeper;

pub use analysis::{
    convergence_orders, emit_table, error_norms, error_norms_with, ErrorNorms, RefinementStudy,
};
pub use combine::{
    combine_components, combine_fields, prolongate_components, solve_components, solve_sparse,
    ComponentSolution, SparseSolution, SparseTimings,
};
pub use deriv::DerivativeMode;
pub use error::{Error, Result};
pub use grid::{CartesianGrid, PlanEntry, SparsePlan};
pub use interp::{prolongate, Prolongation};
pub use problem::{
    make_benchmark, BoundaryData, Case, GammaMember, Hamiltonian, HamiltonianSpec, PointFn,
    ProblemSpec,
};
pub use sweeper::{
    boundary_band, initialize, lax_friedrichs, rk_iteration, solve_single_grid, BandShape,
    PhaseTimings, ScalarField, SingleGridSolution, SweepConfig, Sweeper,
};
