//! The Runge-Kutta fixed-point fast sweeping iteration.
//!
//! Each sweep visits the free points of the grid in one of the `2^dim`
//! alternating orderings and applies two Gauss-Seidel passes in that same
//! ordering:
//!
//! ```text
//! phi(1)  = phi(n)  +       c * (f - H_LF(phi))
//! phi(n+1) = phi(1) + 1/2 * c * (f - H_LF(phi))
//! ```
//!
//! with `c = gamma / sum_i(alpha_i / h_i)` and `H_LF` the Lax-Friedrichs
//! numerical Hamiltonian evaluated on the newest available values. Points in
//! the band around the boundary set are pinned and never updated.

use std::time::{Duration, Instant};

use crate::deriv::{extrapolate_ghost, extrapolate_ghost_linear, DerivativeMode};
use crate::error::{Error, Result};
use crate::grid::CartesianGrid;
use crate::problem::{GammaMember, HamiltonianSpec, ProblemSpec};

/// Solution values on a grid plus the mask of pinned boundary-band points.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: CartesianGrid,
    values: Vec<f64>,
    fixed: Vec<bool>,
}

impl ScalarField {
    pub fn new(grid: CartesianGrid, values: Vec<f64>, fixed: Vec<bool>) -> Result<Self> {
        if values.len() != grid.len() || fixed.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "field has {} values and {} flags for a grid of {} points",
                values.len(),
                fixed.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            fixed,
        })
    }

    /// A field with every point free.
    pub fn from_values(grid: CartesianGrid, values: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, values, vec![false; n])
    }

    pub fn constant(grid: CartesianGrid, value: f64) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![value; n],
            fixed: vec![false; n],
        }
    }

    /// Samples `f` at every grid point; all points free.
    pub fn sample(grid: CartesianGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|p| {
                grid.position_into(p, &mut x);
                f(&x)
            })
            .collect();
        let n = grid.len();
        Self {
            grid,
            values,
            fixed: vec![false; n],
        }
    }

    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn fixed(&self) -> &[bool] {
        &self.fixed
    }

    pub fn set_fixed(&mut self, fixed: Vec<bool>) -> Result<()> {
        if fixed.len() != self.values.len() {
            return Err(Error::GridMismatch("fixed mask length".into()));
        }
        self.fixed = fixed;
        Ok(())
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed.iter().filter(|f| **f).count()
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[self.grid.linear_index(index)]
    }

    pub fn into_parts(self) -> (CartesianGrid, Vec<f64>, Vec<bool>) {
        (self.grid, self.values, self.fixed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Step-size multiplier.
    pub gamma: f64,
    /// WENO regularisation.
    pub epsilon: f64,
    /// Convergence threshold on the max-norm change per sweep.
    pub delta: f64,
    pub max_iterations: usize,
    pub derivative_mode: DerivativeMode,
    /// Value assigned to free points before the first-order warm start.
    pub initial_guess: f64,
    /// Threshold of the first-order warm-start solve; `None` skips it.
    pub warm_start_delta: Option<f64>,
    /// Band half-width in cells around the boundary set (`m - 1`).
    pub band_radius: usize,
    pub band_shape: BandShape,
    /// Index of the ordering that opens the sweep cycle.
    pub first_ordering: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            epsilon: 1e-6,
            delta: 1e-11,
            max_iterations: 100_000,
            derivative_mode: DerivativeMode::Weno3,
            initial_guess: 10.0,
            warm_start_delta: Some(1e-4),
            band_radius: 2,
            band_shape: BandShape::Coarsest,
            first_ordering: 0,
        }
    }
}

impl SweepConfig {
    /// Default settings with the problem's own `gamma`.
    pub fn for_problem(spec: &ProblemSpec, mode: DerivativeMode) -> Self {
        Self {
            gamma: spec.gamma,
            derivative_mode: mode,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return bad("gamma must be positive");
        }
        if !(self.delta > 0.0) {
            return bad("delta must be positive");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if matches!(self.warm_start_delta, Some(d) if !(d > 0.0)) {
            return bad("warm-start delta must be positive");
        }
        if !self.initial_guess.is_finite() {
            return bad("initial guess must be finite");
        }
        Ok(())
    }
}

/// How the band half-width is measured on grids with unequal spacings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BandShape {
    /// `radius` times the largest spacing, on every axis.
    #[default]
    Coarsest,
    /// `radius` times each axis' own spacing.
    PerAxis,
}

impl std::str::FromStr for BandShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coarsest" => Ok(BandShape::Coarsest),
            "per-axis" | "per_axis" => Ok(BandShape::PerAxis),
            other => Err(Error::InvalidConfig(format!(
                "unknown band shape `{other}`"
            ))),
        }
    }
}

/// Lax-Friedrichs numerical Hamiltonian
/// `H(x, (p- + p+)/2) - sum_i alpha_i/2 (p+_i - p-_i)`.
#[inline]
pub fn lax_friedrichs(h: &HamiltonianSpec, x: &[f64], minus: &[f64], plus: &[f64]) -> f64 {
    let mut mid = [0.0; 3];
    let mut dissipation = 0.0;
    for i in 0..minus.len() {
        mid[i] = 0.5 * (minus[i] + plus[i]);
        dissipation += 0.5 * h.alpha[i] * (plus[i] - minus[i]);
    }
    h.evaluate(x, &mid[..minus.len()]) - dissipation
}

/// Loop directions of ordering `k`: the Gray code of `k`, a set bit meaning
/// the axis is traversed downward. In 2D this yields the cycle
/// (up, up), (down, up), (down, down), (up, down).
pub fn ordering_directions(k: usize, dim: usize) -> [bool; 3] {
    let n = 1usize << dim;
    let g = (k % n) ^ ((k % n) >> 1);
    [g & 1 != 0, g & 2 != 0, g & 4 != 0]
}

/// Precomputed per-grid state for sweeping one problem.
pub struct Sweeper<'a> {
    hamiltonian: &'a HamiltonianSpec,
    dim: usize,
    shape: [usize; 3],
    strides: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    rhs: Vec<f64>,
    step: f64,
    epsilon: f64,
    previous: Vec<f64>,
}

impl<'a> Sweeper<'a> {
    pub fn new(spec: &'a ProblemSpec, grid: &CartesianGrid, cfg: &SweepConfig) -> Result<Self> {
        cfg.validate()?;
        let dim = grid.dim();
        if spec.dim() != dim {
            return Err(Error::GridMismatch(format!(
                "problem is {}-dimensional, grid is {dim}-dimensional",
                spec.dim()
            )));
        }
        let mut shape = [1; 3];
        let mut strides = [0; 3];
        let mut spacing = [1.0; 3];
        let mut origin = [0.0; 3];
        let grid_strides = grid.strides();
        for a in 0..dim {
            shape[a] = grid.cells()[a] + 1;
            strides[a] = grid_strides[a];
            spacing[a] = grid.spacing()[a];
            origin[a] = grid.origin()[a];
        }
        let inv_sum: f64 = (0..dim)
            .map(|a| spec.hamiltonian.alpha[a] / spacing[a])
            .sum();
        let mut x = vec![0.0; dim];
        let rhs = (0..grid.len())
            .map(|p| {
                grid.position_into(p, &mut x);
                (spec.rhs)(&x)
            })
            .collect();
        Ok(Self {
            hamiltonian: &spec.hamiltonian,
            dim,
            shape,
            strides,
            spacing,
            origin,
            rhs,
            step: cfg.gamma / inv_sum,
            epsilon: cfg.epsilon,
            previous: Vec::new(),
        })
    }

    /// The stage-one step size `c`.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Five-point line stencil centred at linear index `p` along `axis`,
    /// padded with extrapolated ghost values near the line ends.
    #[inline(always)]
    fn stencil(
        &self,
        values: &[f64],
        p: usize,
        k: usize,
        axis: usize,
        quadratic: bool,
    ) -> [f64; 5] {
        let n = self.shape[axis];
        let s = self.strides[axis];
        if k >= 2 && k + 2 < n {
            return [
                values[p - 2 * s],
                values[p - s],
                values[p],
                values[p + s],
                values[p + 2 * s],
            ];
        }
        let base = p - k * s;
        let at = |j: usize| values[base + j * s];
        let (lo, hi) = if quadratic {
            (
                extrapolate_ghost(&[at(0), at(1), at(2)]),
                extrapolate_ghost(&[at(n - 1), at(n - 2), at(n - 3)]),
            )
        } else {
            (
                extrapolate_ghost_linear(&[at(0), at(1)]),
                extrapolate_ghost_linear(&[at(n - 1), at(n - 2)]),
            )
        };
        let mut out = [0.0; 5];
        for (m, slot) in out.iter_mut().enumerate() {
            let j = k as isize + m as isize - 2;
            *slot = if j < 0 {
                lo[(-j - 1) as usize]
            } else if j as usize >= n {
                hi[j as usize - n]
            } else {
                at(j as usize)
            };
        }
        out
    }

    /// Numerical Hamiltonian at the point with multi-index `idx`.
    #[inline(always)]
    fn numerical_hamiltonian(
        &self,
        values: &[f64],
        p: usize,
        idx: [usize; 3],
        mode: DerivativeMode,
    ) -> f64 {
        let quadratic = mode != DerivativeMode::FirstOrder;
        let mut minus = [0.0; 3];
        let mut plus = [0.0; 3];
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            let st = self.stencil(values, p, idx[a], a, quadratic);
            let (m, pl) = mode.one_sided(&st, self.spacing[a], self.epsilon);
            minus[a] = m;
            plus[a] = pl;
            x[a] = self.origin[a] + idx[a] as f64 * self.spacing[a];
        }
        lax_friedrichs(
            self.hamiltonian,
            &x[..self.dim],
            &minus[..self.dim],
            &plus[..self.dim],
        )
    }

    /// One Gauss-Seidel pass `phi += scale * c * (f - H_LF)` over all free
    /// points in the given ordering, updating in place.
    pub fn pass(
        &self,
        field: &mut ScalarField,
        ordering: usize,
        mode: DerivativeMode,
        scale: f64,
        iteration: usize,
    ) -> Result<()> {
        let coef = scale * self.step;
        let dirs = ordering_directions(ordering, self.dim);
        let [n0, n1, n2] = self.shape;
        let [_, s1, s2] = self.strides;
        let ScalarField { values, fixed, .. } = field;
        for t2 in 0..n2 {
            let k2 = if dirs[2] { n2 - 1 - t2 } else { t2 };
            for t1 in 0..n1 {
                let k1 = if dirs[1] { n1 - 1 - t1 } else { t1 };
                let row = k1 * s1 + k2 * s2;
                for t0 in 0..n0 {
                    let k0 = if dirs[0] { n0 - 1 - t0 } else { t0 };
                    let p = row + k0;
                    if fixed[p] {
                        continue;
                    }
                    let idx = [k0, k1, k2];
                    let hhat = self.numerical_hamiltonian(values, p, idx, mode);
                    let updated = values[p] + coef * (self.rhs[p] - hhat);
                    if !updated.is_finite() {
                        return Err(Error::Divergence {
                            index: idx[..self.dim].to_vec(),
                            iteration,
                        });
                    }
                    values[p] = updated;
                }
            }
        }
        Ok(())
    }

    /// One full Runge-Kutta sweep (both stages in the same ordering). Returns
    /// the max-norm change over free points.
    pub fn rk_iteration(
        &mut self,
        field: &mut ScalarField,
        ordering: usize,
        mode: DerivativeMode,
        iteration: usize,
    ) -> Result<f64> {
        self.previous.clear();
        self.previous.extend_from_slice(field.values());
        self.pass(field, ordering, mode, 1.0, iteration)?;
        self.pass(field, ordering, mode, 0.5, iteration)?;
        let residual = field
            .values
            .iter()
            .zip(&self.previous)
            .zip(&field.fixed)
            .filter(|(_, fixed)| !**fixed)
            .map(|((a, b), _)| (a - b).abs())
            .fold(0.0, f64::max);
        Ok(residual)
    }

    /// Sweeps cyclically through the orderings until the change per sweep is
    /// at most `delta`. Returns the residual history, one entry per sweep.
    pub fn iterate(
        &mut self,
        field: &mut ScalarField,
        mode: DerivativeMode,
        delta: f64,
        max_iterations: usize,
        first_ordering: usize,
    ) -> Result<Vec<f64>> {
        let mut history = Vec::new();
        for n in 0..max_iterations {
            let residual = self.rk_iteration(field, first_ordering + n, mode, n)?;
            history.push(residual);
            if residual <= delta {
                return Ok(history);
            }
        }
        Err(Error::NotConverged {
            iterations: max_iterations,
            residual: history.last().copied().unwrap_or(f64::NAN),
        })
    }
}

/// Pinned points and their values on `grid`.
///
/// With an exact solution every point whose per-axis distance to a boundary
/// member is within `radius` cells (measured as `shape` says) takes the
/// exact value. Without one,
/// continuous members use the prescribed surface data over the same band and
/// each isolated point pins only its nearest grid point, valued by the
/// straight-ray travel time from the source.
pub fn boundary_band(
    spec: &ProblemSpec,
    grid: &CartesianGrid,
    radius: usize,
    shape: BandShape,
) -> Result<(Vec<bool>, Vec<f64>)> {
    let dim = grid.dim();
    let n = grid.len();
    let mut fixed = vec![false; n];
    let mut values = vec![0.0; n];
    let coarsest = grid.spacing().iter().cloned().fold(0.0, f64::max);
    let half: Vec<f64> = grid
        .spacing()
        .iter()
        .map(|h| match shape {
            BandShape::Coarsest => radius as f64 * coarsest,
            BandShape::PerAxis => radius as f64 * h,
        })
        .collect();
    let lower = spec.origin.clone();
    let upper = spec.upper();
    let mut x = vec![0.0; dim];

    let banded = |m: &GammaMember| spec.exact.is_some() || !matches!(m, GammaMember::Point { .. });
    let members: Vec<&GammaMember> = spec.boundary.members.iter().filter(|m| banded(m)).collect();
    if !members.is_empty() {
        for p in 0..n {
            grid.position_into(p, &mut x);
            if members
                .iter()
                .any(|m| m.meets_box(&x, &half, &lower, &upper))
            {
                let value = match &spec.exact {
                    Some(exact) => exact(&x),
                    None => spec.boundary.surface_value_at(&x).ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "{}: boundary surface has no data and no exact solution",
                            spec.name
                        ))
                    })?,
                };
                fixed[p] = true;
                values[p] = value;
            }
        }
    }

    if spec.exact.is_none() {
        for (source, g) in spec.boundary.point_members() {
            let index: Vec<usize> = (0..dim)
                .map(|a| {
                    let t = (source[a] - grid.origin()[a]) / grid.spacing()[a];
                    (t.round().max(0.0) as usize).min(grid.cells()[a])
                })
                .collect();
            let p = grid.linear_index(&index);
            grid.position_into(p, &mut x);
            let offset: Vec<f64> = x.iter().zip(source).map(|(a, b)| a - b).collect();
            let dist = offset.iter().map(|d| d * d).sum::<f64>().sqrt();
            let value = if dist == 0.0 {
                g
            } else {
                let dir: Vec<f64> = offset.iter().map(|d| d / dist).collect();
                let speed = spec.hamiltonian.form.front_speed(&dir).ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "{}: point sources need an exact solution for this Hamiltonian",
                        spec.name
                    ))
                })?;
                g + dist * (spec.rhs)(source) / speed
            };
            // nearest source wins when two share a grid point
            if !fixed[p] || value < values[p] {
                values[p] = value;
            }
            fixed[p] = true;
        }
    }

    if !fixed.iter().any(|f| *f) {
        return Err(Error::EmptyBand(grid.cells().to_vec()));
    }
    Ok((fixed, values))
}

/// Wall-clock time per solver phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub init: Duration,
    pub warm_start: Duration,
    pub sweeps: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.init + self.warm_start + self.sweeps
    }
}

/// Outcome of [`initialize_with_stats`].
#[derive(Debug, Clone)]
pub struct Initialized {
    pub field: ScalarField,
    pub warm_start_iterations: usize,
    pub timings: PhaseTimings,
}

/// Pins the boundary band, fills the remaining points with the initial
/// guess and, when configured, runs the loosely converged first-order solve
/// whose result warm-starts the high-order iteration.
pub fn initialize_with_stats(
    spec: &ProblemSpec,
    grid: &CartesianGrid,
    cfg: &SweepConfig,
) -> Result<Initialized> {
    cfg.validate()?;
    let start = Instant::now();
    let (fixed, band_values) = boundary_band(spec, grid, cfg.band_radius, cfg.band_shape)?;
    let values = fixed
        .iter()
        .zip(band_values)
        .map(|(f, v)| if *f { v } else { cfg.initial_guess })
        .collect();
    let mut field = ScalarField::new(grid.clone(), values, fixed)?;
    let init = start.elapsed();

    let start = Instant::now();
    let mut warm_start_iterations = 0;
    if let Some(delta) = cfg.warm_start_delta {
        let mut sweeper = Sweeper::new(spec, grid, cfg)?;
        let history = sweeper.iterate(
            &mut field,
            DerivativeMode::FirstOrder,
            delta,
            cfg.max_iterations,
            cfg.first_ordering,
        )?;
        warm_start_iterations = history.len();
    }
    let timings = PhaseTimings {
        init,
        warm_start: start.elapsed(),
        sweeps: Duration::ZERO,
    };
    Ok(Initialized {
        field,
        warm_start_iterations,
        timings,
    })
}

pub fn initialize(
    spec: &ProblemSpec,
    grid: &CartesianGrid,
    cfg: &SweepConfig,
) -> Result<ScalarField> {
    initialize_with_stats(spec, grid, cfg).map(|i| i.field)
}

/// One Runge-Kutta sweep of `field` in ordering `ordering` using the
/// configured derivative mode. Returns the max-norm change over free points.
pub fn rk_iteration(
    field: &mut ScalarField,
    spec: &ProblemSpec,
    cfg: &SweepConfig,
    ordering: usize,
) -> Result<f64> {
    let grid = field.grid().clone();
    let mut sweeper = Sweeper::new(spec, &grid, cfg)?;
    sweeper.rk_iteration(field, ordering, cfg.derivative_mode, 0)
}

#[derive(Debug, Clone)]
pub struct SingleGridSolution {
    pub field: ScalarField,
    /// High-order sweeps until convergence.
    pub iterations: usize,
    pub warm_start_iterations: usize,
    pub residuals: Vec<f64>,
    pub timings: PhaseTimings,
}

/// Initializes and solves `spec` on `grid` to the configured threshold.
pub fn solve_single_grid(
    spec: &ProblemSpec,
    grid: &CartesianGrid,
    cfg: &SweepConfig,
) -> Result<SingleGridSolution> {
    let Initialized {
        mut field,
        warm_start_iterations,
        mut timings,
    } = initialize_with_stats(spec, grid, cfg)?;
    let start = Instant::now();
    let mut sweeper = Sweeper::new(spec, grid, cfg)?;
    let residuals = sweeper.iterate(
        &mut field,
        cfg.derivative_mode,
        cfg.delta,
        cfg.max_iterations,
        cfg.first_ordering,
    )?;
    timings.sweeps = start.elapsed();
    Ok(SingleGridSolution {
        field,
        iterations: residuals.len(),
        warm_start_iterations,
        residuals,
        timings,
    })
}
