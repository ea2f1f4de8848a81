//! Prolongation of component solutions onto a finer grid.
//!
//! Interpolation is done one axis at a time, axis 0 first, each pass using
//! a three-point stencil `phi[i-1], phi[i], phi[i+1]` around the source node
//! closest to the target coordinate. Target points that coincide with source
//! nodes are copied.

use crate::error::{Error, Result};
use crate::grid::CartesianGrid;
use crate::sweeper::ScalarField;

/// Default regularisation of the WENO interpolation weights.
pub const WENO_INTERP_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prolongation {
    /// Quadratic Lagrange interpolation.
    Lagrange,
    /// Nonlinear blend of the two linear interpolants.
    Weno { epsilon: f64 },
}

impl Prolongation {
    pub fn weno() -> Self {
        Prolongation::Weno {
            epsilon: WENO_INTERP_EPSILON,
        }
    }

    /// Interpolated value at local coordinate `t` measured from node `i-1`
    /// (so the stencil sits at `t = 0, 1, 2`).
    #[inline]
    pub fn interpolate(self, phi: &[f64; 3], t: f64) -> f64 {
        match self {
            Prolongation::Lagrange => lagrange3_interp_1d(phi, t),
            Prolongation::Weno { epsilon } => weno3_interp_1d(phi, t, epsilon),
        }
    }
}

impl std::str::FromStr for Prolongation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lagrange" => Ok(Prolongation::Lagrange),
            "weno" | "weno3" => Ok(Prolongation::weno()),
            other => Err(Error::InvalidConfig(format!(
                "unknown prolongation `{other}`"
            ))),
        }
    }
}

/// Quadratic Lagrange interpolation through `(0, phi[0]), (1, phi[1]), (2, phi[2])`.
#[inline]
pub fn lagrange3_interp_1d(phi: &[f64; 3], t: f64) -> f64 {
    let l0 = 0.5 * (t - 1.0) * (t - 2.0);
    let l1 = -t * (t - 2.0);
    let l2 = 0.5 * t * (t - 1.0);
    l0 * phi[0] + l1 * phi[1] + l2 * phi[2]
}

/// Third-order WENO interpolation on the same stencil.
///
/// Blends the linear interpolants on `[0, 1]` and `[1, 2]`. The linear
/// weights `1 - t/2` and `t/2` recover the quadratic interpolant.
#[inline]
pub fn weno3_interp_1d(phi: &[f64; 3], t: f64, eps: f64) -> f64 {
    let p1 = t * phi[1] - (t - 1.0) * phi[0];
    let p2 = (t - 1.0) * phi[2] - (t - 2.0) * phi[1];
    let b1 = (phi[1] - phi[0]).powi(2);
    let b2 = (phi[2] - phi[1]).powi(2);
    let a1 = (1.0 - 0.5 * t) / (eps + b1).powi(2);
    let a2 = 0.5 * t / (eps + b2).powi(2);
    (a1 * p1 + a2 * p2) / (a1 + a2)
}

/// Where a target node falls on the source line.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Tap {
    Copy(usize),
    /// Centre node `i` and local coordinate measured from node `i - 1`.
    Stencil(usize, f64),
}

fn line_taps(source_cells: usize, target_cells: usize) -> Vec<Tap> {
    (0..=target_cells)
        .map(|t| {
            let num = t * source_cells;
            if num % target_cells == 0 {
                return Tap::Copy(num / target_cells);
            }
            let s = num as f64 / target_cells as f64;
            let i = ((s + 0.5).floor() as usize).clamp(1, source_cells - 1);
            Tap::Stencil(i, s - (i as f64 - 1.0))
        })
        .collect()
}

/// Interpolates `values` on `shape` along `axis` to `target_points` nodes.
fn prolongate_axis(
    values: &[f64],
    shape: &[usize],
    axis: usize,
    target_points: usize,
    method: Prolongation,
) -> Vec<f64> {
    let taps = line_taps(shape[axis] - 1, target_points - 1);
    let inner: usize = shape[..axis].iter().product();
    let outer: usize = shape[axis + 1..].iter().product();
    let n_src = shape[axis];
    let mut out = vec![0.0; inner * target_points * outer];
    for o in 0..outer {
        let src_block = o * n_src * inner;
        let dst_block = o * target_points * inner;
        for (t, tap) in taps.iter().enumerate() {
            let dst = dst_block + t * inner;
            match *tap {
                Tap::Copy(k) => {
                    let src = src_block + k * inner;
                    out[dst..dst + inner].copy_from_slice(&values[src..src + inner]);
                }
                Tap::Stencil(i, local) => {
                    let base = src_block + (i - 1) * inner;
                    for q in 0..inner {
                        let phi = [
                            values[base + q],
                            values[base + inner + q],
                            values[base + 2 * inner + q],
                        ];
                        out[dst + q] = method.interpolate(&phi, local);
                    }
                }
            }
        }
    }
    out
}

/// Interpolates `field` onto `target`, which must span the same box with at
/// least as many cells along every axis.
pub fn prolongate(
    field: &ScalarField,
    target: &CartesianGrid,
    method: Prolongation,
) -> Result<ScalarField> {
    let source = field.grid();
    check_compatible(source, target)?;
    let mut shape = source.shape();
    let mut values = field.values().to_vec();
    for axis in 0..source.dim() {
        let points = target.cells()[axis] + 1;
        if points != shape[axis] {
            values = prolongate_axis(&values, &shape, axis, points, method);
            shape[axis] = points;
        }
    }
    ScalarField::from_values(target.clone(), values)
}

fn check_compatible(source: &CartesianGrid, target: &CartesianGrid) -> Result<()> {
    if source.dim() != target.dim() {
        return Err(Error::GridMismatch(format!(
            "cannot prolongate a {}-dimensional field to a {}-dimensional grid",
            source.dim(),
            target.dim()
        )));
    }
    for a in 0..source.dim() {
        let tol = 1e-12 * source.extent()[a].abs().max(1.0);
        if (source.origin()[a] - target.origin()[a]).abs() > tol
            || (source.extent()[a] - target.extent()[a]).abs() > tol
        {
            return Err(Error::GridMismatch(format!(
                "axis {a}: grids cover different intervals"
            )));
        }
        if target.cells()[a] < source.cells()[a] {
            return Err(Error::GridMismatch(format!(
                "axis {a}: target has {} cells, source {}",
                target.cells()[a],
                source.cells()[a]
            )));
        }
    }
    Ok(())
}
