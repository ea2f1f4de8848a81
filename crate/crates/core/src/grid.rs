//! Vertex-centered Cartesian grids and the semi-coarsened sparse-grid family.
//!
//! Every grid stores `cells + 1` points per axis, with point `k` on axis `i`
//! at `origin[i] + k * spacing[i]`. Grids of a sparse family share a root grid
//! with `N_r` cells per axis; a grid at level `l` on an axis has `N_r * 2^l`
//! cells there, so coarser point sets are exact subsets of finer ones.

use crate::error::{Error, Result};

/// Smallest number of cells per axis. The third-order upwind stencil spans
/// five consecutive points.
pub const MIN_CELLS: usize = 4;

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGrid {
    origin: Vec<f64>,
    extent: Vec<f64>,
    cells: Vec<usize>,
    spacing: Vec<f64>,
    levels: Vec<u32>,
}

impl CartesianGrid {
    /// Builds a grid over `[origin, origin + extent]` with the given number of
    /// cells per axis. Levels are all zero.
    pub fn new(origin: &[f64], extent: &[f64], cells: &[usize]) -> Result<Self> {
        Self::with_levels(origin, extent, cells, &vec![0; cells.len()])
    }

    pub fn with_levels(
        origin: &[f64],
        extent: &[f64],
        cells: &[usize],
        levels: &[u32],
    ) -> Result<Self> {
        let dim = cells.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        if origin.len() != dim || extent.len() != dim || levels.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "axis count mismatch: origin {}, extent {}, cells {}, levels {}",
                origin.len(),
                extent.len(),
                dim,
                levels.len()
            )));
        }
        for axis in 0..dim {
            if !(extent[axis] > 0.0) || !extent[axis].is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "extent on axis {axis} must be positive, got {}",
                    extent[axis]
                )));
            }
            if !origin[axis].is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "origin on axis {axis} is not finite"
                )));
            }
            if cells[axis] < MIN_CELLS {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis} has {} cells, at least {MIN_CELLS} required",
                    cells[axis]
                )));
            }
        }
        let spacing = extent
            .iter()
            .zip(cells)
            .map(|(e, &n)| e / n as f64)
            .collect();
        Ok(Self {
            origin: origin.to_vec(),
            extent: extent.to_vec(),
            cells: cells.to_vec(),
            spacing,
            levels: levels.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Number of points along each axis (`cells + 1`).
    pub fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(|n| n + 1).collect()
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.cells.iter().map(|n| n + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume of one cell, the product of the spacings.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn domain_volume(&self) -> f64 {
        self.extent.iter().product()
    }

    /// Coordinate of point `k` on `axis`. The last point maps exactly onto
    /// the upper domain bound.
    #[inline]
    pub fn coordinate(&self, axis: usize, k: usize) -> f64 {
        if k == self.cells[axis] {
            self.origin[axis] + self.extent[axis]
        } else {
            self.origin[axis] + k as f64 * self.spacing[axis]
        }
    }

    /// Linear-index strides; axis 0 varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = Vec::with_capacity(self.dim());
        let mut s = 1;
        for n in &self.cells {
            strides.push(s);
            s *= n + 1;
        }
        strides
    }

    pub fn linear_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dim());
        let mut p = 0;
        let mut s = 1;
        for (k, n) in index.iter().zip(&self.cells) {
            p += k * s;
            s *= n + 1;
        }
        p
    }

    pub fn multi_index(&self, mut p: usize) -> Vec<usize> {
        self.cells
            .iter()
            .map(|n| {
                let k = p % (n + 1);
                p /= n + 1;
                k
            })
            .collect()
    }

    /// Physical position of the point with linear index `p`.
    pub fn position(&self, p: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.position_into(p, &mut out);
        out
    }

    pub fn position_into(&self, mut p: usize, out: &mut [f64]) {
        for (axis, n) in self.cells.iter().enumerate() {
            let k = p % (n + 1);
            p /= n + 1;
            out[axis] = self.coordinate(axis, k);
        }
    }

    /// All point positions in storage order.
    pub fn positions(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |p| self.position(p))
    }

    /// True when both grids cover the same domain with the same cells.
    pub fn same_points(&self, other: &CartesianGrid) -> bool {
        self.cells == other.cells && self.origin == other.origin && self.extent == other.extent
    }

    /// True when every point of `self` is also a point of `finer`, i.e. both
    /// share a domain and each axis of `finer` refines `self` by a power of two.
    pub fn is_nested_in(&self, finer: &CartesianGrid) -> bool {
        if self.dim() != finer.dim() || self.origin != finer.origin || self.extent != finer.extent {
            return false;
        }
        self.cells
            .iter()
            .zip(&finer.cells)
            .all(|(&c, &f)| f >= c && f % c == 0 && (f / c).is_power_of_two())
    }
}

/// One component grid of a sparse combination together with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanEntry {
    pub levels: Vec<u32>,
    pub coefficient: i32,
    pub grid: CartesianGrid,
}

/// The index set of semi-coarsened grids and their combination coefficients.
///
/// In 2D the plan holds every level pair with `l1 + l2 = N_L` (coefficient
/// +1) and `l1 + l2 = N_L - 1` (coefficient -1). In 3D the shells `N_L`,
/// `N_L - 1` and `N_L - 2` carry coefficients +1, -2 and +1.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePlan {
    origin: Vec<f64>,
    extent: Vec<f64>,
    root_cells: Vec<usize>,
    finest_level: u32,
    entries: Vec<PlanEntry>,
}

impl SparsePlan {
    /// Builds the semi-coarsened family over `[origin, origin + extent]` with
    /// `root_cells` cells per axis on the root grid and finest level
    /// `finest_level`.
    pub fn semi_coarsened_family(
        origin: &[f64],
        extent: &[f64],
        root_cells: &[usize],
        finest_level: u32,
    ) -> Result<Self> {
        let dim = root_cells.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if finest_level < 1 {
            return Err(Error::InvalidConfig(
                "finest level must be at least 1".into(),
            ));
        }
        if finest_level > 16 {
            return Err(Error::InvalidConfig(format!(
                "finest level {finest_level} is too large"
            )));
        }
        // validates origin/extent/root cells
        CartesianGrid::new(origin, extent, root_cells)?;

        let shells: &[(u32, i32)] = match dim {
            2 => &[(0, 1), (1, -1)],
            _ => &[(0, 1), (1, -2), (2, 1)],
        };
        let mut entries = Vec::new();
        for &(drop, coefficient) in shells {
            let Some(sum) = finest_level.checked_sub(drop) else {
                continue;
            };
            for levels in level_tuples(dim, sum) {
                let cells: Vec<usize> = root_cells
                    .iter()
                    .zip(&levels)
                    .map(|(&n, &l)| n << l)
                    .collect();
                let grid = CartesianGrid::with_levels(origin, extent, &cells, &levels)?;
                entries.push(PlanEntry {
                    levels,
                    coefficient,
                    grid,
                });
            }
        }
        Ok(Self {
            origin: origin.to_vec(),
            extent: extent.to_vec(),
            root_cells: root_cells.to_vec(),
            finest_level,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.root_cells.len()
    }

    pub fn root_cells(&self) -> &[usize] {
        &self.root_cells
    }

    pub fn finest_level(&self) -> u32 {
        self.finest_level
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn coefficient_sum(&self) -> i32 {
        self.entries.iter().map(|e| e.coefficient).sum()
    }

    /// The full grid `Omega^{N_L,...,N_L}` onto which components are combined.
    pub fn finest_grid(&self) -> CartesianGrid {
        let cells: Vec<usize> = self
            .root_cells
            .iter()
            .map(|&n| n << self.finest_level)
            .collect();
        let levels = vec![self.finest_level; self.dim()];
        CartesianGrid::with_levels(&self.origin, &self.extent, &cells, &levels)
            .expect("finest grid of a validated plan")
    }

    /// Total number of points over all component grids.
    pub fn component_points(&self) -> usize {
        self.entries.iter().map(|e| e.grid.len()).sum()
    }
}

/// All `dim`-tuples of nonnegative levels summing to `sum`, in lexicographic
/// order.
fn level_tuples(dim: usize, sum: u32) -> Vec<Vec<u32>> {
    match dim {
        1 => vec![vec![sum]],
        _ => (0..=sum)
            .flat_map(|first| {
                level_tuples(dim - 1, sum - first)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn table_grid_spacing() {
        let g = CartesianGrid::new(&[0.0, 0.0], &[2.0 * PI, 2.0 * PI], &[160, 160]).unwrap();
        assert_eq!(g.spacing(), &[2.0 * PI / 160.0, 2.0 * PI / 160.0]);
        assert_eq!(g.len(), 161 * 161);
        assert_eq!(g.coordinate(0, 160), 2.0 * PI);
    }

    #[test]
    fn endpoint_coordinates() {
        let g = CartesianGrid::new(&[-1.0, -1.0], &[2.0, 2.0], &[4, 4]).unwrap();
        let xs: Vec<f64> = (0..=4).map(|k| g.coordinate(0, k)).collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn one_dimensional_affine_map() {
        let g = CartesianGrid::new(&[0.0], &[1.0], &[10]).unwrap();
        assert!((g.coordinate(0, 3) - 0.3).abs() < 1e-15);
        assert_eq!(g.coordinate(0, 0), 0.0);
        assert_eq!(g.coordinate(0, 10), 1.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(CartesianGrid::new(&[-1.0, -1.0], &[2.0, 2.0], &[2, 2]).is_err());
        assert!(CartesianGrid::new(&[0.0, 0.0], &[0.0, 1.0], &[8, 8]).is_err());
        assert!(CartesianGrid::new(&[0.0, 0.0], &[-1.0, 1.0], &[8, 8]).is_err());
        assert!(CartesianGrid::new(&[0.0; 4], &[1.0; 4], &[8; 4]).is_err());
        assert!(CartesianGrid::new(&[0.0], &[1.0, 1.0], &[8, 8]).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = CartesianGrid::new(&[0.0; 3], &[1.0; 3], &[4, 5, 6]).unwrap();
        for p in [0, 1, 17, g.len() - 1] {
            assert_eq!(g.linear_index(&g.multi_index(p)), p);
        }
        assert_eq!(g.strides(), vec![1, 5, 30]);
    }

    #[test]
    fn plan_2d_level_three() {
        let plan =
            SparsePlan::semi_coarsened_family(&[0.0, 0.0], &[1.0, 1.0], &[20, 20], 3).unwrap();
        let got: Vec<(Vec<u32>, i32)> = plan
            .entries()
            .iter()
            .map(|e| (e.levels.clone(), e.coefficient))
            .collect();
        let want = vec![
            (vec![0, 3], 1),
            (vec![1, 2], 1),
            (vec![2, 1], 1),
            (vec![3, 0], 1),
            (vec![0, 2], -1),
            (vec![1, 1], -1),
            (vec![2, 0], -1),
        ];
        assert_eq!(got, want);
        assert_eq!(plan.entries()[0].grid.cells(), &[20, 160]);
        assert_eq!(plan.finest_grid().cells(), &[160, 160]);
    }

    #[test]
    fn plan_2d_level_one() {
        let plan = SparsePlan::semi_coarsened_family(&[0.0, 0.0], &[1.0, 1.0], &[4, 4], 1).unwrap();
        assert_eq!(plan.entries().len(), 3);
        assert_eq!(plan.coefficient_sum(), 1);
        assert_eq!(plan.entries()[2].levels, vec![0, 0]);
        assert_eq!(plan.entries()[2].coefficient, -1);
    }

    #[test]
    fn plan_3d_level_three_by_enumeration() {
        let plan =
            SparsePlan::semi_coarsened_family(&[0.0; 3], &[1.0; 3], &[10, 10, 10], 3).unwrap();
        assert_eq!(plan.entries().len(), 19);
        // brute-force enumeration of all level triples in [0, 3]^3
        for (sum, coefficient, count) in [(3u32, 1, 10usize), (2, -2, 6), (1, 1, 3)] {
            let mut brute = 0;
            for a in 0..=3u32 {
                for b in 0..=3u32 {
                    for c in 0..=3u32 {
                        if a + b + c == sum {
                            brute += 1;
                            let e = plan
                                .entries()
                                .iter()
                                .find(|e| e.levels == vec![a, b, c])
                                .expect("triple present");
                            assert_eq!(e.coefficient, coefficient);
                        }
                    }
                }
            }
            assert_eq!(brute, count);
        }
        assert_eq!(plan.coefficient_sum(), 1);
    }

    #[test]
    fn plan_3d_level_one_still_sums_to_one() {
        let plan = SparsePlan::semi_coarsened_family(&[0.0; 3], &[1.0; 3], &[4, 4, 4], 1).unwrap();
        assert_eq!(plan.entries().len(), 4);
        assert_eq!(plan.coefficient_sum(), 1);
    }

    #[test]
    fn plan_rejects_bad_input() {
        assert!(SparsePlan::semi_coarsened_family(&[0.0], &[1.0], &[8], 2).is_err());
        assert!(SparsePlan::semi_coarsened_family(&[0.0; 2], &[1.0; 2], &[8, 8], 0).is_err());
        assert!(SparsePlan::semi_coarsened_family(&[0.0; 2], &[1.0; 2], &[3, 3], 2).is_err());
    }

    #[test]
    fn family_is_nested_bitwise() {
        let plan =
            SparsePlan::semi_coarsened_family(&[-1.0, 0.3], &[2.0, 0.7], &[20, 12], 3).unwrap();
        let fine = plan.finest_grid();
        for e in plan.entries() {
            assert!(e.grid.is_nested_in(&fine));
            for axis in 0..2 {
                let ratio = fine.cells()[axis] / e.grid.cells()[axis];
                for k in 0..=e.grid.cells()[axis] {
                    assert_eq!(e.grid.coordinate(axis, k), fine.coordinate(axis, k * ratio));
                }
            }
        }
    }
}
