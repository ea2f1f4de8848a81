//! Static Hamilton-Jacobi problem definitions: Hamiltonians, right-hand
//! sides, boundary sets with their data, and the six benchmark problems.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A scalar function of position.
pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// The Hamiltonian families handled by the solver. None depends on position.
#[derive(Debug, Clone, PartialEq)]
pub enum Hamiltonian {
    /// `H(p) = |p|`.
    Eikonal,
    /// `H(p) = v . p`, a linear transport operator.
    Advection { velocity: Vec<f64> },
    /// `H(p) = F |p| + w . p`: front speed `F` in a uniform flow `w`, `F > |w|`.
    BoatSail { speed: f64, flow: Vec<f64> },
}

impl Hamiltonian {
    #[inline]
    pub fn evaluate(&self, p: &[f64]) -> f64 {
        match self {
            Hamiltonian::Eikonal => norm(p),
            Hamiltonian::Advection { velocity } => dot(velocity, p),
            Hamiltonian::BoatSail { speed, flow } => speed * norm(p) + dot(flow, p),
        }
    }

    /// Per-axis bounds on `|dH/dp_i|`.
    pub fn lipschitz_bounds(&self, dim: usize) -> Vec<f64> {
        match self {
            Hamiltonian::Eikonal => vec![1.0; dim],
            Hamiltonian::Advection { velocity } => velocity.iter().map(|v| v.abs()).collect(),
            Hamiltonian::BoatSail { speed, flow } => flow.iter().map(|w| speed + w.abs()).collect(),
        }
    }

    /// Speed at which a front leaving a point source travels in the unit
    /// direction `dir`. `None` for transport operators, which have no
    /// isotropic point-source solution.
    pub fn front_speed(&self, dir: &[f64]) -> Option<f64> {
        match self {
            Hamiltonian::Eikonal => Some(1.0),
            Hamiltonian::Advection { .. } => None,
            Hamiltonian::BoatSail { speed, flow } => {
                // |s dir - w| = F, positive root
                let wd = dot(flow, dir);
                let disc = wd * wd + speed * speed - dot(flow, flow);
                Some(wd + disc.max(0.0).sqrt())
            }
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn norm(p: &[f64]) -> f64 {
    dot(p, p).sqrt()
}

/// A Hamiltonian together with the per-axis dissipation coefficients used by
/// the Lax-Friedrichs flux and the iteration step size.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub form: Hamiltonian,
    pub alpha: Vec<f64>,
}

impl HamiltonianSpec {
    /// Uses the exact Lipschitz bounds of `form` as `alpha`.
    pub fn new(form: Hamiltonian, dim: usize) -> Self {
        let alpha = form.lipschitz_bounds(dim);
        Self { form, alpha }
    }

    pub fn eikonal(dim: usize) -> Self {
        Self::new(Hamiltonian::Eikonal, dim)
    }

    /// Evaluates `H(x, p)`; the position is accepted for interface symmetry.
    #[inline]
    pub fn evaluate(&self, _x: &[f64], p: &[f64]) -> f64 {
        self.form.evaluate(p)
    }
}

/// One member of the boundary set on which the solution is prescribed.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaMember {
    /// An isolated point with its prescribed value.
    Point { position: Vec<f64>, value: f64 },
    /// The hyperplane `x[axis] = coord` (an inflow line in 2D).
    Hyperplane { axis: usize, coord: f64 },
    /// A sphere surface.
    Sphere { center: Vec<f64>, radius: f64 },
    /// The whole boundary of the computational domain.
    DomainBoundary,
}

impl GammaMember {
    /// True when the member meets the axis-aligned box centred at `x` with
    /// the given half widths. `lower`/`upper` are the domain bounds.
    pub fn meets_box(&self, x: &[f64], half: &[f64], lower: &[f64], upper: &[f64]) -> bool {
        let slack = |axis: usize| half[axis] * (1.0 + 1e-9) + 1e-14;
        match self {
            GammaMember::Point { position, .. } => {
                (0..x.len()).all(|i| (x[i] - position[i]).abs() <= slack(i))
            }
            GammaMember::Hyperplane { axis, coord } => (x[*axis] - coord).abs() <= slack(*axis),
            GammaMember::Sphere { center, radius } => {
                let mut near = 0.0;
                let mut far = 0.0;
                for i in 0..x.len() {
                    let d = (x[i] - center[i]).abs();
                    let h = slack(i);
                    near += (d - h).max(0.0).powi(2);
                    far += (d + h).powi(2);
                }
                near <= radius * radius && radius * radius <= far
            }
            GammaMember::DomainBoundary => {
                (0..x.len()).any(|i| x[i] - lower[i] <= slack(i) || upper[i] - x[i] <= slack(i))
            }
        }
    }
}

/// The boundary set together with its data.
#[derive(Clone)]
pub struct BoundaryData {
    pub members: Vec<GammaMember>,
    /// Data on the continuous members (hyperplanes, spheres, domain
    /// boundary). Point members carry their own values.
    pub surface_value: Option<PointFn>,
}

impl BoundaryData {
    pub fn points(points: &[(Vec<f64>, f64)]) -> Self {
        Self {
            members: points
                .iter()
                .map(|(position, value)| GammaMember::Point {
                    position: position.clone(),
                    value: *value,
                })
                .collect(),
            surface_value: None,
        }
    }

    /// Prescribed value `g` at a position on a continuous member.
    pub fn surface_value_at(&self, x: &[f64]) -> Option<f64> {
        self.surface_value.as_ref().map(|g| g(x))
    }

    pub fn point_members(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.members.iter().filter_map(|m| match m {
            GammaMember::Point { position, value } => Some((position.as_slice(), *value)),
            _ => None,
        })
    }
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("members", &self.members)
            .field(
                "surface_value",
                &self.surface_value.as_ref().map(|_| "<fn>"),
            )
            .finish()
    }
}

/// A complete static Hamilton-Jacobi problem `H(x, grad phi) = f` on a box,
/// with `phi = g` on the boundary set.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub hamiltonian: HamiltonianSpec,
    pub rhs: PointFn,
    pub boundary: BoundaryData,
    pub exact: Option<PointFn>,
    /// Iteration step-size multiplier, in `(0, 1]`.
    pub gamma: f64,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("origin", &self.origin)
            .field("extent", &self.extent)
            .field("hamiltonian", &self.hamiltonian)
            .field("boundary", &self.boundary)
            .field("exact", &self.exact.is_some())
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.origin
            .iter()
            .zip(&self.extent)
            .map(|(a, e)| a + e)
            .collect()
    }

    /// Checks the structural invariants of the problem.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if self.extent.len() != dim || self.hamiltonian.alpha.len() != dim {
            return Err(Error::InvalidConfig(format!(
                "{}: axis count mismatch",
                self.name
            )));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "{}: gamma must lie in (0, 1], got {}",
                self.name, self.gamma
            )));
        }
        if self
            .hamiltonian
            .alpha
            .iter()
            .any(|a| !(*a > 0.0) || !a.is_finite())
        {
            return Err(Error::InvalidConfig(format!(
                "{}: alpha must be positive",
                self.name
            )));
        }
        if self.boundary.members.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "{}: boundary set is empty",
                self.name
            )));
        }
        let upper = self.upper();
        for m in &self.boundary.members {
            let inside = |p: &[f64]| {
                p.len() == dim
                    && (0..dim).all(|i| p[i] >= self.origin[i] - 1e-12 && p[i] <= upper[i] + 1e-12)
            };
            match m {
                GammaMember::Point { position, value } => {
                    if !inside(position) || !value.is_finite() {
                        return Err(Error::InvalidConfig(format!(
                            "{}: boundary point {position:?} is outside the domain or has a non-finite value",
                            self.name
                        )));
                    }
                }
                GammaMember::Hyperplane { axis, .. } if *axis >= dim => {
                    return Err(Error::InvalidConfig(format!(
                        "{}: hyperplane axis {axis}",
                        self.name
                    )));
                }
                GammaMember::Sphere { center, radius }
                    if center.len() != dim || !(*radius > 0.0) =>
                {
                    return Err(Error::InvalidConfig(format!("{}: bad sphere", self.name)));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Exact viscosity solution at `x`.
    pub fn exact_solution(&self, x: &[f64]) -> Result<f64> {
        self.exact
            .as_ref()
            .map(|phi| phi(x))
            .ok_or_else(|| Error::NoExactSolution(self.name.clone()))
    }
}

/// Spatial dimension selector for the benchmarks that come in two variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    TwoD,
    ThreeD,
}

impl Case {
    pub fn dim(self) -> usize {
        match self {
            Case::TwoD => 2,
            Case::ThreeD => 3,
        }
    }
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "2d" | "2" => Ok(Case::TwoD),
            "3d" | "3" => Ok(Case::ThreeD),
            other => Err(Error::InvalidConfig(format!("unknown case `{other}`"))),
        }
    }
}

const GENERATORS_2D: [[f64; 2]; 8] = [
    [1.0 / 4.0, 1.0 / 5.0],
    [1.0 / 3.0, 1.0 / 7.0],
    [3.0 / 5.0, 1.0 / 5.0],
    [3.0 / 4.0, 1.0 / 2.0],
    [1.0 / 2.0, 3.0 / 4.0],
    [1.0 / 4.0, 1.0 / 2.0],
    [1.0 / 7.0, 4.0 / 5.0],
    [1.0 / 2.0, 1.0 / 2.0],
];

const GENERATORS_3D: [[f64; 3]; 8] = [
    [1.0 / 4.0, 1.0 / 5.0, 1.0 / 8.0],
    [1.0 / 3.0, 1.0 / 7.0, 7.0 / 9.0],
    [3.0 / 5.0, 1.0 / 5.0, 4.0 / 5.0],
    [3.0 / 4.0, 1.0 / 2.0, 1.0 / 4.0],
    [1.0 / 2.0, 3.0 / 4.0, 4.0 / 5.0],
    [1.0 / 4.0, 1.0 / 2.0, 1.0 / 2.0],
    [1.0 / 7.0, 4.0 / 5.0, 3.0 / 5.0],
    [1.0 / 2.0, 1.0 / 2.0, 1.0 / 4.0],
];

const HARBORS_2D: [[f64; 2]; 8] = [
    [1.0 / 4.0, 1.0 / 5.0],
    [5.0 / 16.0, 1.0 / 8.0],
    [3.0 / 5.0, 1.0 / 5.0],
    [3.0 / 4.0, 3.0 / 5.0],
    [1.0 / 2.0, 3.0 / 4.0],
    [1.0 / 4.0, 1.0 / 2.0],
    [1.0 / 8.0, 4.0 / 5.0],
    [1.0 / 2.0, 1.0 / 2.0],
];

fn constant(c: f64) -> PointFn {
    Arc::new(move |_| c)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn min_distance(points: Vec<Vec<f64>>) -> PointFn {
    Arc::new(move |x| {
        points
            .iter()
            .map(|p| distance(x, p))
            .fold(f64::INFINITY, f64::min)
    })
}

/// Builds benchmark problem `id` (1 to 6). Examples 5 and 6 need a `case`;
/// the others ignore it.
pub fn make_benchmark(id: u8, case: Option<Case>) -> Result<ProblemSpec> {
    let need_case =
        || case.ok_or_else(|| Error::InvalidConfig(format!("benchmark {id} needs a 2D/3D case")));
    let spec = match id {
        1 => linear_advection(),
        2 => trigonometric_source(),
        3 => two_spheres(),
        4 => shape_from_shading(),
        5 => voronoi(need_case()?),
        6 => boat_sail(need_case()?),
        _ => return Err(Error::UnknownBenchmark(id.to_string())),
    };
    spec.validate()?;
    Ok(spec)
}

/// `phi_x + phi_y = 0` on `[0, 2pi]^2` with inflow data on `x = 0` and `y = 0`.
fn linear_advection() -> ProblemSpec {
    let exact: PointFn = Arc::new(|x| (x[0] - x[1]).sin());
    ProblemSpec {
        name: "example-1".into(),
        origin: vec![0.0, 0.0],
        extent: vec![2.0 * PI, 2.0 * PI],
        hamiltonian: HamiltonianSpec::new(
            Hamiltonian::Advection {
                velocity: vec![1.0, 1.0],
            },
            2,
        ),
        rhs: constant(0.0),
        boundary: BoundaryData {
            members: vec![
                GammaMember::Hyperplane {
                    axis: 0,
                    coord: 0.0,
                },
                GammaMember::Hyperplane {
                    axis: 1,
                    coord: 0.0,
                },
            ],
            surface_value: Some(Arc::new(
                |x| if x[1] == 0.0 { x[0].sin() } else { -x[1].sin() },
            )),
        },
        exact: Some(exact),
        gamma: 1.0,
    }
}

/// Eikonal equation with a smooth trigonometric solution and a source at the origin.
fn trigonometric_source() -> ProblemSpec {
    let rhs: PointFn = Arc::new(|x| {
        let a = (PI + 0.5 * PI * x[0]).sin();
        let b = (PI + 0.5 * PI * x[1]).sin();
        0.5 * PI * (a * a + b * b).sqrt()
    });
    let exact: PointFn = Arc::new(|x| (PI + 0.5 * PI * x[0]).cos() + (PI + 0.5 * PI * x[1]).cos());
    ProblemSpec {
        name: "example-2".into(),
        origin: vec![-1.0, -1.0],
        extent: vec![2.0, 2.0],
        hamiltonian: HamiltonianSpec::eikonal(2),
        rhs,
        boundary: BoundaryData::points(&[(vec![0.0, 0.0], -2.0)]),
        exact: Some(exact),
        gamma: 0.4,
    }
}

/// Distance to two spheres of radius 1/2 on `[-3, 3]^3`.
fn two_spheres() -> ProblemSpec {
    let centers = [[-1.0, 0.0, 0.0], [1.5f64.sqrt(), 0.0, 0.0]];
    let exact: PointFn = Arc::new(move |x| {
        centers
            .iter()
            .map(|c| (distance(x, c) - 0.5).abs())
            .fold(f64::INFINITY, f64::min)
    });
    ProblemSpec {
        name: "example-3".into(),
        origin: vec![-3.0; 3],
        extent: vec![6.0; 3],
        hamiltonian: HamiltonianSpec::eikonal(3),
        rhs: constant(1.0),
        boundary: BoundaryData {
            members: centers
                .iter()
                .map(|c| GammaMember::Sphere {
                    center: c.to_vec(),
                    radius: 0.5,
                })
                .collect(),
            surface_value: Some(constant(0.0)),
        },
        exact: Some(exact),
        gamma: 0.8,
    }
}

/// Shape from shading on the unit square with five pinned interior points.
fn shape_from_shading() -> ProblemSpec {
    let tau = 2.0 * PI;
    let rhs: PointFn = Arc::new(move |x| {
        let a = (tau * x[0]).cos() * (tau * x[1]).sin();
        let b = (tau * x[0]).sin() * (tau * x[1]).cos();
        tau * (a * a + b * b).sqrt()
    });
    let exact: PointFn = Arc::new(move |x| {
        let s = ((tau * x[0]).sin() * (tau * x[1]).sin()).abs();
        if (x[0] + x[1] - 1.0).abs() < 0.5 && (x[0] - x[1]).abs() < 0.5 {
            s.max(1.0 + (tau * x[0]).cos() * (tau * x[1]).cos())
        } else {
            s
        }
    });
    let mut members: Vec<GammaMember> = [
        ([0.25, 0.25], 1.0),
        ([0.75, 0.75], 1.0),
        ([0.25, 0.75], 1.0),
        ([0.75, 0.25], 1.0),
        ([0.5, 0.5], 2.0),
    ]
    .iter()
    .map(|(p, v)| GammaMember::Point {
        position: p.to_vec(),
        value: *v,
    })
    .collect();
    members.push(GammaMember::DomainBoundary);
    ProblemSpec {
        name: "example-4".into(),
        origin: vec![0.0, 0.0],
        extent: vec![1.0, 1.0],
        hamiltonian: HamiltonianSpec::eikonal(2),
        rhs,
        boundary: BoundaryData {
            members,
            surface_value: Some(constant(0.0)),
        },
        exact: Some(exact),
        gamma: 0.4,
    }
}

fn generator_points(case: Case) -> Vec<Vec<f64>> {
    match case {
        Case::TwoD => GENERATORS_2D.iter().map(|p| p.to_vec()).collect(),
        Case::ThreeD => GENERATORS_3D.iter().map(|p| p.to_vec()).collect(),
    }
}

/// Distance to eight generators on the unit square or cube.
fn voronoi(case: Case) -> ProblemSpec {
    let dim = case.dim();
    let points = generator_points(case);
    let boundary =
        BoundaryData::points(&points.iter().map(|p| (p.clone(), 0.0)).collect::<Vec<_>>());
    ProblemSpec {
        name: format!("example-5-{}d", dim),
        origin: vec![0.0; dim],
        extent: vec![1.0; dim],
        hamiltonian: HamiltonianSpec::eikonal(dim),
        rhs: constant(1.0),
        boundary,
        exact: Some(min_distance(points)),
        gamma: 0.8,
    }
}

/// Minimum travel time to eight harbors for a boat of speed 1 in a uniform current.
fn boat_sail(case: Case) -> ProblemSpec {
    let dim = case.dim();
    let (points, flow) = match case {
        Case::TwoD => (
            HARBORS_2D.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
            vec![0.4, 0.0],
        ),
        Case::ThreeD => (generator_points(case), vec![0.4, 0.4, 0.0]),
    };
    let boundary =
        BoundaryData::points(&points.iter().map(|p| (p.clone(), 0.0)).collect::<Vec<_>>());
    ProblemSpec {
        name: format!("example-6-{}d", dim),
        origin: vec![0.0; dim],
        extent: vec![1.0; dim],
        hamiltonian: HamiltonianSpec::new(Hamiltonian::BoatSail { speed: 1.0, flow }, dim),
        rhs: constant(1.0),
        boundary,
        exact: None,
        gamma: 0.8,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn eikonal_norm() {
        let h = HamiltonianSpec::eikonal(2);
        assert_eq!(h.evaluate(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
        assert_eq!(
            HamiltonianSpec::eikonal(3).evaluate(&[0.0; 3], &[0.0; 3]),
            0.0
        );
        assert_eq!(h.alpha, vec![1.0, 1.0]);
    }

    #[test]
    fn boat_sail_value_and_alpha() {
        let h = HamiltonianSpec::new(
            Hamiltonian::BoatSail {
                speed: 1.0,
                flow: vec![0.4, 0.0],
            },
            2,
        );
        assert_relative_eq!(h.evaluate(&[0.0, 0.0], &[1.0, 0.0]), 1.4, epsilon = 1e-15);
        assert_eq!(h.alpha, vec![1.4, 1.0]);
    }

    #[test]
    fn boat_sail_front_speed_satisfies_pde() {
        let form = Hamiltonian::BoatSail {
            speed: 1.0,
            flow: vec![0.4, 0.0],
        };
        for dir in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.6, 0.8]] {
            let s = form.front_speed(&dir).unwrap();
            // ground velocity s * dir minus the current is the unit heading
            let heading = [s * dir[0] - 0.4, s * dir[1]];
            assert_relative_eq!(norm(&heading), 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(form.front_speed(&[1.0, 0.0]).unwrap(), 1.4, epsilon = 1e-15);
        assert_relative_eq!(
            form.front_speed(&[-1.0, 0.0]).unwrap(),
            0.6,
            epsilon = 1e-15
        );
    }

    #[test]
    fn example_two_values() {
        let p = make_benchmark(2, None).unwrap();
        assert_relative_eq!(
            p.exact_solution(&[0.0, 0.0]).unwrap(),
            -2.0,
            epsilon = 1e-15
        );
        assert!((p.rhs)(&[0.0, 0.0]).abs() < 1e-15);
        assert_eq!(p.gamma, 0.4);
    }

    #[test]
    fn example_three_center_value() {
        let p = make_benchmark(3, None).unwrap();
        assert_relative_eq!(
            p.exact_solution(&[-1.0, 0.0, 0.0]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn example_five_generators() {
        let p = make_benchmark(5, Some(Case::TwoD)).unwrap();
        assert_eq!(p.boundary.point_members().count(), 8);
        for (x, g) in p.boundary.point_members() {
            assert_eq!(g, 0.0);
            assert_eq!(p.exact_solution(x).unwrap(), 0.0);
        }
        assert!(make_benchmark(5, None).is_err());
    }

    #[test]
    fn example_five_maximum_matches_contour_range() {
        // the 2D contour plot spans phi in [0, 0.5589]
        let p = make_benchmark(5, Some(Case::TwoD)).unwrap();
        let n = 1000;
        let mut max = 0.0f64;
        for i in 0..=n {
            for j in 0..=n {
                let x = [i as f64 / n as f64, j as f64 / n as f64];
                max = max.max(p.exact_solution(&x).unwrap());
            }
        }
        assert!((max - 0.5589).abs() < 5e-4, "max {max}");
    }

    #[test]
    fn example_one_and_four_exact_values() {
        let p1 = make_benchmark(1, None).unwrap();
        assert_relative_eq!(
            p1.exact_solution(&[PI / 2.0, 0.0]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let p4 = make_benchmark(4, None).unwrap();
        assert_relative_eq!(
            p4.exact_solution(&[0.5, 0.5]).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        for (x, g) in p4.boundary.point_members() {
            assert_relative_eq!(p4.exact_solution(x).unwrap(), g, epsilon = 1e-12);
        }
    }

    #[test]
    fn example_six_has_no_exact_solution() {
        let p = make_benchmark(6, Some(Case::TwoD)).unwrap();
        assert!(matches!(
            p.exact_solution(&[0.5, 0.5]),
            Err(Error::NoExactSolution(_))
        ));
        assert!(make_benchmark(6, Some(Case::ThreeD)).is_ok());
        assert!(matches!(
            make_benchmark(7, None),
            Err(Error::UnknownBenchmark(_))
        ));
    }

    #[test]
    fn boundary_data_consistent_with_exact() {
        // continuous members: sample points on them
        let p1 = make_benchmark(1, None).unwrap();
        for k in 0..50 {
            let t = k as f64 * 2.0 * PI / 49.0;
            for x in [[t, 0.0], [0.0, t]] {
                let g = p1.boundary.surface_value_at(&x).unwrap();
                assert_relative_eq!(g, p1.exact_solution(&x).unwrap(), epsilon = 1e-14);
            }
        }
        let p3 = make_benchmark(3, None).unwrap();
        for k in 0..40 {
            let th = k as f64 * 0.157;
            for c in [[-1.0, 0.0, 0.0], [1.5f64.sqrt(), 0.0, 0.0]] {
                let x = [c[0] + 0.5 * th.cos(), c[1] + 0.5 * th.sin(), 0.0];
                assert!(p3.exact_solution(&x).unwrap() < 1e-14);
            }
        }
        let p4 = make_benchmark(4, None).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            for x in [[t, 0.0], [0.0, t], [t, 1.0], [1.0, t]] {
                assert!(p4.exact_solution(&x).unwrap().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sphere_box_intersection() {
        let s = GammaMember::Sphere {
            center: vec![0.0, 0.0, 0.0],
            radius: 0.5,
        };
        let lo = [-3.0; 3];
        let hi = [3.0; 3];
        assert!(s.meets_box(&[0.5, 0.0, 0.0], &[0.1; 3], &lo, &hi));
        assert!(s.meets_box(&[0.65, 0.0, 0.0], &[0.2; 3], &lo, &hi));
        assert!(!s.meets_box(&[0.8, 0.0, 0.0], &[0.2; 3], &lo, &hi));
        // box strictly inside the sphere does not touch the surface
        assert!(!s.meets_box(&[0.0, 0.0, 0.0], &[0.1; 3], &lo, &hi));
    }

    fn gradient_norm(p: &ProblemSpec, x: &[f64], h: f64) -> f64 {
        let mut g2 = 0.0;
        for axis in 0..x.len() {
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[axis] += h;
            b[axis] -= h;
            let d = (p.exact_solution(&a).unwrap() - p.exact_solution(&b).unwrap()) / (2.0 * h);
            g2 += d * d;
        }
        g2.sqrt()
    }

    proptest! {
        #[test]
        fn distance_solutions_have_unit_gradient(
            x in -2.9f64..2.9, y in -2.9f64..2.9, z in -2.9f64..2.9,
            u in 0.02f64..0.98, v in 0.02f64..0.98, w in 0.02f64..0.98,
        ) {
            let p3 = make_benchmark(3, None).unwrap();
            let pos = [x, y, z];
            let d1 = distance(&pos, &[-1.0, 0.0, 0.0]);
            let d2 = distance(&pos, &[1.5f64.sqrt(), 0.0, 0.0]);
            // stay away from the centers and the equidistant set
            prop_assume!(d1 > 0.01 && d2 > 0.01);
            prop_assume!(((d1 - 0.5).abs() - (d2 - 0.5).abs()).abs() > 0.01);
            prop_assume!((d1 - 0.5).abs() > 0.01 && (d2 - 0.5).abs() > 0.01);
            prop_assert!((gradient_norm(&p3, &pos, 1e-5) - 1.0).abs() < 1e-6);

            for (case, pos) in [(Case::TwoD, vec![u, v]), (Case::ThreeD, vec![u, v, w])] {
                let p5 = make_benchmark(5, Some(case)).unwrap();
                let mut d: Vec<f64> = generator_points(case).iter().map(|g| distance(&pos, g)).collect();
                d.sort_by(f64::total_cmp);
                prop_assume!(d[0] > 0.01 && d[1] - d[0] > 0.01);
                prop_assert!((gradient_norm(&p5, &pos, 1e-5) - 1.0).abs() < 1e-6);
            }
        }

        #[test]
        fn boat_sail_alpha_bounds_difference_quotients(
            p0 in -5.0f64..5.0, p1 in -5.0f64..5.0, p2 in -5.0f64..5.0,
            t in -2.0f64..2.0, axis in 0usize..3,
        ) {
            prop_assume!(t.abs() > 1e-6);
            let spec = HamiltonianSpec::new(
                Hamiltonian::BoatSail { speed: 1.0, flow: vec![0.4, 0.4, 0.0] }, 3);
            let p = [p0, p1, p2];
            let mut q = p;
            q[axis] += t;
            let x = [0.0; 3];
            let quotient = (spec.evaluate(&x, &q) - spec.evaluate(&x, &p)).abs() / t.abs();
            prop_assert!(quotient <= spec.alpha[axis] + 1e-12);
        }
    }
}
