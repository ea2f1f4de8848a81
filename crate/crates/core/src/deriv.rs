//! One-sided derivative approximations along a grid line.
//!
//! Stencils are passed as plain arrays ordered by increasing coordinate. The
//! minus-side operators see `phi[i-2..=i+1]`, the plus-side operators
//! `phi[i-1..=i+2]`.

/// Which one-sided derivative approximation the sweeper uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// Two-point upwind differences.
    FirstOrder,
    /// Third-order WENO with nonlinear weights.
    Weno3,
    /// Third-order linear upwind (WENO with weights frozen at 1/3).
    Linear3,
}

impl std::str::FromStr for DerivativeMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first-order" | "first" | "upwind1" => Ok(DerivativeMode::FirstOrder),
            "weno3" | "weno" => Ok(DerivativeMode::Weno3),
            "linear3" | "linear" => Ok(DerivativeMode::Linear3),
            other => Err(crate::Error::InvalidConfig(format!(
                "unknown derivative mode `{other}`"
            ))),
        }
    }
}

impl DerivativeMode {
    /// Minus- and plus-side derivatives at the centre of the five-point
    /// stencil `s = phi[i-2..=i+2]`.
    #[inline]
    pub fn one_sided(self, s: &[f64; 5], h: f64, eps: f64) -> (f64, f64) {
        match self {
            DerivativeMode::FirstOrder => (upwind1(s[1], s[2], h), upwind1(s[2], s[3], h)),
            DerivativeMode::Weno3 => (
                weno3_minus(&[s[0], s[1], s[2], s[3]], h, eps),
                weno3_plus(&[s[1], s[2], s[3], s[4]], h, eps),
            ),
            DerivativeMode::Linear3 => (
                linear3_minus(&[s[0], s[1], s[2], s[3]], h),
                linear3_plus(&[s[1], s[2], s[3], s[4]], h),
            ),
        }
    }

    /// Number of ghost points needed past each end of a line.
    pub fn ghost_width(self) -> usize {
        match self {
            DerivativeMode::FirstOrder => 1,
            _ => 2,
        }
    }
}

#[inline]
pub fn upwind1(left: f64, right: f64, h: f64) -> f64 {
    (right - left) / h
}

/// Smoothness ratio and weight for the minus side, `v = phi[i-2..=i+1]`.
#[inline]
pub fn weno3_minus_weight(v: &[f64; 4], eps: f64) -> f64 {
    let upwind = v[2] - 2.0 * v[1] + v[0];
    let central = v[3] - 2.0 * v[2] + v[1];
    let r = (eps + upwind * upwind) / (eps + central * central);
    1.0 / (1.0 + 2.0 * r * r)
}

/// Weight for the plus side, `v = phi[i-1..=i+2]`.
#[inline]
pub fn weno3_plus_weight(v: &[f64; 4], eps: f64) -> f64 {
    let upwind = v[3] - 2.0 * v[2] + v[1];
    let central = v[2] - 2.0 * v[1] + v[0];
    let r = (eps + upwind * upwind) / (eps + central * central);
    1.0 / (1.0 + 2.0 * r * r)
}

#[inline]
fn blend_minus(v: &[f64; 4], h: f64, w: f64) -> f64 {
    let central = (v[3] - v[1]) / (2.0 * h);
    let upwind = (3.0 * v[2] - 4.0 * v[1] + v[0]) / (2.0 * h);
    (1.0 - w) * central + w * upwind
}

#[inline]
fn blend_plus(v: &[f64; 4], h: f64, w: f64) -> f64 {
    let central = (v[2] - v[0]) / (2.0 * h);
    let upwind = (-v[3] + 4.0 * v[2] - 3.0 * v[1]) / (2.0 * h);
    (1.0 - w) * central + w * upwind
}

/// Third-order WENO approximation of the derivative when information flows
/// toward increasing coordinate.
#[inline]
pub fn weno3_minus(v: &[f64; 4], h: f64, eps: f64) -> f64 {
    blend_minus(v, h, weno3_minus_weight(v, eps))
}

/// Third-order WENO approximation of the derivative when information flows
/// toward decreasing coordinate.
#[inline]
pub fn weno3_plus(v: &[f64; 4], h: f64, eps: f64) -> f64 {
    blend_plus(v, h, weno3_plus_weight(v, eps))
}

#[inline]
pub fn linear3_minus(v: &[f64; 4], h: f64) -> f64 {
    blend_minus(v, h, 1.0 / 3.0)
}

#[inline]
pub fn linear3_plus(v: &[f64; 4], h: f64) -> f64 {
    blend_plus(v, h, 1.0 / 3.0)
}

/// Ghost values past a line end from the quadratic through the three points
/// nearest that end. `interior` is ordered from the boundary inward; the
/// result holds the values one and two spacings outside.
#[inline]
pub fn extrapolate_ghost(interior: &[f64; 3]) -> [f64; 2] {
    let [a, b, c] = *interior;
    [3.0 * a - 3.0 * b + c, 6.0 * a - 8.0 * b + 3.0 * c]
}

/// Linear counterpart of [`extrapolate_ghost`], used by the first-order scheme.
#[inline]
pub fn extrapolate_ghost_linear(interior: &[f64; 2]) -> [f64; 2] {
    let [a, b] = *interior;
    [2.0 * a - b, 3.0 * a - 2.0 * b]
}
