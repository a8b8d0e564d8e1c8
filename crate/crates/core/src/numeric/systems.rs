//! First-order geodesic systems in frame components.
//!
//! The coordinate equations invert the definitions of the frame components.
//! On the Heisenberg group `f = x'`, `g = y'`, `h = (t' + 2x y' - 2y x') / 2`, so
//!
//! ```text
//! x' = f,  y' = g,  t' = 2h - 2x g + 2y f
//! f' = 2gh,  g' = -2fh,  h' = 0
//! ```
//!
//! On the cone `f = r x'`, `g = r y'`, `h = (r/2)(t' + 2x y' - 2y x')`, `k = r'`, so
//!
//! ```text
//! x' = f/r,  y' = g/r,  t' = (2h - 2x g + 2y f)/r,  r' = k
//! f' = (2gh - kf)/r,  g' = (-2fh - kg)/r,  h' = -kh/r,  k' = (1 - k^2)/r
//! ```

use serde::{Deserialize, Serialize};

use super::NumericError;
use crate::cone::{ConePoint, FrameVecC};
use crate::heis::{FrameVecH, HeisPoint};
use crate::R_MIN_INTEGRATION;

/// Position and frame velocity on the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisState {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl HeisState {
    pub fn new(p: HeisPoint, v: FrameVecH) -> Self {
        Self { x: p.x, y: p.y, t: p.t, f: v.f, g: v.g, h: v.h }
    }

    pub fn point(&self) -> HeisPoint {
        HeisPoint::new(self.x, self.y, self.t)
    }

    pub fn velocity(&self) -> FrameVecH {
        FrameVecH::new(self.f, self.g, self.h)
    }

    pub fn speed_sq(&self) -> f64 {
        self.f * self.f + self.g * self.g + self.h * self.h
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.x, self.y, self.t, self.f, self.g, self.h]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self { x: a[0], y: a[1], t: a[2], f: a[3], g: a[4], h: a[5] }
    }
}

/// Position and frame velocity on the cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeState {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub r: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub k: f64,
}

impl ConeState {
    pub fn new(q: ConePoint, v: FrameVecC) -> Self {
        Self { x: q.x, y: q.y, t: q.t, r: q.r, f: v.f, g: v.g, h: v.h, k: v.k }
    }

    pub fn point(&self) -> ConePoint {
        ConePoint::new(self.x, self.y, self.t, self.r)
    }

    pub fn velocity(&self) -> FrameVecC {
        FrameVecC::new(self.f, self.g, self.h, self.k)
    }

    pub fn speed_sq(&self) -> f64 {
        self.f * self.f + self.g * self.g + self.h * self.h + self.k * self.k
    }

    pub fn to_array(self) -> [f64; 8] {
        [self.x, self.y, self.t, self.r, self.f, self.g, self.h, self.k]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self { x: a[0], y: a[1], t: a[2], r: a[3], f: a[4], g: a[5], h: a[6], k: a[7] }
    }
}

/// An autonomous first-order system `y' = F(y)` on `R^N`.
pub trait GeodesicSystem<const N: usize> {
    fn name(&self) -> &'static str;

    /// The vector field. Callers check [`GeodesicSystem::in_domain`] first.
    fn rhs(&self, y: &[f64; N]) -> [f64; N];

    fn in_domain(&self, _y: &[f64; N]) -> bool {
        true
    }

    /// `(r, r')` for systems that must keep a radius above a floor.
    fn radial(&self, _y: &[f64; N]) -> Option<(f64, f64)> {
        None
    }

    fn r_min(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HeisFlow;

impl GeodesicSystem<6> for HeisFlow {
    fn name(&self) -> &'static str {
        "heisenberg"
    }

    fn rhs(&self, y: &[f64; 6]) -> [f64; 6] {
        heis_rhs(&HeisState::from_array(*y)).to_array()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConeFlow {
    pub r_min: f64,
}

impl Default for ConeFlow {
    fn default() -> Self {
        Self { r_min: R_MIN_INTEGRATION }
    }
}

impl GeodesicSystem<8> for ConeFlow {
    fn name(&self) -> &'static str {
        "cone"
    }

    fn rhs(&self, y: &[f64; 8]) -> [f64; 8] {
        cone_rhs_unchecked(&ConeState::from_array(*y)).to_array()
    }

    fn in_domain(&self, y: &[f64; 8]) -> bool {
        y[3] > self.r_min && y.iter().all(|v| v.is_finite())
    }

    fn radial(&self, y: &[f64; 8]) -> Option<(f64, f64)> {
        Some((y[3], y[7]))
    }

    fn r_min(&self) -> f64 {
        self.r_min
    }
}

/// Derivative of a Heisenberg state along the geodesic flow.
pub fn heis_rhs(s: &HeisState) -> HeisState {
    HeisState {
        x: s.f,
        y: s.g,
        t: 2.0 * s.h - 2.0 * s.x * s.g + 2.0 * s.y * s.f,
        f: 2.0 * s.g * s.h,
        g: -2.0 * s.f * s.h,
        h: 0.0,
    }
}

/// Derivative of a cone state; fails when `r` is at or below the integration floor.
pub fn cone_rhs(s: &ConeState) -> Result<ConeState, NumericError> {
    if s.r.is_nan() || s.r <= R_MIN_INTEGRATION {
        return Err(NumericError::DomainBreach { r: s.r });
    }
    Ok(cone_rhs_unchecked(s))
}

fn cone_rhs_unchecked(s: &ConeState) -> ConeState {
    let inv = 1.0 / s.r;
    ConeState {
        x: s.f * inv,
        y: s.g * inv,
        t: (2.0 * s.h - 2.0 * s.x * s.g + 2.0 * s.y * s.f) * inv,
        r: s.k,
        f: (2.0 * s.g * s.h - s.k * s.f) * inv,
        g: (-2.0 * s.f * s.h - s.k * s.g) * inv,
        h: -s.k * s.h * inv,
        k: (1.0 - s.k * s.k) * inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heis_rhs_examples() {
        let d = heis_rhs(&HeisState::from_array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
        assert_eq!(d.to_array(), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let d = heis_rhs(&HeisState::from_array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
        assert_eq!(d.to_array(), [0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        let r3 = 3f64.sqrt() / 2.0;
        let d = heis_rhs(&HeisState::from_array([0.0, 0.0, 0.0, r3, 0.0, 0.5]));
        assert_eq!(d.to_array(), [r3, 0.0, 1.0, 0.0, -r3, 0.0]);
    }

    #[test]
    fn cone_rhs_examples() {
        let d = cone_rhs(&ConeState::from_array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(d.to_array(), [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let d = cone_rhs(&ConeState::from_array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0])).unwrap();
        assert_eq!(d.to_array(), [0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let d = cone_rhs(&ConeState::from_array([0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0])).unwrap();
        assert_eq!(d.to_array(), [0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let breach = cone_rhs(&ConeState::from_array([0.0, 0.0, 0.0, 1e-10, 0.0, 0.0, 0.0, -1.0]));
        assert!(matches!(breach, Err(NumericError::DomainBreach { .. })));
    }
}
