//! The Heisenberg group as a contact metric Lie group.
//!
//! Points are `(x, y, t)` with `z = x + iy`. The group law is
//! `(z, t) * (w, s) = (z + w, t + s + 2 Im(z conj(w)))`. The left-invariant
//! frame is
//!
//! ```text
//! X = d/dx + 2y d/dt,   Y = d/dy - 2x d/dt,   T~ = 2 d/dt
//! ```
//!
//! and the contact form is `omega = dt + 2x dy - 2y dx`, with `omega~ = omega / 2`.
//! For the metric `g_L = dx^2 + dy^2 + L omega^2` at `L = 1/4` the frame
//! `{X, Y, T~}` is orthonormal; all tangent data leaving this module is
//! expressed in that frame as a [`FrameVecH`].

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::EPS_UNIT;

/// A point of the Heisenberg group in `(x, y, t)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl HeisPoint {
    pub const ORIGIN: HeisPoint = HeisPoint { x: 0.0, y: 0.0, t: 0.0 };

    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn checked(x: f64, y: f64, t: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && t.is_finite()) {
            return Err(GeomError::NonFinite("Heisenberg point"));
        }
        Ok(Self { x, y, t })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.t]
    }
}

/// A tangent vector in the coordinate basis `d/dx, d/dy, d/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordVecH {
    pub dx: f64,
    pub dy: f64,
    pub dt: f64,
}

impl CoordVecH {
    pub fn new(dx: f64, dy: f64, dt: f64) -> Self {
        Self { dx, dy, dt }
    }
}

/// Components `(f, g, h)` of a tangent vector in the orthonormal frame `{X, Y, T~}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVecH {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl FrameVecH {
    pub const ZERO: FrameVecH = FrameVecH { f: 0.0, g: 0.0, h: 0.0 };

    pub fn new(f: f64, g: f64, h: f64) -> Self {
        Self { f, g, h }
    }

    /// Inner product for `g = g_{1/4}`, where the frame is orthonormal.
    pub fn dot(&self, other: &Self) -> f64 {
        self.f * other.f + self.g * other.g + self.h * other.h
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.f.abs().max(self.g.abs()).max(self.h.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.g.is_finite() && self.h.is_finite()
    }

    /// Accepts the vector as unit speed if `|v|^2` is within `EPS_UNIT` of one.
    pub fn check_unit(self) -> Result<Self> {
        if !self.is_finite() {
            return Err(GeomError::NonFinite("frame vector"));
        }
        let norm_sq = self.norm_sq();
        if (norm_sq - 1.0).abs() > EPS_UNIT {
            return Err(GeomError::NonUnit { norm_sq, tol: EPS_UNIT });
        }
        Ok(self)
    }

    /// Explicit opt-in normalization; fails only for the zero or non-finite vector.
    pub fn normalized(self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::NonFinite("cannot normalize frame vector"));
        }
        Ok(self * (1.0 / n))
    }
}

impl Add for FrameVecH {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.f + o.f, self.g + o.g, self.h + o.h)
    }
}

impl Sub for FrameVecH {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.f - o.f, self.g - o.g, self.h - o.h)
    }
}

impl Neg for FrameVecH {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.f, -self.g, -self.h)
    }
}

impl Mul<f64> for FrameVecH {
    type Output = Self;
    fn mul(self, a: f64) -> Self {
        Self::new(a * self.f, a * self.g, a * self.h)
    }
}

/// Positive parameter `L` of the metric family `g_L = dx^2 + dy^2 + L omega^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParamL(f64);

impl MetricParamL {
    /// `L = 1/4`, the only value for which `g_L` is a contact metric.
    pub const SASAKIAN: MetricParamL = MetricParamL(0.25);

    pub fn new(l: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(GeomError::InvalidMetricParam(l));
        }
        Ok(Self(l))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for MetricParamL {
    fn default() -> Self {
        Self::SASAKIAN
    }
}

/// Labels of the orthonormal frame `{X, Y, T~}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameLabelH {
    X,
    Y,
    /// `T~ = 2T = 2 d/dt`, the Reeb field of `omega~`.
    T,
}

impl FrameLabelH {
    pub const ALL: [FrameLabelH; 3] = [FrameLabelH::X, FrameLabelH::Y, FrameLabelH::T];

    /// The label as a unit frame vector.
    pub fn unit(self) -> FrameVecH {
        match self {
            FrameLabelH::X => FrameVecH::new(1.0, 0.0, 0.0),
            FrameLabelH::Y => FrameVecH::new(0.0, 1.0, 0.0),
            FrameLabelH::T => FrameVecH::new(0.0, 0.0, 1.0),
        }
    }
}

pub fn group_mul(p: HeisPoint, q: HeisPoint) -> HeisPoint {
    // Im(z conj(w)) = y_z x_w - x_z y_w
    let im = p.y * q.x - p.x * q.y;
    HeisPoint::new(p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * im)
}

pub fn group_inv(p: HeisPoint) -> HeisPoint {
    HeisPoint::new(-p.x, -p.y, -p.t)
}

pub fn frame_at(p: HeisPoint, label: FrameLabelH) -> CoordVecH {
    match label {
        FrameLabelH::X => CoordVecH::new(1.0, 0.0, 2.0 * p.y),
        FrameLabelH::Y => CoordVecH::new(0.0, 1.0, -2.0 * p.x),
        FrameLabelH::T => CoordVecH::new(0.0, 0.0, 2.0),
    }
}

/// `omega(v) = dt(v) + 2x dy(v) - 2y dx(v)`.
pub fn contact_form(p: HeisPoint, v: CoordVecH) -> f64 {
    v.dt + 2.0 * p.x * v.dy - 2.0 * p.y * v.dx
}

/// `omega~ = omega / 2`, normalized so that `omega~(T~) = 1`.
pub fn contact_form_tilde(p: HeisPoint, v: CoordVecH) -> f64 {
    0.5 * contact_form(p, v)
}

/// `d omega (u, v) = 4 (dx ^ dy)(u, v)`.
pub fn d_contact_form(u: CoordVecH, v: CoordVecH) -> f64 {
    4.0 * (u.dx * v.dy - u.dy * v.dx)
}

pub fn metric_g(p: HeisPoint, u: CoordVecH, v: CoordVecH, l: MetricParamL) -> f64 {
    u.dx * v.dx + u.dy * v.dy + l.value() * contact_form(p, u) * contact_form(p, v)
}

pub fn frame_decompose(p: HeisPoint, v: CoordVecH) -> FrameVecH {
    FrameVecH::new(v.dx, v.dy, contact_form_tilde(p, v))
}

/// Inverse of [`frame_decompose`]: `f X + g Y + h T~` in coordinates.
pub fn frame_compose(p: HeisPoint, w: FrameVecH) -> CoordVecH {
    CoordVecH::new(w.f, w.g, 2.0 * w.h + 2.0 * p.y * w.f - 2.0 * p.x * w.g)
}

/// Structure constants in the frame `{X, Y, T~}`: `[X, Y] = -4T = -2 T~`.
pub fn lie_bracket(a: FrameLabelH, b: FrameLabelH) -> FrameVecH {
    use FrameLabelH::*;
    match (a, b) {
        (X, Y) => FrameVecH::new(0.0, 0.0, -2.0),
        (Y, X) => FrameVecH::new(0.0, 0.0, 2.0),
        _ => FrameVecH::ZERO,
    }
}

/// Levi-Civita connection of `g` on the frame: returns `nabla_a b`.
pub fn connection_h(a: FrameLabelH, b: FrameLabelH) -> FrameVecH {
    use FrameLabelH::*;
    match (a, b) {
        (X, X) | (Y, Y) | (T, T) => FrameVecH::ZERO,
        (X, Y) => FrameVecH::new(0.0, 0.0, -1.0),
        (X, T) => FrameVecH::new(0.0, 1.0, 0.0),
        (Y, X) => FrameVecH::new(0.0, 0.0, 1.0),
        (Y, T) => FrameVecH::new(-1.0, 0.0, 0.0),
        (T, X) => FrameVecH::new(0.0, 1.0, 0.0),
        (T, Y) => FrameVecH::new(-1.0, 0.0, 0.0),
    }
}

/// The endomorphism `phi`: `J` on the horizontal plane, zero on the Reeb direction.
pub fn phi(v: FrameVecH) -> FrameVecH {
    FrameVecH::new(-v.g, v.f, 0.0)
}

/// `phi` acting on a coordinate vector for the `g_L` structure with Reeb field `T / sqrt(L)`.
///
/// Only the horizontal part matters, so the result does not depend on `L`.
pub fn phi_coord(p: HeisPoint, v: CoordVecH) -> CoordVecH {
    let (a, b) = (v.dx, v.dy);
    // phi(aX + bY + cT) = aY - bX
    CoordVecH::new(-b, a, -2.0 * p.y * b - 2.0 * p.x * a)
}
