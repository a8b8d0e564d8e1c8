//! The Kähler cone over the Heisenberg group.
//!
//! The manifold is `H x (0, inf)` with coordinates `(x, y, t, r)` and metric
//! `g_r = dr^2 + r^2 g`. The orthonormal frame is
//! `X_r = X / r`, `Y_r = Y / r`, `T_r = T~ / r`, `R_r = d/dr`, and the complex
//! structure acts as `J X_r = Y_r`, `J Y_r = -X_r`, `J T_r = -R_r`, `J R_r = T_r`.
//!
//! The fundamental form is `Omega_r = d((r^2/2) omega~)`. Expanding with
//! `omega~ = omega / 2` and `d omega = 4 dx ^ dy`:
//!
//! ```text
//! Omega_r = (r/2) dr ^ omega + r^2 dx ^ dy
//! ```
//!
//! which equals `g_r(J u, v)` on every pair of frame fields. Closedness holds
//! because `Omega_r` is exact.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::heis::{self, HeisPoint, MetricParamL};
use crate::{EPS_UNIT, R_MIN};

/// A point `(x, y, t, r)` of the cone, `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub r: f64,
}

impl ConePoint {
    pub fn new(x: f64, y: f64, t: f64, r: f64) -> Self {
        Self { x, y, t, r }
    }

    /// Builds a point, rejecting non-finite coordinates and `r <= R_MIN`.
    pub fn checked(x: f64, y: f64, t: f64, r: f64) -> Result<Self> {
        let q = Self { x, y, t, r };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x.is_finite() && self.y.is_finite() && self.t.is_finite() && self.r.is_finite()) {
            return Err(GeomError::NonFinite("cone point"));
        }
        check_radius(self.r)
    }

    /// Projection to the Heisenberg factor.
    pub fn base(&self) -> HeisPoint {
        HeisPoint::new(self.x, self.y, self.t)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.t, self.r]
    }

    pub fn max_abs_diff(&self, o: &ConePoint) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.t - o.t).abs()).max((self.r - o.r).abs())
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r > R_MIN {
        Ok(())
    } else {
        Err(GeomError::RadiusTooSmall(r))
    }
}

/// A tangent vector in the coordinate basis `d/dx, d/dy, d/dt, d/dr`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoordVecC {
    pub dx: f64,
    pub dy: f64,
    pub dt: f64,
    pub dr: f64,
}

impl CoordVecC {
    pub fn new(dx: f64, dy: f64, dt: f64, dr: f64) -> Self {
        Self { dx, dy, dt, dr }
    }

    pub fn heis_part(&self) -> heis::CoordVecH {
        heis::CoordVecH::new(self.dx, self.dy, self.dt)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.dx, self.dy, self.dt, self.dr]
    }
}

/// Components `(f, g, h, k)` in the orthonormal frame `{X_r, Y_r, T_r, R_r}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVecC {
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub k: f64,
}

impl FrameVecC {
    pub const ZERO: FrameVecC = FrameVecC { f: 0.0, g: 0.0, h: 0.0, k: 0.0 };

    pub fn new(f: f64, g: f64, h: f64, k: f64) -> Self {
        Self { f, g, h, k }
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.f * o.f + self.g * o.g + self.h * o.h + self.k * o.k
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.f.abs().max(self.g.abs()).max(self.h.abs()).max(self.k.abs())
    }

    /// The horizontal part `F = f + i g`.
    pub fn horizontal(&self) -> Complex64 {
        Complex64::new(self.f, self.g)
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.g.is_finite() && self.h.is_finite() && self.k.is_finite()
    }

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

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::NonFinite("cannot normalize frame vector"));
        }
        Ok(self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.f, self.g, self.h, self.k]
    }
}

impl Add for FrameVecC {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.f + o.f, self.g + o.g, self.h + o.h, self.k + o.k)
    }
}

impl Sub for FrameVecC {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.f - o.f, self.g - o.g, self.h - o.h, self.k - o.k)
    }
}

impl Neg for FrameVecC {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.f, -self.g, -self.h, -self.k)
    }
}

impl Mul<f64> for FrameVecC {
    type Output = Self;
    fn mul(self, a: f64) -> Self {
        Self::new(a * self.f, a * self.g, a * self.h, a * self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameLabelC {
    X,
    Y,
    T,
    R,
}

impl FrameLabelC {
    pub const ALL: [FrameLabelC; 4] = [FrameLabelC::X, FrameLabelC::Y, FrameLabelC::T, FrameLabelC::R];

    pub fn unit(self) -> FrameVecC {
        match self {
            FrameLabelC::X => FrameVecC::new(1.0, 0.0, 0.0, 0.0),
            FrameLabelC::Y => FrameVecC::new(0.0, 1.0, 0.0, 0.0),
            FrameLabelC::T => FrameVecC::new(0.0, 0.0, 1.0, 0.0),
            FrameLabelC::R => FrameVecC::new(0.0, 0.0, 0.0, 1.0),
        }
    }
}

pub fn cone_metric(q: ConePoint, u: CoordVecC, v: CoordVecC) -> Result<f64> {
    check_radius(q.r)?;
    let g = heis::metric_g(q.base(), u.heis_part(), v.heis_part(), MetricParamL::SASAKIAN);
    Ok(u.dr * v.dr + q.r * q.r * g)
}

pub fn cone_frame_at(q: ConePoint, label: FrameLabelC) -> Result<CoordVecC> {
    check_radius(q.r)?;
    let inv = 1.0 / q.r;
    Ok(match label {
        FrameLabelC::X => CoordVecC::new(inv, 0.0, 2.0 * q.y * inv, 0.0),
        FrameLabelC::Y => CoordVecC::new(0.0, inv, -2.0 * q.x * inv, 0.0),
        FrameLabelC::T => CoordVecC::new(0.0, 0.0, 2.0 * inv, 0.0),
        FrameLabelC::R => CoordVecC::new(0.0, 0.0, 0.0, 1.0),
    })
}

pub fn frame_decompose_cone(q: ConePoint, v: CoordVecC) -> Result<FrameVecC> {
    check_radius(q.r)?;
    let r = q.r;
    Ok(FrameVecC::new(r * v.dx, r * v.dy, 0.5 * r * heis::contact_form(q.base(), v.heis_part()), v.dr))
}

pub fn frame_compose_cone(q: ConePoint, w: FrameVecC) -> Result<CoordVecC> {
    check_radius(q.r)?;
    let inv = 1.0 / q.r;
    let (dx, dy) = (w.f * inv, w.g * inv);
    Ok(CoordVecC::new(dx, dy, 2.0 * w.h * inv + 2.0 * q.y * dx - 2.0 * q.x * dy, w.k))
}

/// `(f, g, h, k) -> (-g, f, k, -h)`.
pub fn j_apply(v: FrameVecC) -> FrameVecC {
    FrameVecC::new(-v.g, v.f, v.k, -v.h)
}

pub fn j_apply_coord(q: ConePoint, v: CoordVecC) -> Result<CoordVecC> {
    frame_compose_cone(q, j_apply(frame_decompose_cone(q, v)?))
}

/// `Omega_r(u, v) = (r/2)(dr ^ omega)(u, v) + r^2 (dx ^ dy)(u, v)`.
pub fn fundamental_form(q: ConePoint, u: CoordVecC, v: CoordVecC) -> Result<f64> {
    check_radius(q.r)?;
    let p = q.base();
    let (wu, wv) = (heis::contact_form(p, u.heis_part()), heis::contact_form(p, v.heis_part()));
    let dr_omega = u.dr * wv - v.dr * wu;
    let dx_dy = u.dx * v.dy - u.dy * v.dx;
    Ok(0.5 * q.r * dr_omega + q.r * q.r * dx_dy)
}

/// Levi-Civita connection of `g_r` on the frame: returns `nabla^r_a b`.
pub fn connection_c(a: FrameLabelC, b: FrameLabelC, r: f64) -> Result<FrameVecC> {
    use FrameLabelC::*;
    check_radius(r)?;
    let s = 1.0 / r;
    let unit = |l: FrameLabelC, c: f64| l.unit() * (c * s);
    Ok(match (a, b) {
        (R, _) => FrameVecC::ZERO,
        (X, X) | (Y, Y) | (T, T) => unit(R, -1.0),
        (Y, X) => unit(T, 1.0),
        (T, X) => unit(Y, 1.0),
        (X, Y) => unit(T, -1.0),
        (T, Y) => unit(X, -1.0),
        (X, T) => unit(Y, 1.0),
        (Y, T) => unit(X, -1.0),
        (X, R) => unit(X, 1.0),
        (Y, R) => unit(Y, 1.0),
        (T, R) => unit(T, 1.0),
    })
}

/// Frame brackets: `[X_r, Y_r] = -(2/r) T_r` and `[E, R_r] = (1/r) E` for `E = X_r, Y_r, T_r`.
pub fn lie_bracket_cone(a: FrameLabelC, b: FrameLabelC, r: f64) -> Result<FrameVecC> {
    use FrameLabelC::*;
    check_radius(r)?;
    let s = 1.0 / r;
    Ok(match (a, b) {
        (X, Y) => T.unit() * (-2.0 * s),
        (Y, X) => T.unit() * (2.0 * s),
        (e @ (X | Y | T), R) => e.unit() * s,
        (R, e @ (X | Y | T)) => e.unit() * (-s),
        _ => FrameVecC::ZERO,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coord(q: ConePoint, l: FrameLabelC) -> CoordVecC {
        cone_frame_at(q, l).unwrap()
    }

    #[test]
    fn metric_examples() {
        let q = ConePoint::new(0.5, -1.0, 3.0, 2.7);
        let r = CoordVecC::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(cone_metric(q, r, r).unwrap(), 1.0);
        let q2 = ConePoint::new(0.0, 0.0, 0.0, 2.0);
        let x = CoordVecC::new(0.5, 0.0, 0.0, 0.0);
        assert_eq!(cone_metric(q2, x, x).unwrap(), 1.0);
        assert_eq!(cone_metric(q, coord(q, FrameLabelC::X), coord(q, FrameLabelC::R)).unwrap(), 0.0);
        assert!(matches!(cone_metric(ConePoint::new(0.0, 0.0, 0.0, 0.0), r, r), Err(GeomError::RadiusTooSmall(_))));
        assert!(cone_metric(ConePoint::new(0.0, 0.0, 0.0, -1.0), r, r).is_err());
    }

    #[test]
    fn frame_examples() {
        assert_eq!(coord(ConePoint::new(0.0, 0.0, 0.0, 1.0), FrameLabelC::X), CoordVecC::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(coord(ConePoint::new(1.0, 0.0, 0.0, 2.0), FrameLabelC::Y), CoordVecC::new(0.0, 0.5, -1.0, 0.0));
        assert_eq!(coord(ConePoint::new(3.0, 4.0, 5.0, 7.0), FrameLabelC::R), CoordVecC::new(0.0, 0.0, 0.0, 1.0));
        assert!(cone_frame_at(ConePoint::new(0.0, 0.0, 0.0, 1e-13), FrameLabelC::R).is_err());
    }

    #[test]
    fn decompose_examples() {
        let q1 = ConePoint::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(
            frame_decompose_cone(q1, CoordVecC::new(0.0, 0.0, 0.0, 1.0)).unwrap(),
            FrameVecC::new(0.0, 0.0, 0.0, 1.0)
        );
        let q2 = ConePoint::new(0.0, 0.0, 0.0, 2.0);
        assert_eq!(
            frame_decompose_cone(q2, CoordVecC::new(1.0, 0.0, 0.0, 0.0)).unwrap(),
            FrameVecC::new(2.0, 0.0, 0.0, 0.0)
        );
        let q3 = ConePoint::new(0.0, 0.0, 0.0, 0.8);
        assert_eq!(
            frame_decompose_cone(q3, CoordVecC::new(0.0, 0.0, 2.0 / 0.8, 0.0)).unwrap(),
            FrameVecC::new(0.0, 0.0, 1.0, 0.0)
        );
    }

    #[test]
    fn complex_structure() {
        assert_eq!(j_apply(FrameLabelC::X.unit()), FrameLabelC::Y.unit());
        assert_eq!(j_apply(FrameLabelC::Y.unit()), -FrameLabelC::X.unit());
        assert_eq!(j_apply(FrameLabelC::T.unit()), -FrameLabelC::R.unit());
        assert_eq!(j_apply(FrameLabelC::R.unit()), FrameLabelC::T.unit());
        let v = FrameVecC::new(0.1, -0.2, 0.3, 0.4);
        assert_eq!(j_apply(j_apply(v)), -v);
    }

    #[test]
    fn fundamental_form_examples() {
        let q = ConePoint::new(0.3, -0.6, 1.0, 1.7);
        let (x, y, t, r) =
            (coord(q, FrameLabelC::X), coord(q, FrameLabelC::Y), coord(q, FrameLabelC::T), coord(q, FrameLabelC::R));
        assert!((fundamental_form(q, x, y).unwrap() - 1.0).abs() < 1e-15);
        assert!((fundamental_form(q, r, t).unwrap() - 1.0).abs() < 1e-15);
        assert!((fundamental_form(q, t, r).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(fundamental_form(q, x, t).unwrap(), 0.0);
        let u = CoordVecC::new(0.4, 1.1, -0.2, 0.9);
        assert_eq!(fundamental_form(q, u, u).unwrap(), 0.0);
        for a in FrameLabelC::ALL {
            for b in FrameLabelC::ALL {
                let omega = fundamental_form(q, coord(q, a), coord(q, b)).unwrap();
                let via_j = j_apply(a.unit()).dot(&b.unit());
                assert!((omega - via_j).abs() < 1e-15, "{a:?} {b:?}: {omega} vs {via_j}");
            }
        }
    }

    #[test]
    fn connection_examples() {
        use FrameLabelC::*;
        assert_eq!(connection_c(X, Y, 2.0).unwrap(), FrameVecC::new(0.0, 0.0, -0.5, 0.0));
        assert_eq!(connection_c(T, T, 1.0).unwrap(), FrameVecC::new(0.0, 0.0, 0.0, -1.0));
        assert_eq!(connection_c(R, X, 3.3).unwrap(), FrameVecC::ZERO);
        assert_eq!(lie_bracket_cone(X, Y, 1.0).unwrap(), FrameVecC::new(0.0, 0.0, -2.0, 0.0));
        assert_eq!(lie_bracket_cone(X, R, 4.0).unwrap(), FrameVecC::new(0.25, 0.0, 0.0, 0.0));
        assert_eq!(lie_bracket_cone(X, T, 0.7).unwrap(), FrameVecC::ZERO);
        assert!(connection_c(X, X, 0.0).is_err());
        assert!(lie_bracket_cone(X, X, -2.0).is_err());
    }

    #[test]
    fn connection_is_torsion_free_and_metric() {
        for &r in &[0.3, 1.0, 2.5] {
            for a in FrameLabelC::ALL {
                for b in FrameLabelC::ALL {
                    let torsion = connection_c(a, b, r).unwrap()
                        - connection_c(b, a, r).unwrap()
                        - lie_bracket_cone(a, b, r).unwrap();
                    assert!(torsion.max_abs() <= 1e-15, "{a:?} {b:?}");
                    for c in FrameLabelC::ALL {
                        let m = connection_c(a, b, r).unwrap().dot(&c.unit())
                            + b.unit().dot(&connection_c(a, c, r).unwrap());
                        assert_eq!(m, 0.0);
                    }
                }
            }
        }
    }
}
