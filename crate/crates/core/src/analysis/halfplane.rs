//! The half-plane `U = {(t, r) : r > 0}` with `g_U = dr^2 + r^2 dt^2`, embedded
//! in the cone by `(t, r) -> (x, y, t, r) = (0, 0, 2t, r)`.
//!
//! `(t, r) -> (r cos t, r sin t)` is a local isometry onto the punctured
//! Euclidean plane, so geodesics are straight lines read back in polar form.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::closed::cone_geodesic_from_ic;
use crate::cone::{cone_metric, frame_decompose_cone, ConePoint, CoordVecC, FrameVecC};
use crate::error::{GeomError, Result};
use crate::numeric::{cone_rhs, ConeState};
use crate::CASE_EPS;

use super::report::{SupNorm, ValidationReport};
use super::sampling::rng;

/// Central-difference step for residuals along an embedded curve.
pub const FD_STEP: f64 = 1e-5;
pub const ODE_RESIDUAL_TOL: f64 = 1e-6;
pub const PULLBACK_TOL: f64 = 1e-12;
/// Agreement of the image with the cone geodesic sharing its initial data.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub t: f64,
    pub r: f64,
}

impl HalfPlanePoint {
    pub fn new(t: f64, r: f64) -> Self {
        Self { t, r }
    }

    pub fn checked(t: f64, r: f64) -> Result<Self> {
        if !t.is_finite() || !r.is_finite() {
            return Err(GeomError::NonFinite("half-plane point"));
        }
        if r.is_nan() || r <= 0.0 {
            return Err(GeomError::RadiusTooSmall(r));
        }
        Ok(Self { t, r })
    }
}

/// `g_U(u, v)` for tangent vectors `(dt, dr)` at `p`.
pub fn halfplane_metric(p: HalfPlanePoint, u: (f64, f64), v: (f64, f64)) -> f64 {
    u.1 * v.1 + p.r * p.r * u.0 * v.0
}

pub fn embed(p: HalfPlanePoint) -> ConePoint {
    ConePoint::new(0.0, 0.0, 2.0 * p.t, p.r)
}

/// Differential of the embedding on a tangent vector `(dt, dr)`.
pub fn embed_tangent(u: (f64, f64)) -> CoordVecC {
    CoordVecC::new(0.0, 0.0, 2.0 * u.0, u.1)
}

/// Unit-speed geodesic of `g_U`.
///
/// `theta` is measured from `d/dr` towards `(1/r) d/dt` in the orthonormal
/// frame at `p0`, so `theta = 0` is radially outward and `theta = pi` inward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneGeodesic {
    pub p0: HalfPlanePoint,
    pub theta: f64,
    /// True when the underlying Euclidean line passes through the origin.
    pub radial: bool,
}

pub fn halfplane_geodesic(p0: HalfPlanePoint, theta: f64) -> Result<HalfPlaneGeodesic> {
    let p0 = HalfPlanePoint::checked(p0.t, p0.r)?;
    if !theta.is_finite() {
        return Err(GeomError::NonFinite("theta"));
    }
    Ok(HalfPlaneGeodesic { p0, theta, radial: theta.sin().abs() < CASE_EPS })
}

impl HalfPlaneGeodesic {
    /// `(s_min, s_max)`; finite at one end exactly for radial rays.
    pub fn domain(&self) -> (f64, f64) {
        if !self.radial {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else if self.theta.cos() > 0.0 {
            (-self.p0.r, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, self.p0.r)
        }
    }

    pub fn eval(&self, s: f64) -> Result<HalfPlanePoint> {
        let (lo, hi) = self.domain();
        if !(s > lo && s < hi) {
            return Err(GeomError::OutsideDomain { s, s_min: lo, s_max: hi });
        }
        let r0 = self.p0.r;
        let (sn, cs) = self.theta.sin_cos();
        if self.radial {
            let r = r0 + s * cs.signum();
            return Ok(HalfPlanePoint::new(self.p0.t, r));
        }
        // Euclidean position relative to the ray at angle t0: (r0 + s cos, s sin)
        let (a, b) = (r0 + s * cs, s * sn);
        Ok(HalfPlanePoint::new(self.p0.t + b.atan2(a), a.hypot(b)))
    }

    /// `(dt/ds, dr/ds)`.
    pub fn velocity(&self, s: f64) -> Result<(f64, f64)> {
        let p = self.eval(s)?;
        let (sn, cs) = self.theta.sin_cos();
        if self.radial {
            return Ok((0.0, cs.signum()));
        }
        // r r' = P.D and r^2 t' = P x D = r0 sin(theta) for P = P0 + sD
        Ok((self.p0.r * sn / (p.r * p.r), (self.p0.r * cs + s) / p.r))
    }
}

/// Frame components of the embedded velocity: `(0, 0, r t', r')`.
fn embedded_frame_velocity(geo: &HalfPlaneGeodesic, s: f64) -> Result<(ConePoint, FrameVecC)> {
    let p = geo.eval(s)?;
    let q = embed(p);
    let v = frame_decompose_cone(q, embed_tangent(geo.velocity(s)?))?;
    Ok((q, v))
}

/// Checks that the image of a half-plane geodesic solves the cone geodesic
/// system, by central differences of step [`FD_STEP`] at 201 points of
/// `[-s_span, s_span]` (clipped to the domain), and that the pullback of the
/// cone metric is `g_U` along the curve.
pub fn totally_geodesic_check(p0: HalfPlanePoint, theta: f64, s_span: f64) -> Result<ValidationReport> {
    let geo = halfplane_geodesic(p0, theta)?;
    let (lo, hi) = geo.domain();
    let span = s_span.abs();
    let margin = 1e-3 * p0.r;
    let (a, b) = (lo.max(-span).max(lo + margin), hi.min(span).min(hi - margin));
    const SAMPLES: usize = 201;

    let mut coord = SupNorm::default();
    let mut ode = SupNorm::default();
    let mut speed = SupNorm::default();
    let mut plane = SupNorm::default();
    let mut pullback = SupNorm::default();
    let mut closed = SupNorm::default();
    let (q0, v0) = embedded_frame_velocity(&geo, 0.0)?;
    let cone_geo = cone_geodesic_from_ic(q0, v0.normalized()?)?;

    for i in 0..SAMPLES {
        let s = a + (b - a) * i as f64 / (SAMPLES - 1) as f64;
        let sp = (s + FD_STEP).min(hi - 0.5 * margin);
        let sm = (s - FD_STEP).max(lo + 0.5 * margin);
        let (q, v) = embedded_frame_velocity(&geo, s)?;
        let (qp, vp) = embedded_frame_velocity(&geo, sp)?;
        let (qm, vm) = embedded_frame_velocity(&geo, sm)?;
        let w = sp - sm;

        // the analytic velocity is the derivative of the image
        let want = embed_tangent(geo.velocity(s)?);
        coord.add_all([
            (qp.x - qm.x) / w - want.dx,
            (qp.y - qm.y) / w - want.dy,
            (qp.t - qm.t) / w - want.dt,
            (qp.r - qm.r) / w - want.dr,
        ]);

        // frame-velocity derivative against the cone geodesic equations
        let rhs = cone_rhs(&ConeState::new(q, v))?;
        ode.add_all([
            (vp.f - vm.f) / w - rhs.f,
            (vp.g - vm.g) / w - rhs.g,
            (vp.h - vm.h) / w - rhs.h,
            (vp.k - vm.k) / w - rhs.k,
        ]);
        speed.add(v.norm_sq() - 1.0);
        plane.add_all([q.x, q.y]);
        closed.add(cone_geo.eval(s)?.max_abs_diff(&q));

        let p = geo.eval(s)?;
        let u = geo.velocity(s)?;
        for (x, y) in [(u, u), (u, (1.0, 0.0)), ((1.0, 0.0), (0.0, 1.0)), ((0.0, 1.0), (0.0, 1.0))] {
            pullback.add(halfplane_metric(p, x, y) - cone_metric(q, embed_tangent(x), embed_tangent(y))?);
        }
    }

    let mut rep = ValidationReport::new("totally_geodesic");
    rep.samples("curve_points", SAMPLES as u64);
    rep.check("image_velocity", coord.get(), ODE_RESIDUAL_TOL);
    rep.check("ode_residual", ode.get(), ODE_RESIDUAL_TOL);
    rep.check("unit_speed", speed.get(), 1e-12);
    rep.check("stays_in_image", plane.get(), 0.0);
    rep.check("matches_cone_closed_form", closed.get(), CLOSED_FORM_TOL);
    rep.check("pullback_along_curve", pullback.get(), PULLBACK_TOL);
    rep.note(format!(
        "half-plane geodesic from (t, r) = ({}, {}) at angle {} checked over s in [{a}, {b}]{}",
        p0.t,
        p0.r,
        theta,
        if geo.radial { "; radial ray with a finite end at r = 0" } else { "" }
    ));
    Ok(rep)
}

/// `g_U(u, v) = (iota^* g_r)(u, v)` at random points and random tangent pairs.
pub fn pullback_identity_check(n_samples: usize, seed: u64) -> ValidationReport {
    let mut rng = rng(seed);
    let mut sup = SupNorm::default();
    let mut errors = 0u64;
    for _ in 0..n_samples {
        let p = HalfPlanePoint::new(rng.gen_range(-5.0..=5.0), rng.gen_range(0.1..=10.0));
        let u = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let v = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        match cone_metric(embed(p), embed_tangent(u), embed_tangent(v)) {
            Ok(g) => sup.add(halfplane_metric(p, u, v) - g),
            Err(_) => errors += 1,
        }
    }
    let mut rep = ValidationReport::new("pullback").with_seed(seed);
    rep.samples("tangent_pairs", n_samples as u64);
    rep.check("pullback_identity", sup.get(), PULLBACK_TOL);
    rep.flag("no_domain_errors", errors == 0);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn vertical_line_example() {
        let geo = halfplane_geodesic(HalfPlanePoint::new(0.0, 1.0), FRAC_PI_2).unwrap();
        assert!(!geo.radial);
        for &s in &[-3.0, -0.4, 0.0, 1.0, 2.5] {
            let p = geo.eval(s).unwrap();
            assert!((p.t - f64::atan(s)).abs() < 1e-15);
            assert!((p.r - (1.0 + s * s).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn radial_inward_has_finite_end() {
        let geo = halfplane_geodesic(HalfPlanePoint::new(0.0, 1.0), PI).unwrap();
        assert!(geo.radial);
        assert_eq!(geo.domain(), (f64::NEG_INFINITY, 1.0));
        assert_eq!(geo.eval(0.25).unwrap(), HalfPlanePoint::new(0.0, 0.75));
        assert!(geo.eval(1.0).is_err());
    }

    #[test]
    fn starts_at_base() {
        let p0 = HalfPlanePoint::new(0.4, 2.0);
        for theta in [0.0, 1.0, 2.0, 4.0] {
            assert_eq!(halfplane_geodesic(p0, theta).unwrap().eval(0.0).unwrap(), p0);
        }
    }

    #[test]
    fn images_are_cone_geodesics() {
        let rep = totally_geodesic_check(HalfPlanePoint::new(0.0, 1.0), FRAC_PI_2, 3.0).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let rep = totally_geodesic_check(HalfPlanePoint::new(0.3, 1.0), PI, 3.0).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.get("ode_residual").unwrap().residual.unwrap() <= 1e-12);
    }

    #[test]
    fn pullback_holds() {
        assert!(pullback_identity_check(100, 5).passed());
    }
}
