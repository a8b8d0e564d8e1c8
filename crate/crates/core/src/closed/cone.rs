use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{expm1_i_over, x_minus_sin_over_cube};
use crate::cone::{ConePoint, FrameVecC};
use crate::error::{GeomError, Result};
use crate::{CASE_EPS, R_MIN};

/// Which closed form a cone geodesic follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeCase {
    /// `x, y, t` fixed and `r = r0 +- s`. `outward` is the sign of `k`.
    RadialLine { outward: bool },
    /// `F = 0`, `c3 != 0`: `z` fixed while `t` sweeps a bounded angle.
    Arc,
    /// `F != 0`, `c3 != 0`.
    General,
    /// `F != 0`, `c3 = 0`: the horizontal limit of the general case.
    HorizontalLimit,
}

/// A unit-speed cone geodesic in closed form.
///
/// Along the geodesic `r(s)^2 = s^2 + 2 c1 s + r0^2`, `h(s) = c3 / r(s)`,
/// `k(s) = (s + c1) / r(s)` and `f + ig = C e^{i Phi(s)} / r(s)` with
///
/// ```text
/// Phi(s) = -(2 c3 / sqrt(r0^2 - c1^2)) arctan((s + c1) / sqrt(r0^2 - c1^2))
/// ```
///
/// and `|C|^2 = r0^2 - c1^2 - c3^2`. `phi0` stores `Phi(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeGeodesic {
    pub base: ConePoint,
    pub case: ConeCase,
    pub c1: f64,
    pub c3: f64,
    #[serde(rename = "C")]
    pub big_c: Complex64,
    pub phi0: f64,
}

/// Open interval `(s_min, s_max)` of arc lengths on which `r(s) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicDomain {
    pub s_min: f64,
    pub s_max: f64,
}

impl GeodesicDomain {
    pub fn contains(&self, s: f64) -> bool {
        s > self.s_min && s < self.s_max
    }

    pub fn is_complete(&self) -> bool {
        self.s_min == f64::NEG_INFINITY && self.s_max == f64::INFINITY
    }

    /// Clamps `[lo, hi]` into the domain, keeping a margin from each finite end.
    pub fn clamp(&self, lo: f64, hi: f64, margin: f64) -> (f64, f64) {
        (lo.max(self.s_min + margin), hi.min(self.s_max - margin))
    }
}

pub fn cone_geodesic_from_ic(q0: ConePoint, v0: FrameVecC) -> Result<ConeGeodesic> {
    q0.validate()?;
    let v0 = v0.check_unit()?;
    let r0 = q0.r;
    let horizontal = v0.horizontal();
    let flat_h = v0.h.abs() < CASE_EPS;
    let flat_f = horizontal.norm() < CASE_EPS;

    if flat_h && flat_f {
        let outward = v0.k > 0.0;
        return Ok(ConeGeodesic {
            base: q0,
            case: ConeCase::RadialLine { outward },
            c1: if outward { r0 } else { -r0 },
            c3: 0.0,
            big_c: Complex64::new(0.0, 0.0),
            phi0: 0.0,
        });
    }

    let c1 = r0 * v0.k;
    let c3 = if flat_h { 0.0 } else { r0 * v0.h };
    let sqrt_c2 = ((r0 - c1) * (r0 + c1)).max(0.0).sqrt();
    if sqrt_c2 == 0.0 {
        // Unit input with a non-negligible transverse part always has r0^2 > c1^2.
        return Err(GeomError::NonUnit { norm_sq: v0.norm_sq(), tol: crate::EPS_UNIT });
    }
    let phi0 = -(2.0 * c3 / sqrt_c2) * (c1 / sqrt_c2).atan();
    let (case, big_c) = match (flat_h, flat_f) {
        (false, true) => (ConeCase::Arc, Complex64::new(0.0, 0.0)),
        (false, false) => (ConeCase::General, horizontal * r0 * Complex64::new(0.0, -phi0).exp()),
        (true, false) => (ConeCase::HorizontalLimit, horizontal * r0),
        (true, true) => unreachable!(),
    };
    Ok(ConeGeodesic { base: q0, case, c1, c3, big_c, phi0 })
}

impl ConeGeodesic {
    pub fn r0(&self) -> f64 {
        self.base.r
    }

    /// `c2 = r0^2 - c1^2`, so that `r(s)^2 = (s + c1)^2 + c2`.
    pub fn c2(&self) -> f64 {
        let r0 = self.r0();
        ((r0 - self.c1) * (r0 + self.c1)).max(0.0)
    }

    pub fn domain(&self) -> GeodesicDomain {
        let r0 = self.r0();
        match self.case {
            ConeCase::RadialLine { outward: true } => GeodesicDomain { s_min: -r0, s_max: f64::INFINITY },
            ConeCase::RadialLine { outward: false } => GeodesicDomain { s_min: f64::NEG_INFINITY, s_max: r0 },
            _ => GeodesicDomain { s_min: f64::NEG_INFINITY, s_max: f64::INFINITY },
        }
    }

    /// `r(s)`, or an error when `s` is outside the domain or `r(s) <= R_MIN`.
    pub fn radius(&self, s: f64) -> Result<f64> {
        let r0 = self.r0();
        let r = match self.case {
            ConeCase::RadialLine { outward } => {
                if outward {
                    r0 + s
                } else {
                    r0 - s
                }
            }
            _ => (s * (s + 2.0 * self.c1) + r0 * r0).max(0.0).sqrt(),
        };
        if r.is_nan() || r <= R_MIN || !s.is_finite() {
            let d = self.domain();
            return Err(GeomError::OutsideDomain { s, s_min: d.s_min, s_max: d.s_max });
        }
        Ok(r)
    }

    /// `Phi(s)`; identically zero for the radial and horizontal cases.
    pub fn phi(&self, s: f64) -> f64 {
        match self.case {
            ConeCase::RadialLine { .. } | ConeCase::HorizontalLimit => 0.0,
            ConeCase::Arc | ConeCase::General => self.phi0 - 2.0 * self.c3 * self.inverse_r2_integral(s),
        }
    }

    /// `int_0^s ds' / r(s')^2 = theta(s) / sqrt(c2)`, where
    /// `theta(s) = arctan((s + c1)/sqrt(c2)) - arctan(c1/sqrt(c2))`
    /// is evaluated as `atan2(s sqrt(c2), r0^2 + c1 s)`. The difference of
    /// arctangents stays inside `(-pi, pi)`, so the two-argument form is
    /// continuous in `s`, including across `r0^2 + c1 s = 0`.
    fn inverse_r2_integral(&self, s: f64) -> f64 {
        let r0 = self.r0();
        let sqrt_c2 = self.c2().sqrt();
        (s * sqrt_c2).atan2(r0 * r0 + self.c1 * s) / sqrt_c2
    }

    pub fn eval(&self, s: f64) -> Result<ConePoint> {
        let r = self.radius(s)?;
        let b = self.base;
        let z0 = b.z();
        let (z, t) = match self.case {
            ConeCase::RadialLine { .. } => (z0, b.t),
            ConeCase::Arc => {
                // t' = 2 c3 / r^2
                let q = self.inverse_r2_integral(s);
                (z0, b.t + 2.0 * self.c3 * q)
            }
            ConeCase::HorizontalLimit => {
                let q = self.inverse_r2_integral(s);
                let z = z0 + self.big_c * q;
                (z, b.t - 2.0 * (z0.conj() * self.big_c).im * q)
            }
            ConeCase::General => {
                // z(s) = z0 + i C (e^{i Phi(s)} - e^{i Phi(0)}) / (2 c3)
                // t(s) = t0 - (1 + |C|^2/(2 c3^2)) dPhi + (|C|^2/(2 c3^2)) sin(dPhi)
                //        - (1/c3) Re(conj(z0) C (e^{i Phi(s)} - e^{i Phi(0)}))
                // with dPhi = Phi(s) - Phi(0) = -2 c3 q. The 1/c3 on the last
                // term is required; without it the curve leaves the geodesic
                // whenever z0 != 0. Below, every 1/c3 is cancelled analytically.
                let q = self.inverse_r2_integral(s);
                let d_phi = -2.0 * self.c3 * q;
                let c_start = self.big_c * Complex64::new(0.0, self.phi0).exp();
                let e1 = expm1_i_over(d_phi);
                let z = z0 - Complex64::i() * c_start * e1 * q;
                let c_sq = self.big_c.norm_sqr();
                let dt = 2.0 * self.c3 * q
                    + 4.0 * c_sq * self.c3 * q * q * q * x_minus_sin_over_cube(d_phi)
                    + 2.0 * q * (z0.conj() * c_start * e1).re;
                (z, b.t + dt)
            }
        };
        Ok(ConePoint::new(z.re, z.im, t, r))
    }

    pub fn velocity(&self, s: f64) -> Result<FrameVecC> {
        let r = self.radius(s)?;
        Ok(match self.case {
            ConeCase::RadialLine { outward } => FrameVecC::new(0.0, 0.0, 0.0, if outward { 1.0 } else { -1.0 }),
            _ => {
                let w = self.big_c * Complex64::new(0.0, self.phi(s)).exp() / r;
                FrameVecC::new(w.re, w.im, self.c3 / r, (s + self.c1) / r)
            }
        })
    }

    pub fn case_name(&self) -> &'static str {
        match self.case {
            ConeCase::RadialLine { outward: true } => "RadialLine(+)",
            ConeCase::RadialLine { outward: false } => "RadialLine(-)",
            ConeCase::Arc => "Arc",
            ConeCase::General => "General",
            ConeCase::HorizontalLimit => "HorizontalLimit",
        }
    }
}

pub fn cone_geodesic_eval(geo: &ConeGeodesic, s: f64) -> Result<ConePoint> {
    geo.eval(s)
}

pub fn cone_geodesic_velocity(geo: &ConeGeodesic, s: f64) -> Result<FrameVecC> {
    geo.velocity(s)
}

pub fn geodesic_domain(geo: &ConeGeodesic) -> GeodesicDomain {
    geo.domain()
}
