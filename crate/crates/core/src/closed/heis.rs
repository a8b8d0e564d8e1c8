use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{expm1_i_over, x_minus_sin_over_cube};
use crate::error::Result;
use crate::heis::{FrameVecH, HeisPoint};
use crate::CASE_EPS;

/// Which closed form a Heisenberg geodesic follows.
///
/// With `F = f + i g` the geodesic system is `F' = -2i c F`, `h = c` constant,
/// so `F(s) = kappa e^{-2ics}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum HeisCase {
    /// Horizontal straight line, `h = 0`, direction `a + ib`.
    Line { a: f64, b: f64 },
    /// Vertical line through the base point, `|c| = 1`.
    Vertical { c: f64 },
    /// Helix over a Euclidean circle, `0 < |c| < 1`, `|kappa|^2 + c^2 = 1`.
    Helix { c: f64, kappa: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisGeodesic {
    pub base: HeisPoint,
    #[serde(flatten)]
    pub case: HeisCase,
}

pub fn heis_geodesic_from_ic(p0: HeisPoint, v0: FrameVecH) -> Result<HeisGeodesic> {
    let p0 = HeisPoint::checked(p0.x, p0.y, p0.t)?;
    let v0 = v0.check_unit()?;
    let kappa = Complex64::new(v0.f, v0.g);
    let case = if v0.h.abs() < CASE_EPS {
        HeisCase::Line { a: v0.f, b: v0.g }
    } else if kappa.norm() < CASE_EPS {
        HeisCase::Vertical { c: v0.h }
    } else {
        HeisCase::Helix { c: v0.h, kappa }
    };
    Ok(HeisGeodesic { base: p0, case })
}

impl HeisGeodesic {
    /// Position at arc length `s`; defined for every real `s`.
    pub fn eval(&self, s: f64) -> HeisPoint {
        let HeisPoint { x: x0, y: y0, t: t0 } = self.base;
        match self.case {
            HeisCase::Line { a, b } => HeisPoint::new(a * s + x0, b * s + y0, 2.0 * (a * y0 - b * x0) * s + t0),
            HeisCase::Vertical { c } => HeisPoint::new(x0, y0, 2.0 * c * s + t0),
            HeisCase::Helix { c, kappa } => {
                // z - z0 = i kappa (e^{-2ics} - 1) / (2c)
                // t - t0 = ((1 + c^2) s - (1 - c^2) sin(2cs) / (2c) - Re(conj(z0) kappa (e^{-2ics} - 1))) / c
                // rewritten with u = -2cs so that nothing divides by c.
                let z0 = Complex64::new(x0, y0);
                let u = -2.0 * c * s;
                let e1 = expm1_i_over(u);
                let dz = -Complex64::i() * kappa * e1 * s;
                let dt = 2.0 * c * s
                    + (1.0 - c * c) * 4.0 * c * s * s * s * x_minus_sin_over_cube(u)
                    + 2.0 * s * (z0.conj() * kappa * e1).re;
                HeisPoint::new(x0 + dz.re, y0 + dz.im, t0 + dt)
            }
        }
    }

    /// Frame velocity `(f, g, h)` at arc length `s`.
    pub fn velocity(&self, s: f64) -> FrameVecH {
        match self.case {
            HeisCase::Line { a, b } => FrameVecH::new(a, b, 0.0),
            HeisCase::Vertical { c } => FrameVecH::new(0.0, 0.0, c),
            HeisCase::Helix { c, kappa } => {
                let w = kappa * Complex64::new(0.0, -2.0 * c * s).exp();
                FrameVecH::new(w.re, w.im, c)
            }
        }
    }

    /// Centre and radius of the Euclidean circle traced by the helix projection.
    pub fn helix_circle(&self) -> Option<(Complex64, f64)> {
        match self.case {
            HeisCase::Helix { c, kappa } => {
                let z0 = Complex64::new(self.base.x, self.base.y);
                let centre = z0 - Complex64::i() * kappa / (2.0 * c);
                Some((centre, kappa.norm() / (2.0 * c.abs())))
            }
            _ => None,
        }
    }

    pub fn case_name(&self) -> &'static str {
        match self.case {
            HeisCase::Line { .. } => "Line",
            HeisCase::Vertical { .. } => "Vertical",
            HeisCase::Helix { .. } => "Helix",
        }
    }
}

pub fn heis_geodesic_eval(geo: &HeisGeodesic, s: f64) -> HeisPoint {
    geo.eval(s)
}

pub fn heis_geodesic_velocity(geo: &HeisGeodesic, s: f64) -> FrameVecH {
    geo.velocity(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt_close(a: HeisPoint, b: HeisPoint, tol: f64) {
        let d = (a.x - b.x).abs().max((a.y - b.y).abs()).max((a.t - b.t).abs());
        assert!(d <= tol, "{a:?} vs {b:?} (diff {d:e})");
    }

    #[test]
    fn classification() {
        let o = HeisPoint::ORIGIN;
        let g = heis_geodesic_from_ic(o, FrameVecH::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(g.case, HeisCase::Line { a: 1.0, b: 0.0 });
        let g = heis_geodesic_from_ic(o, FrameVecH::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(g.case, HeisCase::Vertical { c: 1.0 });
        let r3 = 3f64.sqrt() / 2.0;
        let g = heis_geodesic_from_ic(o, FrameVecH::new(r3, 0.0, 0.5)).unwrap();
        assert_eq!(g.case, HeisCase::Helix { c: 0.5, kappa: Complex64::new(r3, 0.0) });
        assert!(heis_geodesic_from_ic(o, FrameVecH::new(1.0, 0.1, 0.0)).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let line = HeisGeodesic { base: HeisPoint::ORIGIN, case: HeisCase::Line { a: 1.0, b: 0.0 } };
        assert_eq!(line.eval(2.0), HeisPoint::new(2.0, 0.0, 0.0));
        let vert = HeisGeodesic { base: HeisPoint::new(1.0, 2.0, 3.0), case: HeisCase::Vertical { c: 1.0 } };
        assert_eq!(vert.eval(0.5), HeisPoint::new(1.0, 2.0, 4.0));
        let r3 = 3f64.sqrt() / 2.0;
        let helix =
            HeisGeodesic { base: HeisPoint::ORIGIN, case: HeisCase::Helix { c: 0.5, kappa: Complex64::new(r3, 0.0) } };
        pt_close(helix.eval(PI), HeisPoint::new(0.0, -3f64.sqrt(), 2.5 * PI), 1e-14);
        assert_eq!(helix.eval(0.0), HeisPoint::ORIGIN);
    }

    #[test]
    fn velocity_examples() {
        let line = HeisGeodesic { base: HeisPoint::ORIGIN, case: HeisCase::Line { a: 1.0, b: 0.0 } };
        assert_eq!(line.velocity(7.0), FrameVecH::new(1.0, 0.0, 0.0));
        let r3 = 3f64.sqrt() / 2.0;
        let helix =
            HeisGeodesic { base: HeisPoint::ORIGIN, case: HeisCase::Helix { c: 0.5, kappa: Complex64::new(r3, 0.0) } };
        assert_eq!(helix.velocity(0.0), FrameVecH::new(r3, 0.0, 0.5));
        let v = helix.velocity(PI);
        assert!((v - FrameVecH::new(-r3, 0.0, 0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn matches_unsimplified_formula_off_origin() {
        // Direct transcription of the helix formulas with the 1/c factors left in place.
        let c: f64 = -0.35;
        let kappa = Complex64::from_polar((1.0 - c * c).sqrt(), 1.1);
        let base = HeisPoint::new(0.7, -1.3, 0.4);
        let z0 = Complex64::new(base.x, base.y);
        let geo = HeisGeodesic { base, case: HeisCase::Helix { c, kappa } };
        for &s in &[-2.5, -0.3, 0.8, 3.0] {
            let e = Complex64::new(0.0, -2.0 * c * s).exp();
            let z = Complex64::i() * kappa * (e - 1.0) / (2.0 * c) + z0;
            let t = ((1.0 + c * c) * s
                - (1.0 - c * c) * (2.0 * c * s).sin() / (2.0 * c)
                - (z0.conj() * kappa * (e - 1.0)).re)
                / c
                + base.t;
            pt_close(geo.eval(s), HeisPoint::new(z.re, z.im, t), 1e-13);
        }
    }

    #[test]
    fn tiny_c_tends_to_line() {
        let base = HeisPoint::new(0.2, 0.9, -1.0);
        let (a, b) = (0.6, -0.8);
        let line = HeisGeodesic { base, case: HeisCase::Line { a, b } };
        let helix = HeisGeodesic { base, case: HeisCase::Helix { c: 1e-12, kappa: Complex64::new(a, b) } };
        for &s in &[-3.0, 0.5, 3.0] {
            pt_close(helix.eval(s), line.eval(s), 1e-10);
        }
    }

    #[test]
    fn helix_circle_centre() {
        let r3 = 3f64.sqrt() / 2.0;
        let helix =
            HeisGeodesic { base: HeisPoint::ORIGIN, case: HeisCase::Helix { c: 0.5, kappa: Complex64::new(r3, 0.0) } };
        let (centre, radius) = helix.helix_circle().unwrap();
        assert!((centre - Complex64::new(0.0, -r3)).norm() < 1e-15);
        assert!((radius - r3).abs() < 1e-15);
    }
}
