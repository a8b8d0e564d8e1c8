//! Two-point boundary value problem on the cone by shooting on the closed forms.
//!
//! Unknowns are a unit frame vector `v` at `p` and a length `s* > 0` with
//! `eval(p, v, s*) = q`. Newton steps move `v` in an orthonormal basis of the
//! tangent space of the unit sphere at `v` and renormalize, so every iterate
//! is an admissible unit-speed initial condition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed::{cone_geodesic_from_ic, ConeGeodesic};
use crate::cone::{frame_decompose_cone, ConePoint, CoordVecC, FrameVecC};
use crate::error::GeomError;

/// Central-difference step for the Jacobian columns.
const JAC_STEP: f64 = 1e-7;
/// Largest angular move of the direction per Newton step.
const MAX_TURN: f64 = 0.5;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingSolution {
    pub geodesic: ConeGeodesic,
    pub direction: FrameVecC,
    pub s_star: f64,
    /// `max |eval(s*) - q|` over coordinates.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingIterate {
    pub direction: FrameVecC,
    pub s_star: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShootingError {
    #[error("target coincides with the start point; no geodesic with s* > 0 is selected")]
    Degenerate,

    #[error("no start in the direction chart reached the target")]
    Unreachable,

    #[error("no convergence after {iterations} iterations; best endpoint residual {residual:e}")]
    NoConvergence { best: ShootingIterate, residual: f64, iterations: usize },

    #[error(transparent)]
    Geom(#[from] GeomError),
}

fn endpoint(p: ConePoint, v: FrameVecC, s: f64) -> Option<[f64; 4]> {
    let geo = cone_geodesic_from_ic(p, v).ok()?;
    let e = geo.eval(s).ok()?;
    Some(e.to_array())
}

fn residual(p: ConePoint, q: ConePoint, v: FrameVecC, s: f64) -> Option<[f64; 4]> {
    let e = endpoint(p, v, s)?;
    let t = q.to_array();
    Some([e[0] - t[0], e[1] - t[1], e[2] - t[2], e[3] - t[3]])
}

fn norm2(a: &[f64; 4]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(a: &[f64; 4]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Three orthonormal vectors spanning the complement of unit `v`.
fn tangent_basis(v: FrameVecC) -> [[f64; 4]; 3] {
    let va = v.to_array();
    let mut out = Vec::with_capacity(3);
    let mut order = [0usize, 1, 2, 3];
    // least aligned coordinate axes first
    order.sort_by(|&a, &b| va[a].abs().total_cmp(&va[b].abs()));
    for &axis in &order {
        if out.len() == 3 {
            break;
        }
        let mut w = [0.0; 4];
        w[axis] = 1.0;
        for b in std::iter::once(&va).chain(out.iter()) {
            let d: f64 = (0..4).map(|i| w[i] * b[i]).sum();
            for i in 0..4 {
                w[i] -= d * b[i];
            }
        }
        let n = norm2(&w);
        if n > 1e-6 {
            out.push(w.map(|x| x / n));
        }
    }
    [out[0], out[1], out[2]]
}

fn turn(v: FrameVecC, basis: &[[f64; 4]; 3], a: [f64; 3]) -> Option<FrameVecC> {
    let mut w = v.to_array();
    for (b, c) in basis.iter().zip(a) {
        for i in 0..4 {
            w[i] += c * b[i];
        }
    }
    FrameVecC::new(w[0], w[1], w[2], w[3]).normalized().ok()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve4(mut m: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    let scale = m.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-13 * scale {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in row + 1..4 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Start guesses: the chord `q - p` read in the frame at `p` and at the
/// chord midpoint, with the length estimate also shrunk and stretched.
fn initial_guesses(p: ConePoint, q: ConePoint) -> Vec<ShootingIterate> {
    let d = CoordVecC::new(q.x - p.x, q.y - p.y, q.t - p.t, q.r - p.r);
    let mid = ConePoint::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y), 0.5 * (p.t + q.t), 0.5 * (p.r + q.r));
    let mut out = Vec::new();
    for at in [p, mid] {
        let Ok(w) = frame_decompose_cone(at, d) else { continue };
        let len = w.norm_sq().sqrt();
        let Ok(v) = w.normalized() else { continue };
        for f in [1.0, 0.7, 1.4] {
            out.push(ShootingIterate { direction: v, s_star: f * len });
        }
    }
    out
}

/// Damped Newton from one start. Returns the last iterate, its residual and
/// the iterations used.
fn newton(
    p: ConePoint,
    q: ConePoint,
    start: ShootingIterate,
    max_iter: usize,
    tol: f64,
) -> (ShootingIterate, f64, usize) {
    let mut cur = start;
    let Some(mut f) = residual(p, q, cur.direction, cur.s_star) else {
        return (cur, f64::INFINITY, 0);
    };
    for it in 0..max_iter {
        if norm_inf(&f) <= tol {
            return (cur, norm_inf(&f), it);
        }
        let basis = tangent_basis(cur.direction);
        let mut jac = [[0.0; 4]; 4];
        let mut ok = true;
        for col in 0..3 {
            let plus = turn(cur.direction, &basis, std::array::from_fn(|i| if i == col { JAC_STEP } else { 0.0 }));
            let minus = turn(cur.direction, &basis, std::array::from_fn(|i| if i == col { -JAC_STEP } else { 0.0 }));
            match (plus.and_then(|v| endpoint(p, v, cur.s_star)), minus.and_then(|v| endpoint(p, v, cur.s_star))) {
                (Some(a), Some(c)) => (0..4).for_each(|i| jac[i][col] = (a[i] - c[i]) / (2.0 * JAC_STEP)),
                _ => ok = false,
            }
        }
        let hs = JAC_STEP * cur.s_star.max(1.0);
        match (endpoint(p, cur.direction, cur.s_star + hs), endpoint(p, cur.direction, cur.s_star - hs)) {
            (Some(a), Some(c)) => (0..4).for_each(|i| jac[i][3] = (a[i] - c[i]) / (2.0 * hs)),
            _ => ok = false,
        }
        if !ok {
            return (cur, norm_inf(&f), it);
        }
        let Some(mut step) = solve4(jac, f.map(|x| -x)) else {
            return (cur, norm_inf(&f), it);
        };
        let ang = (step[0] * step[0] + step[1] * step[1] + step[2] * step[2]).sqrt();
        if ang > MAX_TURN {
            let k = MAX_TURN / ang;
            step.iter_mut().for_each(|x| *x *= k);
        }

        let f_norm = norm2(&f);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let s_new = cur.s_star + lambda * step[3];
            if s_new > 0.0 {
                if let Some(v_new) = turn(cur.direction, &basis, [lambda * step[0], lambda * step[1], lambda * step[2]])
                {
                    if let Some(f_new) = residual(p, q, v_new, s_new) {
                        if norm2(&f_new) < f_norm {
                            accepted = Some((ShootingIterate { direction: v_new, s_star: s_new }, f_new));
                            break;
                        }
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((next, f_new)) => {
                cur = next;
                f = f_new;
            }
            // no decrease along the Newton direction: stalled at rounding level or a bad basin
            None => return (cur, norm_inf(&f), it + 1),
        }
    }
    (cur, norm_inf(&f), max_iter)
}

/// Finds a unit-speed geodesic from `p` through `q` at some `s* > 0` with
/// endpoint error at most `tol`, trying each start guess with a budget of
/// `max_iter` Newton iterations.
pub fn connect_shooting(
    p: ConePoint,
    q: ConePoint,
    max_iter: usize,
    tol: f64,
) -> Result<ShootingSolution, ShootingError> {
    p.validate()?;
    q.validate()?;
    if p.max_abs_diff(&q) == 0.0 {
        return Err(ShootingError::Degenerate);
    }
    let mut best: Option<(ShootingIterate, f64)> = None;
    let mut total = 0usize;
    for start in initial_guesses(p, q) {
        let (it, res, used) = newton(p, q, start, max_iter, tol);
        total += used;
        if res <= tol {
            let geodesic = cone_geodesic_from_ic(p, it.direction)?;
            return Ok(ShootingSolution {
                geodesic,
                direction: it.direction,
                s_star: it.s_star,
                residual: res,
                iterations: total,
            });
        }
        if res.is_finite() && best.is_none_or(|(_, r)| res < r) {
            best = Some((it, res));
        }
    }
    match best {
        Some((best, residual)) => Err(ShootingError::NoConvergence { best, residual, iterations: total }),
        None => Err(ShootingError::Unreachable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::ConeCase;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn radial_segment() {
        let sol = connect_shooting(ConePoint::new(0.0, 0.0, 0.0, 1.0), ConePoint::new(0.0, 0.0, 0.0, 3.0), 50, 1e-12)
            .unwrap();
        assert!((sol.s_star - 2.0).abs() < 1e-10);
        assert!((sol.direction - FrameVecC::new(0.0, 0.0, 0.0, 1.0)).max_abs() < 1e-10);
        assert_eq!(sol.geodesic.case, ConeCase::RadialLine { outward: true });
    }

    #[test]
    fn arc_example() {
        let q = ConePoint::new(0.0, 0.0, FRAC_PI_2, 2f64.sqrt());
        let sol = connect_shooting(ConePoint::new(0.0, 0.0, 0.0, 1.0), q, 50, 1e-12).unwrap();
        assert!((sol.s_star - 1.0).abs() < 1e-9, "{sol:?}");
        assert!(sol.geodesic.c1.abs() < 1e-9 && (sol.geodesic.c3 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn general_example_round_trip() {
        let p = ConePoint::new(0.0, 0.0, 0.0, 1.0);
        let v = FrameVecC::new(3f64.sqrt() / 2.0, 0.0, 0.5, 0.0);
        let q = cone_geodesic_from_ic(p, v).unwrap().eval(1.0).unwrap();
        let sol = connect_shooting(p, q, 50, 1e-13).unwrap();
        assert!((sol.direction - v).max_abs() <= 1e-8, "{sol:?}");
        assert!((sol.s_star - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn unreachable_tolerance_fails() {
        let q = ConePoint::new(0.3, -0.2, 0.7, 1.6);
        let err = connect_shooting(ConePoint::new(0.0, 0.0, 0.0, 1.0), q, 20, 1e-20).unwrap_err();
        assert!(matches!(err, ShootingError::NoConvergence { .. }), "{err:?}");
    }

    #[test]
    fn degenerate_target() {
        let p = ConePoint::new(0.1, 0.2, 0.3, 1.0);
        assert_eq!(connect_shooting(p, p, 10, 1e-10).unwrap_err(), ShootingError::Degenerate);
    }
}
