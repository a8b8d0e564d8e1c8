//! Seeded validation suites assembled into single reports.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::closed::{cone_geodesic_from_ic, heis_geodesic_from_ic, ConeCase, ConeGeodesic, HeisCase};
use crate::cone::{ConePoint, FrameVecC};
use crate::error::Result;
use crate::heis::HeisPoint;
use crate::numeric::{cone_rhs, heis_rhs, ConeState, HeisState, StepPolicy};

use super::compare::{compare_stats, record_stats, CompareStats, GeodesicIc};
use super::completeness::completeness_suite;
use super::halfplane::{pullback_identity_check, totally_geodesic_check, HalfPlanePoint};
use super::report::{SupNorm, ValidationReport};
use super::sampling::{cone_ic, cone_point, frame_c, heis_ic, rng, ConeKind, HeisKind};
use super::shooting::connect_shooting;
use super::structure::structure_validate;

/// Arc-length half-span for closed-form versus numeric comparisons.
pub const COMPARE_SPAN: f64 = 3.0;
/// Witness radii for the completeness suite.
pub const WITNESS_RADII: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random points for the structure identities.
    pub points: usize,
    /// Random initial conditions (per case), half-plane geodesics and shooting pairs.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 42, points: 1000, samples: 100 }
    }
}

pub fn structures(cfg: SuiteConfig) -> ValidationReport {
    structure_validate(cfg.points, cfg.seed)
}

fn merge_stats(acc: &mut Option<CompareStats>, st: CompareStats) {
    let Some(a) = acc else {
        *acc = Some(st);
        return;
    };
    let mx = |x: f64, y: f64| {
        let mut s = SupNorm::default();
        s.add(x);
        s.add(y);
        s.get()
    };
    a.position = mx(a.position, st.position);
    a.velocity = mx(a.velocity, st.velocity);
    a.speed_drift = mx(a.speed_drift, st.speed_drift);
    a.first_integral_h = mx(a.first_integral_h, st.first_integral_h);
    a.first_integral_k = match (a.first_integral_k, st.first_integral_k) {
        (Some(x), Some(y)) => Some(mx(x, y)),
        (x, y) => x.or(y),
    };
    a.rows += st.rows;
    a.breach = a.breach.or(st.breach);
}

/// Central differences of a closed form against its ODE system on a uniform
/// grid whose stencils stay inside `[lo, hi]`.
fn closed_form_ode_residual<const N: usize>(
    lo: f64,
    hi: f64,
    state: impl Fn(f64) -> Result<[f64; N]>,
    rhs: impl Fn(&[f64; N]) -> Result<[f64; N]>,
) -> Result<f64> {
    const H: f64 = 1e-5;
    let mut sup = SupNorm::default();
    for i in 0..=20 {
        let s = (lo + H) + (hi - lo - 2.0 * H) * i as f64 / 20.0;
        let (a, b) = (s - H, s + H);
        let (ya, yb) = (state(a)?, state(b)?);
        let d = rhs(&state(s)?)?;
        for k in 0..N {
            sup.add((yb[k] - ya[k]) / (b - a) - d[k]);
        }
    }
    Ok(sup.get())
}

fn heis_state(geo: &crate::closed::HeisGeodesic, s: f64) -> [f64; 6] {
    HeisState::new(geo.eval(s), geo.velocity(s)).to_array()
}

fn cone_state(geo: &ConeGeodesic, s: f64) -> Result<[f64; 8]> {
    Ok(ConeState::new(geo.eval(s)?, geo.velocity(s)?).to_array())
}

/// Closed forms against RK4 for every case, plus the closed-form invariants.
pub fn geodesics(cfg: SuiteConfig) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("geodesics").with_seed(cfg.seed);
    let mut rng = rng(cfg.seed);
    let policy = StepPolicy::default();
    let n = cfg.samples.max(1);

    for kind in HeisKind::ALL {
        let mut agg = None;
        let mut at_zero = SupNorm::default();
        let mut unit = SupNorm::default();
        let mut ode = SupNorm::default();
        let mut circle = SupNorm::default();
        for _ in 0..n {
            let (p, v) = heis_ic(&mut rng, kind);
            let geo = heis_geodesic_from_ic(p, v)?;
            let p0 = geo.eval(0.0);
            at_zero.add_all([p0.x - p.x, p0.y - p.y, p0.t - p.t]);
            at_zero.add((geo.velocity(0.0) - v).max_abs());
            for i in 0..=12 {
                let s = -COMPARE_SPAN + 0.5 * i as f64;
                unit.add(geo.velocity(s).norm_sq().sqrt() - 1.0);
            }
            ode.add(closed_form_ode_residual(
                -COMPARE_SPAN,
                COMPARE_SPAN,
                |s| Ok(heis_state(&geo, s)),
                |y| Ok(heis_rhs(&HeisState::from_array(*y)).to_array()),
            )?);
            if let Some((centre, radius)) = geo.helix_circle() {
                for i in 0..=12 {
                    let e = geo.eval(-COMPARE_SPAN + 0.5 * i as f64);
                    circle.add((Complex64::new(e.x, e.y) - centre).norm() - radius);
                }
            }
            merge_stats(&mut agg, compare_stats(GeodesicIc::Heisenberg { base: p, dir: v }, COMPARE_SPAN, policy)?);
        }
        let name = kind.name();
        if let Some(st) = agg {
            record_stats(&mut rep, &format!("heis.{name}.rk4."), &st);
            rep.samples(&format!("heis.{name}.trace_rows"), st.rows as u64);
        }
        rep.samples(&format!("heis.{name}.initial_conditions"), n as u64);
        rep.check(format!("heis.{name}.initial_data"), at_zero.get(), 1e-12);
        rep.check(format!("heis.{name}.unit_speed"), unit.get(), 1e-12);
        rep.check(format!("heis.{name}.closed_form_ode"), ode.get(), 1e-6);
        if kind == HeisKind::Helix {
            rep.check("heis.Helix.projects_to_circle", circle.get(), 1e-10);
        }
    }

    for kind in ConeKind::ALL {
        let mut agg = None;
        let mut at_zero = SupNorm::default();
        let mut unit = SupNorm::default();
        let mut integrals = SupNorm::default();
        let mut ode = SupNorm::default();
        for _ in 0..n {
            let (q, v) = cone_ic(&mut rng, kind);
            let geo = cone_geodesic_from_ic(q, v)?;
            at_zero.add(geo.eval(0.0)?.max_abs_diff(&q));
            at_zero.add((geo.velocity(0.0)? - v).max_abs());
            let (lo, hi) = geo.domain().clamp(-COMPARE_SPAN, COMPARE_SPAN, 1e-2);
            for i in 0..=12 {
                let s = lo + (hi - lo) * i as f64 / 12.0;
                let (r, w) = (geo.radius(s)?, geo.velocity(s)?);
                unit.add(w.norm_sq().sqrt() - 1.0);
                integrals.add(w.h * r - geo.c3);
                integrals.add(w.k * r - s - geo.c1);
            }
            ode.add(closed_form_ode_residual(
                lo,
                hi,
                |s| cone_state(&geo, s),
                |y| Ok(cone_rhs(&ConeState::from_array(*y))?.to_array()),
            )?);
            merge_stats(&mut agg, compare_stats(GeodesicIc::Cone { base: q, dir: v }, COMPARE_SPAN, policy)?);
        }
        let name = kind.name();
        if let Some(st) = agg {
            record_stats(&mut rep, &format!("cone.{name}.rk4."), &st);
            rep.samples(&format!("cone.{name}.trace_rows"), st.rows as u64);
        }
        rep.samples(&format!("cone.{name}.initial_conditions"), n as u64);
        rep.check(format!("cone.{name}.initial_data"), at_zero.get(), 1e-12);
        rep.check(format!("cone.{name}.unit_speed"), unit.get(), 1e-12);
        rep.check(format!("cone.{name}.conserved_quantities"), integrals.get(), 1e-10);
        rep.check(format!("cone.{name}.closed_form_ode"), ode.get(), 1e-6);
    }

    worked_examples(&mut rep)?;
    Ok(rep)
}

/// Fixed examples with independently known values.
fn worked_examples(rep: &mut ValidationReport) -> Result<()> {
    let o = ConePoint::new(0.0, 0.0, 0.0, 1.0);
    let r3 = 3f64.sqrt() / 2.0;

    // general case at s = 1: z = i (sqrt3/2)(e^{-i pi/4} - 1), t = 5 pi/8 - 3 sqrt2/4, r = sqrt2
    let general = cone_geodesic_from_ic(o, FrameVecC::new(r3, 0.0, 0.5, 0.0))?;
    let z = Complex64::i() * r3 * (Complex64::from_polar(1.0, -PI / 4.0) - 1.0);
    let want = ConePoint::new(z.re, z.im, 5.0 * PI / 8.0 - 3.0 * 2f64.sqrt() / 4.0, 2f64.sqrt());
    rep.check("example.general_s1", general.eval(1.0)?.max_abs_diff(&want), 1e-5);

    let arc = cone_geodesic_from_ic(o, FrameVecC::new(0.0, 0.0, 1.0, 0.0))?;
    rep.check("example.arc_s1", arc.eval(1.0)?.max_abs_diff(&ConePoint::new(0.0, 0.0, FRAC_PI_2, 2f64.sqrt())), 1e-14);
    // total sweep of t is pi in each direction
    let far = (arc.eval(1e6)?.t - PI).abs().max((arc.eval(-1e6)?.t + PI).abs());
    rep.check("example.arc_t_range", far, 1e-5);

    let helix = heis_geodesic_from_ic(HeisPoint::ORIGIN, crate::heis::FrameVecH::new(r3, 0.0, 0.5))?;
    let h = helix.eval(PI);
    let d = (h.x).abs().max((h.y + 3f64.sqrt()).abs()).max((h.t - 2.5 * PI).abs());
    rep.check("example.helix_s_pi", d, 1e-13);

    // the general case tends to the horizontal limit as c3 -> 0
    let q0 = ConePoint::new(0.3, -0.4, 0.2, 1.2);
    let k: f64 = 0.35;
    let m = (1.0 - k * k).sqrt();
    let (a, b) = (0.8 * m, 0.6 * m);
    let eps = 1e-9 / q0.r;
    let flat = cone_geodesic_from_ic(q0, FrameVecC::new(a, b, 0.0, k))?;
    let tilted = cone_geodesic_from_ic(q0, FrameVecC::new(a, b, eps, k).normalized()?)?;
    let mut lim = SupNorm::default();
    for i in 0..=40 {
        let s = -1.0 + i as f64 / 20.0;
        lim.add(flat.eval(s)?.max_abs_diff(&tilted.eval(s)?));
    }
    rep.flag(
        "example.horizontal_limit_cases",
        flat.case == ConeCase::HorizontalLimit && tilted.case == ConeCase::General,
    );
    rep.check("example.horizontal_limit_consistency", lim.get(), 1e-6);

    let line = heis_geodesic_from_ic(HeisPoint::ORIGIN, crate::heis::FrameVecH::new(1.0, 0.0, 0.0))?;
    rep.flag("example.line_case", matches!(line.case, HeisCase::Line { .. }));
    Ok(())
}

/// A random half-plane geodesic whose Euclidean line stays at distance at
/// least `0.2 r0` from the apex, or (every tenth sample) a radial ray.
fn halfplane_sample(rng: &mut impl Rng, i: usize) -> (HalfPlanePoint, f64) {
    let p0 = HalfPlanePoint::new(rng.gen_range(-PI..=PI), rng.gen_range(0.5..=3.0));
    let theta = if i % 10 == 9 {
        if rng.gen_bool(0.5) {
            0.0
        } else {
            PI
        }
    } else {
        let th: f64 = rng.gen_range(0.0..TAU);
        if th.sin().abs() < 0.2 {
            th + FRAC_PI_2
        } else {
            th
        }
    };
    (p0, theta)
}

/// Witnesses, the totally geodesic half-plane and the pullback identity.
pub fn completeness(cfg: SuiteConfig) -> Result<ValidationReport> {
    let mut rep = completeness_suite(&WITNESS_RADII)?;
    rep.provenance.seed = Some(cfg.seed);
    let mut rng = rng(cfg.seed);
    let n = (cfg.samples / 2).max(1);

    let mut agg = ValidationReport::new("halfplane");
    for i in 0..n {
        let (p0, theta) = halfplane_sample(&mut rng, i);
        agg.merge_worst(&totally_geodesic_check(p0, theta, COMPARE_SPAN)?);
    }
    agg.samples("geodesics", n as u64);
    rep.absorb("halfplane", agg);
    rep.absorb("halfplane", pullback_identity_check(cfg.samples.max(1), cfg.seed ^ 0x5eed));
    Ok(rep)
}

/// Round trips through the shooting connector from forward-evaluated targets.
pub fn shooting(cfg: SuiteConfig) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("shooting").with_seed(cfg.seed);
    let mut rng = rng(cfg.seed);
    let n = (cfg.samples / 2).max(1);
    let mut endpoint = SupNorm::default();
    let mut recovery = SupNorm::default();
    let mut failures = 0u64;
    for _ in 0..n {
        let p = cone_point(&mut rng, 1.0, 0.5, 2.0);
        let v = loop {
            if let Ok(v) = frame_c(&mut rng).normalized() {
                break v;
            }
        };
        let s_star = rng.gen_range(0.2..=1.0);
        let q = cone_geodesic_from_ic(p, v)?.eval(s_star)?;
        match connect_shooting(p, q, 50, 1e-12) {
            Ok(sol) => {
                endpoint.add(sol.geodesic.eval(sol.s_star)?.max_abs_diff(&q));
                recovery.add((sol.direction - v).max_abs());
                recovery.add(sol.s_star - s_star);
            }
            Err(_) => failures += 1,
        }
    }
    rep.samples("pairs", n as u64);
    rep.check("endpoint_error", endpoint.get(), 1e-8);
    rep.check("ic_recovery", recovery.get(), 1e-6);
    rep.check("failures", failures as f64, 0.0);
    Ok(rep)
}

/// Every suite, in a fixed order.
pub fn all(cfg: SuiteConfig) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("all").with_seed(cfg.seed);
    rep.absorb("structures", structures(cfg));
    rep.absorb("geodesics", geodesics(cfg)?);
    rep.absorb("completeness", completeness(cfg)?);
    rep.absorb("shooting", shooting(cfg)?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig { seed: 3, points: 20, samples: 4 };
        for rep in [geodesics(cfg).unwrap(), completeness(cfg).unwrap(), shooting(cfg).unwrap()] {
            assert!(rep.passed(), "{}: {:?}", rep.suite, rep.failures().collect::<Vec<_>>());
        }
    }
}
