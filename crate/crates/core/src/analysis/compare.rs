//! Closed-form geodesics against the integrated ODE systems.

use crate::closed::{cone_geodesic_from_ic, heis_geodesic_from_ic};
use crate::cone::{ConePoint, FrameVecC};
use crate::error::Result;
use crate::heis::{FrameVecH, HeisPoint};
use crate::numeric::{integrate_cone, integrate_heis, Breach, ConeState, HeisState, StepPolicy};

use super::report::{SupNorm, ValidationReport};

/// Distance kept from a finite end of the geodesic domain when clamping the span.
pub const DOMAIN_MARGIN: f64 = 1e-6;

pub const POSITION_TOL: f64 = 1e-6;
pub const VELOCITY_TOL: f64 = 1e-6;
pub const SPEED_DRIFT_TOL: f64 = 1e-9;
pub const FIRST_INTEGRAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicIc {
    Heisenberg { base: HeisPoint, dir: FrameVecH },
    Cone { base: ConePoint, dir: FrameVecC },
}

/// Sup-norm discrepancies between a closed form and its integrated trace.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareStats {
    pub case: &'static str,
    /// Span actually compared, after clamping into the geodesic domain.
    pub s_lo: f64,
    pub s_hi: f64,
    pub position: f64,
    pub velocity: f64,
    /// `max | |v| - 1 |` over the trace rows.
    pub speed_drift: f64,
    /// Heisenberg: `|h - h0|`. Cone: `|h r - c3|`.
    pub first_integral_h: f64,
    /// Cone only: `|k r - s - c1|`.
    pub first_integral_k: Option<f64>,
    pub rows: usize,
    pub breach: Option<Breach>,
}

impl CompareStats {
    fn merge_row(&mut self, pos: impl IntoIterator<Item = f64>, vel: impl IntoIterator<Item = f64>, speed_sq: f64) {
        self.position = pos.into_iter().fold(self.position, sup);
        self.velocity = vel.into_iter().fold(self.velocity, sup);
        self.speed_drift = sup(self.speed_drift, speed_sq.sqrt() - 1.0);
        self.rows += 1;
    }
}

/// `max(acc, |v|)`, sticky on NaN.
fn sup(acc: f64, v: f64) -> f64 {
    let mut s = SupNorm::default();
    s.add(acc);
    s.add(v);
    s.get()
}

/// Integrates both directions from `s = 0` over `|s| <= s_span`, clipped to the
/// geodesic domain, and measures every trace row against the closed form.
pub fn compare_stats(ic: GeodesicIc, s_span: f64, policy: StepPolicy) -> Result<CompareStats> {
    let span = s_span.abs();
    match ic {
        GeodesicIc::Heisenberg { base, dir } => {
            let geo = heis_geodesic_from_ic(base, dir)?;
            let mut st = CompareStats {
                case: geo.case_name(),
                s_lo: -span,
                s_hi: span,
                position: 0.0,
                velocity: 0.0,
                speed_drift: 0.0,
                first_integral_h: 0.0,
                first_integral_k: None,
                rows: 0,
                breach: None,
            };
            let h0 = dir.h;
            for end in [span, -span] {
                if end == 0.0 {
                    continue;
                }
                let trace = integrate_heis(HeisState::new(base, dir), end, policy)?;
                for row in &trace.rows {
                    let num = HeisState::from_array(row.y);
                    let p = geo.eval(row.s);
                    let v = geo.velocity(row.s);
                    st.merge_row(
                        [num.x - p.x, num.y - p.y, num.t - p.t],
                        [num.f - v.f, num.g - v.g, num.h - v.h],
                        num.speed_sq(),
                    );
                    st.first_integral_h = sup(st.first_integral_h, num.h - h0);
                }
            }
            Ok(st)
        }
        GeodesicIc::Cone { base, dir } => {
            let geo = cone_geodesic_from_ic(base, dir)?;
            let (s_lo, s_hi) = geo.domain().clamp(-span, span, DOMAIN_MARGIN);
            let mut st = CompareStats {
                case: geo.case_name(),
                s_lo,
                s_hi,
                position: 0.0,
                velocity: 0.0,
                speed_drift: 0.0,
                first_integral_h: 0.0,
                first_integral_k: Some(0.0),
                rows: 0,
                breach: None,
            };
            let (c1, c3) = (geo.c1, geo.c3);
            for end in [s_hi, s_lo] {
                if end == 0.0 {
                    continue;
                }
                let trace = integrate_cone(ConeState::new(base, dir), end, policy)?;
                if trace.breach.is_some() {
                    st.breach = trace.breach;
                }
                for row in &trace.rows {
                    let num = ConeState::from_array(row.y);
                    let p = geo.eval(row.s)?;
                    let v = geo.velocity(row.s)?;
                    st.merge_row(
                        [num.x - p.x, num.y - p.y, num.t - p.t, num.r - p.r],
                        [num.f - v.f, num.g - v.g, num.h - v.h, num.k - v.k],
                        num.speed_sq(),
                    );
                    st.first_integral_h = sup(st.first_integral_h, num.h * num.r - c3);
                    let fk = sup(st.first_integral_k.unwrap_or(0.0), num.k * num.r - row.s - c1);
                    st.first_integral_k = Some(fk);
                }
            }
            Ok(st)
        }
    }
}

/// Report form of [`compare_stats`]. A domain breach fails the report rather
/// than raising an error.
pub fn compare_closed_numeric(ic: GeodesicIc, s_span: f64, policy: StepPolicy) -> Result<ValidationReport> {
    let st = compare_stats(ic, s_span, policy)?;
    let mut rep = ValidationReport::new("compare");
    record_stats(&mut rep, "", &st);
    rep.samples("trace_rows", st.rows as u64);
    rep.note(format!("{} geodesic compared over s in [{}, {}]", st.case, st.s_lo, st.s_hi));
    Ok(rep)
}

/// Adds the standard checks for one set of stats, names prefixed by `prefix`.
pub fn record_stats(rep: &mut ValidationReport, prefix: &str, st: &CompareStats) {
    let name = |n: &str| format!("{prefix}{n}");
    rep.check(name("position_sup"), st.position, POSITION_TOL);
    rep.check(name("velocity_sup"), st.velocity, VELOCITY_TOL);
    rep.check(name("speed_drift"), st.speed_drift, SPEED_DRIFT_TOL);
    match st.first_integral_k {
        None => {
            rep.check(name("h_conserved"), st.first_integral_h, FIRST_INTEGRAL_TOL);
        }
        Some(k) => {
            rep.check(name("first_integral_hr"), st.first_integral_h, FIRST_INTEGRAL_TOL);
            rep.check(name("first_integral_kr"), k, FIRST_INTEGRAL_TOL);
        }
    }
    if let Some(b) = st.breach {
        rep.flag(name("no_domain_breach"), false);
        rep.note(format!("domain breach at s={} (r={})", b.s, b.r));
    }
}
