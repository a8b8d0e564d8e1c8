//! Classical RK4 and Dormand-Prince 5(4) with a radial floor.
//!
//! Systems that expose a radius stop at `r_min` instead of stepping through it.
//! Before each step the step length is capped where the linear prediction
//! `r + r' h` reaches the floor. Cone geodesics satisfy `r r'' = 1 - k^2 >= 0`,
//! so the true radius never falls below that prediction; a capped step lands
//! on the floor only for radial lines, and that is where a breach is recorded.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::systems::GeodesicSystem;
use super::NumericError;

/// Default fixed step.
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEP: f64 = 1e-1;

const MAX_STEPS: usize = 5_000_000;
/// A landed step closer than this to the floor counts as a breach.
const BREACH_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepPolicy {
    Fixed { step: f64 },
    Adaptive { rel_tol: f64, abs_tol: f64, max_step: f64 },
}

impl StepPolicy {
    pub fn fixed(step: f64) -> Self {
        StepPolicy::Fixed { step }
    }

    pub fn adaptive_default() -> Self {
        StepPolicy::Adaptive { rel_tol: DEFAULT_REL_TOL, abs_tol: DEFAULT_ABS_TOL, max_step: DEFAULT_MAX_STEP }
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        match *self {
            StepPolicy::Fixed { step } if !ok(step) => Err(NumericError::InvalidPolicy("step must be positive")),
            StepPolicy::Adaptive { rel_tol, abs_tol, max_step } if !(ok(rel_tol) && ok(abs_tol) && ok(max_step)) => {
                Err(NumericError::InvalidPolicy("tolerances and max_step must be positive"))
            }
            _ => Ok(()),
        }
    }

    fn integrator_name(&self) -> &'static str {
        match self {
            StepPolicy::Fixed { .. } => "rk4",
            StepPolicy::Adaptive { .. } => "dopri45",
        }
    }
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::Fixed { step: DEFAULT_STEP }
    }
}

/// One sample: arc length, state and the state's derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<const N: usize> {
    pub s: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub integrator: String,
    pub system: String,
    pub policy: StepPolicy,
    pub initial: Vec<f64>,
    pub wall_time_s: f64,
}

/// Where an integration stopped at the radial floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breach {
    pub s: f64,
    pub r: f64,
}

/// A sampled trajectory. Rows start at `s = 0` and are strictly monotone in
/// the direction of integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<const N: usize> {
    pub rows: Vec<TraceRow<N>>,
    pub meta: TraceMeta,
    pub breach: Option<Breach>,
}

impl<const N: usize> Trace<N> {
    pub fn first(&self) -> &TraceRow<N> {
        &self.rows[0]
    }

    pub fn last(&self) -> &TraceRow<N> {
        self.rows.last().expect("trace has at least one row")
    }

    /// `(min s, max s)` covered by the rows.
    pub fn s_range(&self) -> (f64, f64) {
        let (a, b) = (self.first().s, self.last().s);
        (a.min(b), a.max(b))
    }

    pub fn resample(&self, s_values: &[f64]) -> Result<Trace<N>, NumericError> {
        resample(self, s_values)
    }

    /// Cubic Hermite interpolation at a single `s`.
    pub fn sample(&self, s: f64) -> Result<TraceRow<N>, NumericError> {
        let (lo, hi) = self.s_range();
        if !(s >= lo && s <= hi) {
            return Err(NumericError::OutOfRange { s, lo, hi });
        }
        let rows = &self.rows;
        if rows.len() == 1 {
            return Ok(rows[0]);
        }
        let forward = rows[1].s > rows[0].s;
        // first index whose s is past the query in the direction of travel
        let idx = rows.partition_point(|row| if forward { row.s < s } else { row.s > s });
        if idx < rows.len() && rows[idx].s == s {
            return Ok(rows[idx]);
        }
        let b = idx.clamp(1, rows.len() - 1);
        Ok(hermite(&rows[b - 1], &rows[b], s))
    }
}

fn hermite<const N: usize>(a: &TraceRow<N>, b: &TraceRow<N>, s: f64) -> TraceRow<N> {
    let h = b.s - a.s;
    let tau = (s - a.s) / h;
    let (t2, t3) = (tau * tau, tau * tau * tau);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + tau;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let d00 = (6.0 * t2 - 6.0 * tau) / h;
    let d10 = 3.0 * t2 - 4.0 * tau + 1.0;
    let d01 = (-6.0 * t2 + 6.0 * tau) / h;
    let d11 = 3.0 * t2 - 2.0 * tau;
    let mut y = [0.0; N];
    let mut dy = [0.0; N];
    for i in 0..N {
        y[i] = h00 * a.y[i] + h10 * h * a.dy[i] + h01 * b.y[i] + h11 * h * b.dy[i];
        dy[i] = d00 * a.y[i] + d10 * a.dy[i] + d01 * b.y[i] + d11 * b.dy[i];
    }
    TraceRow { s, y, dy }
}

/// Dense output at the requested arc lengths by cubic Hermite interpolation
/// between stored rows, using the stored derivatives.
pub fn resample<const N: usize>(trace: &Trace<N>, s_values: &[f64]) -> Result<Trace<N>, NumericError> {
    let rows = s_values.iter().map(|&s| trace.sample(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(Trace { rows, meta: trace.meta.clone(), breach: trace.breach })
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += c * k[i];
            }
        }
    }
    out
}

/// Compensated `y += d`; `c` carries the low-order bits lost so far.
fn kahan_add(y: &mut f64, c: &mut f64, d: f64) {
    let v = d - *c;
    let t = *y + v;
    *c = (t - *y) - v;
    *y = t;
}

enum StepOutcome<const N: usize> {
    /// The state increment over the step and the scaled error estimate.
    Done { inc: [f64; N], err: f64 },
    /// A stage left the domain of the system.
    LeftDomain,
}

fn rk4_step<const N: usize, S: GeodesicSystem<N>>(sys: &S, y: &[f64; N], k1: &[f64; N], h: f64) -> StepOutcome<N> {
    let y2 = axpy(y, &[(0.5 * h, k1)]);
    if !sys.in_domain(&y2) {
        return StepOutcome::LeftDomain;
    }
    let k2 = sys.rhs(&y2);
    let y3 = axpy(y, &[(0.5 * h, &k2)]);
    if !sys.in_domain(&y3) {
        return StepOutcome::LeftDomain;
    }
    let k3 = sys.rhs(&y3);
    let y4 = axpy(y, &[(h, &k3)]);
    if !sys.in_domain(&y4) {
        return StepOutcome::LeftDomain;
    }
    let k4 = sys.rhs(&y4);
    let w = h / 6.0;
    StepOutcome::Done { inc: axpy(&[0.0; N], &[(w, k1), (2.0 * w, &k2), (2.0 * w, &k3), (w, &k4)]), err: 0.0 }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

fn dopri_step<const N: usize, S: GeodesicSystem<N>>(
    sys: &S,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> StepOutcome<N> {
    let mut k = [[0.0; N]; 7];
    k[0] = *k1;
    let mut y_next = *y;
    let mut inc = [0.0; N];
    for stage in 0..6 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage + 1) {
            let c = A[stage][j] * h;
            if c != 0.0 {
                for i in 0..N {
                    ys[i] += c * kj[i];
                }
            }
        }
        if !sys.in_domain(&ys) {
            return StepOutcome::LeftDomain;
        }
        k[stage + 1] = sys.rhs(&ys);
        if stage == 5 {
            y_next = ys;
            for (j, kj) in k.iter().enumerate().take(6) {
                let c = A[5][j] * h;
                for i in 0..N {
                    inc[i] += c * kj[i];
                }
            }
        }
    }
    let mut acc = 0.0;
    for i in 0..N {
        let mut e = 0.0;
        for (j, kj) in k.iter().enumerate() {
            e += E[j] * kj[i];
        }
        let scale = abs_tol + rel_tol * y[i].abs().max(y_next[i].abs());
        let ratio = h * e / scale;
        acc += ratio * ratio;
    }
    StepOutcome::Done { inc, err: (acc / N as f64).sqrt() }
}

/// Integrates `sys` from `y0` at `s = 0` to `s_end` (which may be negative).
///
/// Reaching the radial floor is not an error: the trace ends at the breach
/// and `Trace::breach` records where.
pub fn integrate<const N: usize, S: GeodesicSystem<N>>(
    sys: &S,
    y0: [f64; N],
    s_end: f64,
    policy: StepPolicy,
) -> Result<Trace<N>, NumericError> {
    policy.validate()?;
    if !s_end.is_finite() {
        return Err(NumericError::InvalidPolicy("s_end must be finite"));
    }
    if !sys.in_domain(&y0) {
        return Err(NumericError::DomainBreach { r: sys.radial(&y0).map_or(f64::NAN, |(r, _)| r) });
    }
    let started = Instant::now();
    let dir = if s_end < 0.0 { -1.0 } else { 1.0 };
    let span = s_end.abs();

    let mut s = 0.0_f64;
    let mut s_comp = 0.0_f64;
    let mut y = y0;
    let mut y_comp = [0.0; N];
    let mut dy = sys.rhs(&y);
    let mut rows = vec![TraceRow { s, y, dy }];
    let mut breach = None;

    let mut h_mag = match policy {
        StepPolicy::Fixed { step } => span / (span / step).ceil().max(1.0),
        StepPolicy::Adaptive { max_step, .. } => max_step.min(1e-2).min(span),
    };
    let r_min = sys.r_min();
    let mut steps = 0usize;

    while span - s * dir > 1e-12 * span.max(1.0) {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(NumericError::TooManySteps { s });
        }
        let remaining = span - s * dir;
        let mut h = h_mag.min(remaining);
        if remaining - h < 1e-9 * h_mag {
            h = remaining;
        }
        let mut landing = false;
        if let Some((r, r_dot)) = sys.radial(&y) {
            let rate = r_dot * dir;
            if rate < 0.0 {
                let cap = (r - r_min) / -rate;
                if cap <= h {
                    h = cap;
                    landing = true;
                }
            }
        }
        let signed = h * dir;
        let outcome = match policy {
            StepPolicy::Fixed { .. } => rk4_step(sys, &y, &dy, signed),
            StepPolicy::Adaptive { rel_tol, abs_tol, .. } => dopri_step(sys, &y, &dy, signed, rel_tol, abs_tol),
        };
        let (inc, err) = match outcome {
            StepOutcome::Done { inc, err } => (inc, err),
            StepOutcome::LeftDomain => {
                if h < 1e-15 * s.abs().max(1.0) {
                    breach = Some(Breach { s, r: sys.radial(&y).map_or(f64::NAN, |(r, _)| r) });
                    break;
                }
                h_mag = 0.5 * h;
                continue;
            }
        };
        if let StepPolicy::Adaptive { max_step, .. } = policy {
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err > 1.0 {
                if h < 1e-14 * s.abs().max(1.0) {
                    return Err(NumericError::StepUnderflow { s, h });
                }
                h_mag = h * factor;
                continue;
            }
            h_mag = (h * factor).min(max_step);
        }
        let (mut y_new, mut c_new) = (y, y_comp);
        for i in 0..N {
            kahan_add(&mut y_new[i], &mut c_new[i], inc[i]);
        }
        if !sys.in_domain(&y_new) && !landing {
            h_mag = 0.5 * h;
            continue;
        }
        if landing || h != remaining {
            kahan_add(&mut s, &mut s_comp, signed);
        } else {
            s = s_end;
        }
        y = y_new;
        y_comp = c_new;
        dy = sys.rhs(&y);
        rows.push(TraceRow { s, y, dy });
        if let Some((r, _)) = sys.radial(&y) {
            if landing && r <= r_min + BREACH_SLACK {
                breach = Some(Breach { s, r });
                break;
            }
        }
    }

    Ok(Trace {
        rows,
        meta: TraceMeta {
            integrator: policy.integrator_name().to_string(),
            system: sys.name().to_string(),
            policy,
            initial: y0.to_vec(),
            wall_time_s: started.elapsed().as_secs_f64(),
        },
        breach,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::systems::{ConeFlow, HeisFlow};

    #[test]
    fn horizontal_line_is_exact() {
        let trace = integrate(&HeisFlow, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0], 2.0, StepPolicy::fixed(1e-3)).unwrap();
        let end = trace.last();
        assert_eq!(end.s, 2.0);
        let want = [2.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        for i in 0..6 {
            assert!((end.y[i] - want[i]).abs() <= 1e-12);
        }
        assert!(trace.breach.is_none());
        assert_eq!(trace.meta.integrator, "rk4");
    }

    #[test]
    fn radial_inward_stops_at_floor() {
        let flow = ConeFlow::default();
        let y0 = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0];
        for policy in [StepPolicy::fixed(1e-3), StepPolicy::adaptive_default()] {
            let trace = integrate(&flow, y0, 2.0, policy).unwrap();
            let b = trace.breach.expect("breach");
            assert!((b.s - (1.0 - flow.r_min)).abs() < 1e-8, "{policy:?}: {b:?}");
            assert_eq!(trace.last().s, b.s);
        }
    }

    #[test]
    fn reverse_integration_and_monotone_rows() {
        let y0 = [0.3, -0.2, 0.1, 0.6, 0.0, 0.8];
        let trace = integrate(&HeisFlow, y0, -1.5, StepPolicy::fixed(1e-2)).unwrap();
        assert_eq!(trace.first().y, y0);
        assert!(trace.rows.windows(2).all(|w| w[1].s < w[0].s));
        assert_eq!(trace.last().s, -1.5);
    }

    #[test]
    fn resample_reproduces_nodes_and_lines() {
        let trace = integrate(&HeisFlow, [0.0, 0.0, 0.0, 0.6, 0.8, 0.0], 1.0, StepPolicy::fixed(0.1)).unwrap();
        let node = trace.rows[3];
        assert_eq!(trace.sample(node.s).unwrap(), node);
        let mid = trace.sample(0.35).unwrap();
        assert!((mid.y[0] - 0.6 * 0.35).abs() < 1e-12);
        assert!((mid.y[1] - 0.8 * 0.35).abs() < 1e-12);
        assert!(matches!(trace.sample(1.5), Err(NumericError::OutOfRange { .. })));
        let resampled = resample(&trace, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(resampled.rows.len(), 3);
    }

    #[test]
    fn invalid_policies_rejected() {
        let y0 = [0.0; 6];
        assert!(integrate(&HeisFlow, y0, 1.0, StepPolicy::fixed(0.0)).is_err());
        let bad = StepPolicy::Adaptive { rel_tol: -1.0, abs_tol: 1e-12, max_step: 0.1 };
        assert!(matches!(integrate(&HeisFlow, y0, 1.0, bad), Err(NumericError::InvalidPolicy(_))));
        let below = [0.0, 0.0, 0.0, 1e-10, 0.0, 0.0, 0.0, 1.0];
        assert!(matches!(
            integrate(&ConeFlow::default(), below, 1.0, StepPolicy::default()),
            Err(NumericError::DomainBreach { .. })
        ));
    }
}
