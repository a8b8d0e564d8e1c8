//! Sampling a geodesic into rows for the `trace` command.
//!
//! Row layout is the state vector in frame components, `x, y, t[, r], f, g,
//! h[, k]`, preceded by `s` and followed by `speed_err = |v|^2 - 1` in absolute
//! value and, for `--method both`, `dev`: the largest component deviation
//! between the closed form and the RK4 trace at that `s`.

use std::fmt::Write as _;

use clap::ValueEnum;
use heiscone::closed::{cone_geodesic_from_ic, heis_geodesic_from_ic, ConeGeodesic, HeisGeodesic};
use heiscone::cone::{ConePoint, FrameVecC};
use heiscone::heis::{FrameVecH, HeisPoint};
use heiscone::numeric::{integrate_cone, integrate_heis, ConeState, HeisState, StepPolicy, Trace};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Heisenberg,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Rk4,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRequest {
    pub space: Space,
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
    pub s_start: f64,
    pub s_end: f64,
    pub n: usize,
    pub method: Method,
    pub step: f64,
    pub normalize: bool,
}

/// Where the sampled range left the geodesic domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreachMarker {
    pub s: f64,
    /// Radius at the breach; `0` when the closed-form domain end is reported.
    pub r: f64,
    pub source: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceTable {
    pub space: Space,
    pub method: Method,
    pub case: String,
    pub geodesic: serde_json::Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub breach: Option<BreachMarker>,
}

enum Model {
    Heis(HeisGeodesic, HeisState),
    Cone(ConeGeodesic, ConeState),
}

impl Model {
    fn build(req: &TraceRequest) -> Result<Self, CliError> {
        let want = match req.space {
            Space::Heisenberg => 3,
            Space::Cone => 4,
        };
        for (name, v) in [("--base", &req.base), ("--dir", &req.dir)] {
            if v.len() != want {
                return Err(CliError::Input(format!("{name} needs {want} components for this space, got {}", v.len())));
            }
        }
        match req.space {
            Space::Heisenberg => {
                let p = HeisPoint::checked(req.base[0], req.base[1], req.base[2])?;
                let mut v = FrameVecH::new(req.dir[0], req.dir[1], req.dir[2]);
                if req.normalize {
                    v = v.normalized()?;
                }
                let geo = heis_geodesic_from_ic(p, v)?;
                Ok(Model::Heis(geo, HeisState::new(p, v)))
            }
            Space::Cone => {
                let q = ConePoint::checked(req.base[0], req.base[1], req.base[2], req.base[3])?;
                let mut v = FrameVecC::new(req.dir[0], req.dir[1], req.dir[2], req.dir[3]);
                if req.normalize {
                    v = v.normalized()?;
                }
                let geo = cone_geodesic_from_ic(q, v)?;
                Ok(Model::Cone(geo, ConeState::new(q, v)))
            }
        }
    }

    fn columns(&self, method: Method) -> Vec<&'static str> {
        let mut c: Vec<&'static str> = match self {
            Model::Heis(..) => vec!["s", "x", "y", "t", "f", "g", "h"],
            Model::Cone(..) => vec!["s", "x", "y", "t", "r", "f", "g", "h", "k"],
        };
        c.push("speed_err");
        if method == Method::Both {
            c.push("dev");
        }
        c
    }

    fn closed(&self, s: f64) -> Option<Vec<f64>> {
        match self {
            Model::Heis(geo, _) => {
                let (p, v) = (geo.eval(s), geo.velocity(s));
                Some([p.to_array().as_slice(), &[v.f, v.g, v.h]].concat())
            }
            Model::Cone(geo, _) => {
                if !geo.domain().contains(s) {
                    return None;
                }
                let (q, v) = (geo.eval(s).ok()?, geo.velocity(s).ok()?);
                Some([q.to_array(), v.to_array()].concat())
            }
        }
    }

    /// End of the closed-form domain crossed by `[lo, hi]`, if any.
    fn closed_breach(&self, lo: f64, hi: f64) -> Option<BreachMarker> {
        let Model::Cone(geo, _) = self else { return None };
        let d = geo.domain();
        let s = if hi >= d.s_max {
            d.s_max
        } else if lo <= d.s_min {
            d.s_min
        } else {
            return None;
        };
        Some(BreachMarker { s, r: 0.0, source: "closed-form domain end" })
    }

    fn case_name(&self) -> &'static str {
        match self {
            Model::Heis(geo, _) => geo.case_name(),
            Model::Cone(geo, _) => geo.case_name(),
        }
    }

    fn geodesic_json(&self) -> serde_json::Value {
        match self {
            Model::Heis(geo, _) => serde_json::to_value(geo),
            Model::Cone(geo, _) => serde_json::to_value(geo),
        }
        .expect("geodesic records serialize")
    }
}

/// RK4 traces integrated from `s = 0` towards each end of the requested range.
enum Numeric {
    Heis(Vec<Trace<6>>),
    Cone(Vec<Trace<8>>),
}

impl Numeric {
    fn integrate(model: &Model, lo: f64, hi: f64, step: f64) -> Result<Self, CliError> {
        let policy = StepPolicy::fixed(step);
        let ends: Vec<f64> = [hi.max(0.0), lo.min(0.0)].into_iter().filter(|e| *e != 0.0).collect();
        Ok(match model {
            Model::Heis(_, st) => {
                Numeric::Heis(ends.iter().map(|&e| integrate_heis(*st, e, policy)).collect::<Result<_, _>>()?)
            }
            Model::Cone(_, st) => {
                Numeric::Cone(ends.iter().map(|&e| integrate_cone(*st, e, policy)).collect::<Result<_, _>>()?)
            }
        })
    }

    fn sample(&self, s: f64, model: &Model) -> Option<Vec<f64>> {
        fn pick<const N: usize>(traces: &[Trace<N>], s: f64) -> Option<Vec<f64>> {
            traces.iter().find_map(|tr| tr.sample(s).ok()).map(|row| row.y.to_vec())
        }
        if s == 0.0 {
            // no trace when the range is a single side of zero and excludes it
            return match model {
                Model::Heis(_, st) => Some(st.to_array().to_vec()),
                Model::Cone(_, st) => Some(st.to_array().to_vec()),
            };
        }
        match self {
            Numeric::Heis(t) => pick(t, s),
            Numeric::Cone(t) => pick(t, s),
        }
    }

    fn breach(&self) -> Option<BreachMarker> {
        match self {
            Numeric::Heis(_) => None,
            Numeric::Cone(t) => {
                t.iter().find_map(|tr| tr.breach).map(|b| BreachMarker { s: b.s, r: b.r, source: "rk4 radial floor" })
            }
        }
    }
}

fn speed_err(state: &[f64]) -> f64 {
    let half = state.len() / 2;
    let sq: f64 = state[half..].iter().map(|v| v * v).sum();
    (sq - 1.0).abs()
}

/// Evenly spaced samples; the last one is exactly `b`.
pub fn sample_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let span = b - a;
    (0..n).map(|i| if i + 1 == n { b } else { a + span * (i as f64) / ((n - 1) as f64) }).collect()
}

pub fn build_trace(req: &TraceRequest) -> Result<TraceTable, CliError> {
    if req.n < 2 {
        return Err(CliError::Input(format!("--n must be at least 2, got {}", req.n)));
    }
    if !req.s_start.is_finite() || !req.s_end.is_finite() || req.s_start >= req.s_end {
        return Err(CliError::Input(format!("--s needs finite s_start < s_end, got {}:{}", req.s_start, req.s_end)));
    }
    if !(req.step.is_finite() && req.step > 0.0) {
        return Err(CliError::Input(format!("--step must be positive, got {}", req.step)));
    }
    let model = Model::build(req)?;
    let numeric = match req.method {
        Method::Closed => None,
        Method::Rk4 | Method::Both => Some(Numeric::integrate(&model, req.s_start, req.s_end, req.step)?),
    };

    let mut rows = Vec::with_capacity(req.n);
    let mut missing = false;
    for s in sample_points(req.s_start, req.s_end, req.n) {
        let state = match (req.method, &numeric) {
            (Method::Closed, _) => model.closed(s).map(|c| (c, None)),
            (Method::Rk4, Some(num)) => num.sample(s, &model).map(|n| (n, None)),
            (Method::Both, Some(num)) => match (model.closed(s), num.sample(s, &model)) {
                (Some(c), Some(n)) => {
                    let dev = c.iter().zip(&n).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    Some((c, Some(dev)))
                }
                _ => None,
            },
            _ => unreachable!("numeric traces exist for rk4 and both"),
        };
        let Some((state, dev)) = state else {
            missing = true;
            continue;
        };
        let mut row = Vec::with_capacity(state.len() + 3);
        row.push(s);
        row.extend_from_slice(&state);
        row.push(speed_err(&state));
        row.extend(dev);
        rows.push(row);
    }

    let breach = if missing {
        let from_numeric = numeric.as_ref().and_then(Numeric::breach);
        Some(from_numeric.or_else(|| model.closed_breach(req.s_start, req.s_end)).unwrap_or(BreachMarker {
            s: f64::NAN,
            r: f64::NAN,
            source: "sample outside trace range",
        }))
    } else {
        None
    };

    Ok(TraceTable {
        space: req.space,
        method: req.method,
        case: model.case_name().to_string(),
        geodesic: model.geodesic_json(),
        columns: model.columns(req.method),
        rows,
        breach,
    })
}

impl TraceTable {
    /// CSV with a fixed 17-significant-digit float format and LF endings. A
    /// domain breach appends a final `# domain breach ...` comment line.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        if let Some(b) = &self.breach {
            let _ = writeln!(out, "# domain breach at s={:.16e} r={:.16e} ({})", b.s, b.r, b.source);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace table serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(space: Space, base: &[f64], dir: &[f64], s: (f64, f64), n: usize, method: Method) -> TraceRequest {
        TraceRequest {
            space,
            base: base.to_vec(),
            dir: dir.to_vec(),
            s_start: s.0,
            s_end: s.1,
            n,
            method,
            step: 1e-3,
            normalize: false,
        }
    }

    #[test]
    fn samples_hit_both_ends() {
        let s = sample_points(0.0, 3.0, 301);
        assert_eq!(s.len(), 301);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[300], 3.0);
        assert!((s[100] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn heisenberg_line_rows() {
        let t = build_trace(&req(Space::Heisenberg, &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], (0.0, 2.0), 5, Method::Closed))
            .unwrap();
        assert_eq!(t.columns, ["s", "x", "y", "t", "f", "g", "h", "speed_err"]);
        for row in &t.rows {
            assert_eq!(&row[1..7], &[row[0], 0.0, 0.0, 1.0, 0.0, 0.0]);
        }
        assert!(t.breach.is_none());
    }

    #[test]
    fn arc_both_deviation_small() {
        let t =
            build_trace(&req(Space::Cone, &[0.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 1.0, 0.0], (0.0, 3.0), 301, Method::Both))
                .unwrap();
        let dev = t.rows.iter().map(|r| *r.last().unwrap()).fold(0.0, f64::max);
        assert!(dev <= 1e-6, "{dev}");
    }

    #[test]
    fn radial_inward_breaches_near_one() {
        for m in [Method::Closed, Method::Rk4, Method::Both] {
            let t = build_trace(&req(Space::Cone, &[0.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, -1.0], (0.0, 2.0), 201, m))
                .unwrap();
            let b = t.breach.expect("breach");
            assert!((b.s - 1.0).abs() < 1e-6, "{m:?} {b:?}");
            assert!(t.rows.last().unwrap()[0] < 1.0);
            assert!(t.to_csv().lines().last().unwrap().starts_with("# domain breach at s="));
        }
    }

    #[test]
    fn backward_range_uses_backward_trace() {
        let t = build_trace(&req(
            Space::Cone,
            &[0.1, -0.2, 0.3, 1.0],
            &[0.6, 0.0, 0.0, 0.8],
            (-2.0, -0.5),
            31,
            Method::Both,
        ))
        .unwrap();
        assert_eq!(t.rows.len(), 31);
        assert!(t.rows.iter().all(|r| *r.last().unwrap() < 1e-6));
    }

    #[test]
    fn non_unit_direction_rejected() {
        let e =
            build_trace(&req(Space::Cone, &[0.0, 0.0, 0.0, 1.0], &[1.0, 1.0, 0.0, 0.0], (0.0, 1.0), 3, Method::Closed))
                .unwrap_err();
        assert!(e.to_string().contains("not unit"), "{e}");
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn csv_number_format() {
        let t = build_trace(&req(Space::Heisenberg, &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], (0.0, 1.0), 2, Method::Closed))
            .unwrap();
        let csv = t.to_csv();
        assert!(!csv.contains('\r'));
        let last = csv.lines().last().unwrap();
        assert!(last.starts_with("1.0000000000000000e0,"), "{last}");
    }
}
