use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A single named measurement against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured residual; `null` in JSON when it is not finite.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub samples: BTreeMap<String, u64>,
}

/// Named checks with residuals, tolerances and flags. The summary passes iff
/// every check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub suite: String,
    pub summary: Verdict,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            summary: Verdict::Pass,
            checks: Vec::new(),
            provenance: Provenance::default(),
            notes: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.provenance.seed = Some(seed);
        self
    }

    pub fn samples(&mut self, what: &str, n: u64) {
        self.provenance.samples.insert(what.to_string(), n);
    }

    /// Records `residual <= tolerance`. Non-finite residuals fail.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> bool {
        let pass = residual.is_finite() && residual <= tolerance;
        self.push(Check { name: name.into(), residual: residual.is_finite().then_some(residual), tolerance, pass });
        pass
    }

    /// A yes/no condition, recorded with residual 0 or 1 against tolerance 0.
    pub fn flag(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.push(Check { name: name.into(), residual: Some(if ok { 0.0 } else { 1.0 }), tolerance: 0.0, pass: ok });
        ok
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn push(&mut self, c: Check) {
        if !c.pass {
            self.summary = Verdict::Fail;
        }
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.summary == Verdict::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Folds same-named checks of `other` into this report by worst residual,
    /// appending checks not seen before.
    pub fn merge_worst(&mut self, other: &ValidationReport) {
        for c in &other.checks {
            match self.checks.iter_mut().find(|x| x.name == c.name) {
                Some(x) => {
                    x.residual = match (x.residual, c.residual) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                    x.pass &= c.pass;
                    if !x.pass {
                        self.summary = Verdict::Fail;
                    }
                }
                None => self.push(c.clone()),
            }
        }
    }

    /// Appends another report's checks and notes under `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.push(c);
        }
        for n in other.notes {
            self.notes.push(format!("[{prefix}] {n}"));
        }
        for (k, v) in other.provenance.samples {
            self.provenance.samples.insert(format!("{prefix}.{k}"), v);
        }
    }
}

/// Running maximum of absolute residuals.
#[derive(Debug, Clone, Copy, Default)]
pub struct SupNorm(f64);

impl SupNorm {
    pub fn add(&mut self, v: f64) {
        let a = v.abs();
        if a > self.0 || a.is_nan() {
            self.0 = a;
        }
    }

    pub fn add_all(&mut self, vs: impl IntoIterator<Item = f64>) {
        vs.into_iter().for_each(|v| self.add(v));
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_failures() {
        let mut r = ValidationReport::new("t");
        assert!(r.check("a", 1e-13, 1e-12));
        assert!(r.passed());
        assert!(!r.check("b", f64::NAN, 1.0));
        assert!(!r.passed());
        assert_eq!(r.get("b").unwrap().residual, None);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut inner = ValidationReport::new("inner");
        inner.flag("ok", true);
        inner.note("hello");
        let mut outer = ValidationReport::new("outer");
        outer.absorb("x", inner);
        assert_eq!(outer.checks[0].name, "x.ok");
        assert_eq!(outer.notes[0], "[x] hello");
    }

    #[test]
    fn merge_worst_keeps_largest() {
        let mut a = ValidationReport::new("a");
        a.check("x", 1.0, 2.0);
        let mut b = ValidationReport::new("b");
        b.check("x", 3.0, 2.0);
        b.check("y", 0.0, 1.0);
        a.merge_worst(&b);
        assert_eq!(a.checks.len(), 2);
        assert_eq!(a.get("x").unwrap().residual, Some(3.0));
        assert!(!a.passed());
    }

    #[test]
    fn sup_norm_keeps_nan() {
        let mut s = SupNorm::default();
        s.add_all([1.0, -3.0, 2.0]);
        assert_eq!(s.get(), 3.0);
        s.add(f64::NAN);
        assert!(s.get().is_nan());
        s.add(5.0);
        assert!(s.get().is_nan());
    }
}
