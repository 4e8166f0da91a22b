//! Structured pass/fail records for verification suites.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation parameters a suite ran with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub algebra: String,
    pub level: u32,
    pub max_weight: u32,
    pub max_degree: u32,
    pub max_level: u32,
    pub seed: u64,
    pub extended: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params { algebra: "sl2-adjoint".into(), level: 1, max_weight: 3, max_degree: 6, max_level: 2, seed: 0, extended: false }
    }
}

impl Params {
    /// The larger truncations: weight 4, `N = 2`, level 3.
    pub fn extended() -> Self {
        Params { level: 2, max_weight: 4, max_level: 3, extended: true, ..Params::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: Params,
    pub cases: Vec<Case>,
    pub pass: bool,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, params: Params) -> Self {
        VerificationReport { suite: suite.into(), params, cases: Vec::new(), pass: true, elapsed_ms: 0 }
    }

    /// Records a case that passes when `expected == actual` as strings.
    pub fn check(&mut self, name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) -> bool {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        self.record(name, expected, actual, pass)
    }

    pub fn record(&mut self, name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>, pass: bool) -> bool {
        self.cases.push(Case { name: name.into(), expected: expected.into(), actual: actual.into(), pass });
        self.pass &= pass;
        pass
    }

    /// Records the outcome of a fallible check; errors become failing cases.
    pub fn check_result(&mut self, name: impl Into<String>, expected: impl fmt::Display, actual: Result<String>) -> bool {
        match actual {
            Ok(a) => self.check(name, expected, a),
            Err(e) => self.record(name, expected.to_string(), format!("error: {e}"), false),
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.cases {
            let name = format!("{}/{}", other.suite, c.name);
            self.record(name, c.expected, c.actual, c.pass);
        }
    }

    /// Sorts the cases by name, recomputes the overall verdict and stamps
    /// the elapsed time.
    pub fn finish(mut self, start: Instant) -> Self {
        self.cases.sort_by(|a, b| a.name.cmp(&b.name));
        self.pass = self.cases.iter().all(|c| c.pass);
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { offset: e.column(), message: e.to_string() })
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w_name = self.cases.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let w_exp = self.cases.iter().map(|c| c.expected.len()).max().unwrap_or(8).clamp(8, 40);
        writeln!(f, "suite {} ({} cases, {} ms)", self.suite, self.cases.len(), self.elapsed_ms)?;
        for c in &self.cases {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {:<w_name$}  expected {:<w_exp$}  actual {}", c.name, c.expected, c.actual)?;
        }
        write!(f, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_cases() {
        let mut r = VerificationReport::new("demo", Params::default());
        assert!(r.check("b", 1, 1));
        assert!(!r.check("a", 2, 3));
        let r = r.finish(Instant::now());
        assert!(!r.pass);
        assert_eq!(r.cases[0].name, "a");
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = VerificationReport::new("demo", Params::extended());
        r.check("x", "1/2", "1/2");
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["suite", "params", "cases", "pass", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
