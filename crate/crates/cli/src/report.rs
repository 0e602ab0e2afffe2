//! Report records and their JSON / text renderings.

use std::fmt::Write as _;

use garnier_core::bmap::{ParamVector, Point};
use garnier_core::exact::{format_rational, linalg::Matrix};
use garnier_core::lattice::{BiLatticeMap, DivisorClass};
use garnier_core::Rational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{version, RunConfig};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    /// Acceptance criterion this check belongs to, if any.
    pub criterion: Option<u32>,
    pub passed: bool,
    pub expected: Value,
    pub actual: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(suite: &str, name: impl Into<String>, criterion: Option<u32>) -> Self {
        Check {
            suite: suite.into(),
            name: name.into(),
            criterion,
            passed: false,
            expected: Value::Null,
            actual: Value::Null,
            note: None,
        }
    }

    pub fn outcome(mut self, passed: bool, expected: Value, actual: Value) -> Self {
        self.passed = passed;
        self.expected = expected;
        self.actual = actual;
        self
    }

    /// Passes iff `expected == actual`.
    pub fn compare(self, expected: Value, actual: Value) -> Self {
        let ok = expected == actual;
        self.outcome(ok, expected, actual)
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(self, error: impl std::fmt::Display) -> Self {
        let msg = error.to_string();
        self.outcome(false, Value::Null, json!({ "error": msg }))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: Value,
    pub suites: Vec<String>,
    pub summary: Summary,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    /// Checks keep their order within a suite; suites are sorted by name.
    pub fn new(config: &RunConfig, suites: Vec<String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.suite.cmp(&b.suite));
        let passed = checks.iter().filter(|c| c.passed).count();
        Report {
            version: version(),
            config: config.echo(),
            suites,
            summary: Summary { total: checks.len(), passed, failed: checks.len() - passed },
            passed: passed == checks.len(),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let crit = c.criterion.map(|n| format!(" [criterion {n}]")).unwrap_or_default();
            let _ = writeln!(out, "{tag}  {}/{}{crit}", c.suite, c.name);
            if !c.passed {
                let _ = writeln!(out, "      expected: {}", compact(&c.expected));
                let _ = writeln!(out, "      actual:   {}", compact(&c.actual));
            }
            if let Some(n) = &c.note {
                let _ = writeln!(out, "      note: {n}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(out, "{} checks, {} passed, {} failed ({})", s.total, s.passed, s.failed, self.version);
        out
    }
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.chars().count() > 400 {
        format!("{}…", s.chars().take(400).collect::<String>())
    } else {
        s
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|row| rats(row)).collect())
}

/// A class as its formula and its coefficient vector.
pub fn class(d: &DivisorClass) -> Value {
    Value::String(d.to_string())
}

/// Columns of a divisor matrix as class formulas, keyed by basis label.
pub fn columns(m: &BiLatticeMap) -> Value {
    let labels = m.model.divisor_basis();
    let mut out = Map::new();
    for (j, l) in labels.iter().enumerate() {
        out.insert(l.clone(), class(&m.image_of_basis(j)));
    }
    Value::Object(out)
}

pub fn lattice_map(m: &BiLatticeMap) -> Value {
    json!({
        "model": m.model.name(),
        "basis": m.model.divisor_basis(),
        "divisor_matrix": matrix(&m.divisor_matrix),
        "curve_matrix": matrix(&m.curve_matrix),
        "images": columns(m),
    })
}

pub fn params(a: &ParamVector<Rational>) -> Value {
    let mut out = Map::new();
    for (n, v) in ParamVector::<Rational>::NAMES.iter().zip(a.to_array()) {
        out.insert((*n).into(), rat(&v));
    }
    Value::Object(out)
}

pub fn point(x: &Point<Rational>, names: [&str; 4]) -> Value {
    let mut out = Map::new();
    for (n, v) in names.iter().zip(x) {
        out.insert((*n).into(), rat(v));
    }
    Value::Object(out)
}
