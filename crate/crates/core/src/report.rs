//! Versioned JSON summaries of runs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Values, bounds and invariant verdicts of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub kind: String,
    pub values: BTreeMap<String, Value>,
    pub bounds: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
}

impl RunRecord {
    pub fn new(kind: &str) -> Self {
        RunRecord {
            kind: kind.to_string(),
            ..Default::default()
        }
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values
            .insert(key.to_string(), serde_json::to_value(v).expect("plain data serializes"));
        self
    }

    pub fn bound(mut self, key: &str, v: f64) -> Self {
        self.bounds.insert(key.to_string(), v);
        self
    }

    pub fn check(mut self, key: &str, ok: bool) -> Self {
        self.checks.insert(key.to_string(), ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub runs: Vec<RunRecord>,
    pub checks_passed: usize,
    pub checks_failed: usize,
    /// Names of failed checks as `kind.check`.
    pub failures: Vec<String>,
}

pub fn report(runs: Vec<RunRecord>) -> Report {
    let mut failures = Vec::new();
    let mut passed = 0;
    for r in &runs {
        for (name, &ok) in &r.checks {
            if ok {
                passed += 1;
            } else {
                failures.push(format!("{}.{name}", r.kind));
            }
        }
    }
    Report {
        schema_version: SCHEMA_VERSION,
        checks_passed: passed,
        checks_failed: failures.len(),
        failures,
        runs,
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
