use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};

/// Marker for values computed here rather than transcribed.
pub const DERIVED: &str = "derived";

#[derive(Debug, Clone)]
pub struct Item {
    pub name: String,
    pub value: Value,
    pub anchor: String,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub anchor: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
        anchor: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
            anchor: anchor.into(),
        }
    }

    /// Exact comparison of two displayed values.
    pub fn eq<T: PartialEq + std::fmt::Display>(
        name: impl Into<String>,
        got: T,
        want: T,
        anchor: &str,
    ) -> Self {
        let passed = got == want;
        let detail = if passed {
            format!("{got}")
        } else {
            format!("got {got}, expected {want}")
        };
        Self::new(name, passed, detail, anchor)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: Vec<Item>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn result(&mut self, name: impl Into<String>, value: impl Into<Value>, anchor: &str) {
        self.results.push(Item {
            name: name.into(),
            value: value.into(),
            anchor: anchor.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    /// Timing is left out so that output is byte-identical across runs.
    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|r| json!({"name": r.name, "value": r.value, "anchor": r.anchor}))
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": if c.passed { "pass" } else { "fail" },
                    "detail": c.detail,
                    "anchor": c.anchor,
                })
            })
            .collect();
        let params: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "command": self.command,
            "parameters": params,
            "results": results,
            "checks": checks,
            "status": self.status(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let _ = writeln!(
                out,
                "{} = {}  [{}]",
                r.name,
                render_value(&r.value),
                r.anchor
            );
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}  [{}]", c.name, c.detail, c.anchor);
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(
                out,
                "status: {} ({} checks, {} failed)",
                self.status(),
                self.checks.len(),
                failed
            );
        }
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn print_timing(command: &str, elapsed: Duration) {
    eprintln!("{command}: {:.3}s", elapsed.as_secs_f64());
}
