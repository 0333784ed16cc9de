//! Report assembly and serialization.

use std::fmt::Write as _;

use pcm_core::{AxiomCheck, Status};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<AxiomCheck>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn to_value(&self) -> Value {
        let checks: Vec<Value> = self.checks.iter().map(check_value).collect();
        json!({
            "suite": self.suite,
            "checks": checks,
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "degenerate": self.count(Status::Degenerate),
            },
            "elapsed_ms": self.elapsed_ms,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "suite {}", self.suite).unwrap();
        for c in &self.checks {
            write!(out, "{:<10} {} margin={:+e}", c.status.to_string().to_uppercase(), c.axiom_id, c.margin).unwrap();
            if let Some(w) = &c.witness {
                write!(out, " witness={w}").unwrap();
            }
            if let Some(n) = &c.note {
                write!(out, " note=\"{n}\"").unwrap();
            }
            out.push('\n');
        }
        writeln!(
            out,
            "summary pass={} fail={} degenerate={} elapsed_ms={}",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Degenerate),
            self.elapsed_ms
        )
        .unwrap();
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }
}

fn finite_or_null(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn check_value(c: &AxiomCheck) -> Value {
    let mut m = Map::new();
    m.insert("axiom_id".into(), Value::String(c.axiom_id.clone()));
    m.insert("status".into(), Value::String(c.status.to_string()));
    m.insert(
        "witness".into(),
        c.witness
            .as_ref()
            .map_or(Value::Null, |w| serde_json::to_value(w).expect("witness serializes")),
    );
    m.insert("margin".into(), finite_or_null(c.margin));
    if let Some(n) = &c.note {
        m.insert("note".into(), Value::String(n.clone()));
    }
    Value::Object(m)
}
