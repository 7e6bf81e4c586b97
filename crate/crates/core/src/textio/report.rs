use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::port::{Configuration, PortUniverse};

/// Report format version.
pub const FORMAT: u64 = 1;

/// Outcome of one command, printable as JSON or as text.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub g: Option<usize>,
    pub violations: Vec<usize>,
    pub witness: Option<Value>,
    /// Command-specific fields, printed in key order.
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdict: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            verdict: verdict.into(),
            g: None,
            violations: Vec::new(),
            witness: None,
            details: Map::new(),
        }
    }

    pub fn error(command: impl Into<String>, err: &Error) -> Self {
        let mut report = Report::new(command, "error");
        report.details.insert("error".into(), json!({"code": err.code(), "message": err.to_string()}));
        report
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("format".into(), json!(FORMAT));
        out.insert("command".into(), json!(self.command));
        out.insert("verdict".into(), json!(self.verdict));
        out.insert("g".into(), json!(self.g));
        out.insert("violations".into(), json!(self.violations));
        out.insert("witness".into(), self.witness.clone().unwrap_or(Value::Null));
        for (k, v) in &self.details {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.verdict);
        if let Some(g) = self.g {
            let _ = writeln!(out, "g: {g}");
        }
        if !self.violations.is_empty() {
            let list: Vec<String> = self.violations.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "violations: {}", list.join(", "));
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness: {}", text_value(w));
        }
        for (k, v) in &self.details {
            let _ = writeln!(out, "{k}: {}", text_value(v));
        }
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_string) => items
            .iter()
            .filter_map(Value::as_str)
            .collect::<Vec<_>>()
            .join("\n  "),
        Value::Object(map) if map.get("code").is_some() => {
            format!(
                "{} ({})",
                map.get("message").and_then(Value::as_str).unwrap_or_default(),
                map.get("code").and_then(Value::as_str).unwrap_or_default()
            )
        }
        other => other.to_string(),
    }
}

/// `[[port, ...], ...]`
pub fn configuration_json(ports: &PortUniverse, gamma: &Configuration) -> Value {
    Value::Array(gamma.iter().map(|a| json!(ports.interaction_names(a))).collect())
}

/// `{{m(1),s(1)},{m(1)}}`
pub fn configuration_text(ports: &PortUniverse, gamma: &Configuration) -> String {
    ports.show_configuration(gamma)
}
