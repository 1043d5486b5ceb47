//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "dirac-lab";

/// One certified identity.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The identity or property being certified.
    pub anchor: String,
    /// Measured residuals, ranks or dimensions.
    pub value: Value,
    pub threshold: Option<f64>,
    pub pass: bool,
}

impl CheckRecord {
    /// Residual check `residual <= threshold`.
    pub fn residual(name: impl Into<String>, anchor: &str, residual: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.to_string(),
            // + 0.0 turns the -0.0 of an empty sum into 0.0
            value: serde_json::json!({ "residual": residual + 0.0 }),
            threshold: Some(threshold),
            pass: residual <= threshold,
        }
    }

    pub fn exact(name: impl Into<String>, anchor: &str, value: Value, pass: bool) -> Self {
        CheckRecord { name: name.into(), anchor: anchor.to_string(), value, threshold: None, pass }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: Parameters,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    /// Wall-clock seconds per stage. The only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str, parameters: Parameters) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters,
            checks: Vec::new(),
            pass: true,
            timings: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = CheckRecord>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report with timings cleared, for byte comparisons across runs.
    pub fn to_json_without_timings(&self) -> String {
        let mut r = self.clone();
        r.timings.clear();
        r.to_json()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
