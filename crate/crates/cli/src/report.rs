//! Report accumulator and its text, JSON and CSV renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use mermin_core::{Limits, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ExperimentConfig, Format};
use crate::HarnessError;

pub const TOOL: &str = "game";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivation {
    ClosedForm,
    Exhaustive,
    MonteCarlo,
}

impl Derivation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Derivation::ClosedForm => "closed-form",
            Derivation::Exhaustive => "exhaustive",
            Derivation::MonteCarlo => "monte-carlo",
        }
    }
}

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn real(v: f64) -> Value {
    if !v.is_finite() {
        return Value::String(v.to_string());
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Decimal rendering of a rational, 12 significant digits.
pub fn rational_decimal(r: &Rational) -> Value {
    real(*r.numer() as f64 / *r.denom() as f64)
}

/// One result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub kind: String,
    pub derivation: Derivation,
    #[serde(flatten)]
    pub fields: BTreeMap<String, Value>,
}

impl Record {
    pub fn new(kind: &str, derivation: Derivation) -> Self {
        Record {
            kind: kind.to_string(),
            derivation,
            fields: BTreeMap::new(),
        }
    }

    pub fn with<T: Into<Value>>(mut self, key: &str, value: T) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn real(self, key: &str, value: f64) -> Self {
        self.with(key, real(value))
    }

    /// Stores `key` as "num/den" and `key_decimal` alongside it.
    pub fn exact(self, key: &str, value: &Rational) -> Self {
        let text = format!("{}/{}", value.numer(), value.denom());
        self.with(key, text)
            .with(&format!("{key}_decimal"), rational_decimal(value))
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub limits: Limits,
    pub records: Vec<Record>,
    pub checks: Vec<Check>,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(config: &ExperimentConfig, limits: Limits) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: config.command.as_str().to_string(),
            seed: config.seed,
            config: config.clone(),
            limits,
            records: Vec::new(),
            checks: Vec::new(),
            verified: true,
            timing: None,
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.verified &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn records_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn render(&self, format: Format) -> Result<String, HarnessError> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Io(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}  command={}  seed={}",
            self.tool, self.version, self.command, self.seed
        );
        let l = &self.limits;
        let _ = writeln!(
            out,
            "limits: exhaustive={} optimal_set={} extended={} dense={}",
            l.exhaustive, l.optimal_set, l.extended, l.dense
        );
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "[{}] {}", r.kind, r.derivation.as_str());
            for (k, v) in &r.fields {
                let _ = write!(out, "  {k}={}", plain(v));
            }
            out.push('\n');
        }
        out.push_str("\nchecks:\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(out, "verified: {}", self.verified);
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "elapsed_ms: {}", t.elapsed_ms);
        }
        out
    }

    /// One row per record; columns are the union of field names.
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let keys: BTreeSet<&str> = self
            .records
            .iter()
            .flat_map(|r| r.fields.keys().map(String::as_str))
            .collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| HarnessError::Io(e.to_string());
        let header = ["kind", "derivation"].into_iter().chain(keys.iter().copied());
        w.write_record(header).map_err(io)?;
        for r in &self.records {
            let mut row = vec![r.kind.clone(), r.derivation.as_str().to_string()];
            row.extend(keys.iter().map(|k| r.fields.get(*k).map(plain).unwrap_or_default()));
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarnessError::Io(e.to_string()))
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
