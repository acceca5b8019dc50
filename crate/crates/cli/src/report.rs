use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// Settings echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tolerance: f64,
    pub seed: u64,
    pub steps: usize,
    pub grid_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: 1e-10,
            seed: 0,
            steps: 10_000,
            grid_points: 100,
            size: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    pub measured: Value,
    pub threshold: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Entry {
    fn new(name: impl Into<String>, ok: bool, measured: Value, threshold: Value) -> Self {
        Entry {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            threshold,
            witness: None,
            reason: None,
        }
    }

    /// Passes when `measured ≤ threshold`; NaN fails.
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(
            name,
            measured <= threshold,
            Value::from(measured),
            Value::from(threshold),
        )
    }

    /// Passes when `|measured - target| ≤ tolerance`.
    pub fn near(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let mut e = Self::new(
            name,
            (measured - target).abs() <= tolerance,
            Value::from(measured),
            serde_json::json!({ "target": target, "tolerance": tolerance }),
        );
        if e.status == Status::Fail {
            e.reason = Some(format!("off by {:.3e}", (measured - target).abs()));
        }
        e
    }

    pub fn within(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self::new(
            name,
            (lo..=hi).contains(&measured),
            Value::from(measured),
            serde_json::json!([lo, hi]),
        )
    }

    pub fn equals<T: Serialize + PartialEq>(
        name: impl Into<String>,
        measured: T,
        expected: T,
    ) -> Self {
        let ok = measured == expected;
        Self::new(name, ok, to_value(&measured), to_value(&expected))
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Entry {
            name: name.into(),
            status: Status::Skipped,
            measured: Value::Null,
            threshold: Value::Null,
            witness: None,
            reason: Some(reason.into()),
        }
    }

    pub fn with_witness<T: Serialize>(mut self, witness: &T) -> Self {
        self.witness = Some(to_value(witness));
        self
    }
}

pub(crate) fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub report_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub status: Status,
}

impl Report {
    /// Overall status: FAIL if any entry failed, else PASS. Skipped entries
    /// stay visible but do not fail the run.
    pub fn new(command: impl Into<String>, config: RunConfig, entries: Vec<Entry>) -> Self {
        let status = if entries.iter().any(|e| e.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Report {
            report_version: REPORT_VERSION,
            command: command.into(),
            config,
            entries,
            details: None,
            status,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per entry plus the overall verdict.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let extra = e
                .reason
                .as_deref()
                .map(|r| format!(" ({r})"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{:<7} {}: {} [threshold {}]{extra}\n",
                e.status.to_string(),
                e.name,
                e.measured,
                e.threshold
            ));
        }
        out.push_str(&format!("{}: {}\n", self.command, self.status));
        out
    }
}
