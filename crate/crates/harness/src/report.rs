//! Scenario reports and their JSON form.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Scenario, ScenarioConfig};
use crate::estimate::BucketMax;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value <= threshold`
    AtMost,
    /// `value >= threshold`
    AtLeast,
    /// `value == threshold`
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "crate::jsonnum")]
    pub value: f64,
    pub relation: Relation,
    #[serde(with = "crate::jsonnum")]
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        let pass = match relation {
            Relation::AtMost => value <= threshold,
            Relation::AtLeast => value >= threshold,
            Relation::Equal => value == threshold,
        };
        Self { name: name.into(), value, relation, threshold, pass }
    }
}

/// One family of samples (or one table of a deterministic sweep).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub parameters: BTreeMap<String, String>,
    /// Bucket (annulus count, tuple length, table index) of each sample.
    pub buckets: Vec<usize>,
    #[serde(with = "crate::jsonnum::vec")]
    pub values: Vec<f64>,
    #[serde(with = "crate::jsonnum")]
    pub sup: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bucket_maxima: Vec<BucketMax>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub series: String,
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub scenario: Scenario,
    pub seed: u64,
    /// The full configuration, so the report can be re-run from its own header.
    pub config: ScenarioConfig,
    pub samples: usize,
    pub series: Vec<Series>,
    pub checks: Vec<Check>,
    pub accuracy_failures: Vec<SampleFailure>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

impl RatioReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("report: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_json()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Writes a transform curve as CSV.
pub fn write_curve(curve: &radon_core::TransformCurveF64, path: &Path) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    curve.write_csv(&mut out).map_err(|e| HarnessError::io(path, e))?;
    std::io::Write::flush(&mut out).map_err(|e| HarnessError::io(path, e))
}
