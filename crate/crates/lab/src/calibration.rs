//! Frozen theorem constants.
//!
//! ```toml
//! schema_version = 1
//! source = "calibration"
//! seed = 2024
//! factor = 1.5
//!
//! [[constant]]
//! mode = "rational_p_positive"
//! family = "default"
//! constant_used = 0.61
//! max_ratio = 0.41
//! scenarios = ["single_zero", "two_zeros"]
//! ```
//!
//! A constant is `factor` times the largest ratio seen for its
//! `(mode, family)` over the calibration scenarios.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::report::RunReport;
use crate::LabError;

pub const FACTOR: f64 = 1.5;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub schema_version: u32,
    pub source: Option<String>,
    pub seed: u64,
    pub factor: f64,
    #[serde(default, rename = "constant")]
    pub constants: Vec<ConstantEntry>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConstantEntry {
    pub mode: String,
    pub family: String,
    pub constant_used: f64,
    pub max_ratio: f64,
    pub scenarios: Vec<String>,
}

impl Calibration {
    pub fn lookup(&self, mode: &str, family: &str) -> Option<f64> {
        self.constants
            .iter()
            .find(|c| c.mode == mode && c.family == family)
            .map(|c| c.constant_used)
    }

    /// Builds constants from a verify run whose checks carry raw ratios.
    /// `families` maps scenario names to their calibration family.
    pub fn from_report(report: &RunReport, families: &BTreeMap<String, String>) -> Self {
        let mut groups: BTreeMap<(String, String), (f64, Vec<String>)> = BTreeMap::new();
        for sc in &report.scenarios {
            let fam = families.get(&sc.name).cloned().unwrap_or_else(|| "default".into());
            for c in &sc.checks {
                let g = groups.entry((c.mode.clone(), fam.clone())).or_insert((0.0, Vec::new()));
                g.0 = g.0.max(c.ratio);
                g.1.push(sc.name.clone());
            }
        }
        let constants = groups
            .into_iter()
            .map(|((mode, family), (max_ratio, scenarios))| ConstantEntry {
                mode,
                family,
                // an all-zero family gives no scale; 1 keeps the constant usable
                constant_used: if max_ratio > 0.0 { FACTOR * max_ratio } else { 1.0 },
                max_ratio,
                scenarios,
            })
            .collect();
        Self {
            schema_version: 1,
            source: report.config.clone(),
            seed: report.seed,
            factor: FACTOR,
            constants,
        }
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        let c: Calibration = toml::from_str(text).map_err(|e| LabError::Schema(e.to_string()))?;
        if c.schema_version != 1 {
            return Err(LabError::Schema(format!(
                "unsupported calibration schema_version {}",
                c.schema_version
            )));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String, LabError> {
        toml::to_string(self).map_err(|e| LabError::Schema(e.to_string()))
    }
}
