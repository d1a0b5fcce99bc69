//! Scenario files. TOML, angles in radians, complex numbers as `[re, im]`.
//!
//! ```toml
//! schema_version = 1
//! seed = 7
//! calibration = "constants.toml"
//!
//! [quadrature]
//! rel_tol = 1e-6
//!
//! [[scenario]]
//! name = "single_zero"
//! p = 1.0
//! modes = ["rational_p_positive"]
//! function = { family = "blaschke", zeros = [[0.5, 0.0]] }
//! weight = { angles = [0.0], exponents = [1.0] }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::LabError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Calibration file, relative to the config file.
    #[serde(default)]
    pub calibration: Option<String>,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_cells: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Key under which theorem constants are calibrated; defaults to "default".
    #[serde(default)]
    pub family: Option<String>,
    pub function: FunctionConfig,
    #[serde(default)]
    pub weight: WeightConfig,
    #[serde(default)]
    pub closed_set: Option<ClosedSetConfig>,
    pub p: f64,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub alpha_e: Option<f64>,
    #[serde(default)]
    pub s_grid_size: Option<usize>,
    #[serde(default)]
    pub zero_radius: Option<f64>,
    #[serde(default)]
    pub modes: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub green: Option<GreenConfig>,
    #[serde(default)]
    pub lemmas: Option<LemmaConfig>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    #[serde(default)]
    pub angles: Vec<f64>,
    #[serde(default)]
    pub exponents: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ClosedSetConfig {
    /// `[start, end]` angle pairs, counter-clockwise.
    pub arcs: Vec<[f64; 2]>,
    pub q: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionConfig {
    Blaschke {
        zeros: Vec<[f64; 2]>,
        #[serde(default = "yes")]
        normalize: bool,
    },
    RandomBlaschke {
        degree: usize,
        #[serde(default = "default_separation")]
        min_separation: f64,
        #[serde(default = "default_max_radius")]
        max_radius: f64,
        #[serde(default = "yes")]
        normalize: bool,
    },
    /// `exp(D w)`; the bound's weight defaults to the scenario weight.
    Growth {
        d: f64,
        #[serde(default)]
        p: f64,
        #[serde(default = "default_zeta")]
        zeta: [f64; 2],
        /// Rotates the exponent: `exp(D e^{i phase} w)`
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        weight: Option<WeightConfig>,
        #[serde(default = "yes")]
        normalize: bool,
    },
    Constant {
        value: [f64; 2],
    },
    Product {
        factors: Vec<FunctionConfig>,
        #[serde(default = "yes")]
        renormalize: bool,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GreenConfig {
    #[serde(default = "default_green_s")]
    pub s: Vec<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LemmaConfig {
    pub delta_exp: Option<f64>,
    pub u: Option<f64>,
    pub s: Option<f64>,
    pub t0: Option<f64>,
    pub halfdisc_samples: Option<usize>,
    pub continuity_t: Option<f64>,
}

fn yes() -> bool {
    true
}

fn default_separation() -> f64 {
    0.05
}

fn default_max_radius() -> f64 {
    0.9
}

fn default_zeta() -> [f64; 2] {
    [-1.0, 0.0]
}

fn default_green_s() -> Vec<f64> {
    vec![0.7, 0.9]
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let cfg: Config = toml::from_str(text).map_err(|e| LabError::Schema(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(LabError::Schema(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for sc in &cfg.scenarios {
            if !seen.insert(sc.name.as_str()) {
                return Err(LabError::Schema(format!("duplicate scenario name {:?}", sc.name)));
            }
            for m in &sc.modes {
                if blaschke_core::nevan::TheoremMode::from_name(m).is_none() {
                    return Err(LabError::Schema(format!("scenario {:?}: unknown mode {m:?}", sc.name)));
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inline_and_nested_tables() {
        let cfg = Config::parse(
            r#"
schema_version = 1
seed = 3

[[scenario]]
name = "a"
p = 1.0
modes = ["rational_p_positive"]
function = { family = "blaschke", zeros = [[0.5, 0.0]] }
weight = { angles = [0.0], exponents = [1.0] }

[[scenario]]
name = "b"
p = 0.0
[scenario.function]
family = "product"
factors = [{ family = "growth", d = 1.0 }, { family = "random_blaschke", degree = 3 }]
[scenario.closed_set]
arcs = [[1.0, 2.0]]
q = 0.5
"#,
        )
        .unwrap();
        assert_eq!(cfg.scenarios.len(), 2);
        assert_eq!(
            cfg.scenarios[0].function,
            FunctionConfig::Blaschke {
                zeros: vec![[0.5, 0.0]],
                normalize: true
            }
        );
        let FunctionConfig::Product { factors, renormalize } = &cfg.scenarios[1].function else {
            panic!()
        };
        assert!(*renormalize && factors.len() == 2);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(Config::parse("schema_version = 2"), Err(LabError::Schema(_))));
        assert!(matches!(Config::parse("seed = 1"), Err(LabError::Schema(_))));
        let bad_mode = r#"
schema_version = 1
[[scenario]]
name = "a"
p = 1.0
modes = ["nope"]
function = { family = "constant", value = [1.0, 0.0] }
"#;
        assert!(matches!(Config::parse(bad_mode), Err(LabError::Schema(_))));
        let empty = Config::parse("schema_version = 1").unwrap();
        assert!(empty.scenarios.is_empty());
    }
}
