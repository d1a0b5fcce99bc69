//! Report records. The JSON report carries everything, the CSV summary one
//! row per check.

use std::io::Write;
use std::path::Path;

use blaschke_core::green::GreenResidual;
use blaschke_core::nevan::{NormEstimate, VerificationReport};
use blaschke_core::{Zero, ZeroSet};
use serde::Serialize;

use crate::LabError;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: [&str; 6] = ["scenario", "mode", "lhs", "rhs", "ratio", "pass"];

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub config: Option<String>,
    pub seed: u64,
    pub rel_tol: f64,
    pub scenarios: Vec<ScenarioReport>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Rejected,
    Error,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScenarioReport {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub norms: Vec<NormRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub zero_sets: Vec<ZeroSetRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub green: Vec<GreenRecord>,
}

impl ScenarioReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            status: Status::Ok,
            message: None,
            checks: Vec::new(),
            norms: Vec::new(),
            zero_sets: Vec::new(),
            green: Vec::new(),
        }
    }

    pub fn failed(name: &str, status: Status, message: String) -> Self {
        Self {
            status,
            message: Some(message),
            ..Self::new(name)
        }
    }

    pub fn all_pass(&self) -> bool {
        self.status == Status::Ok && self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckRecord {
    pub mode: String,
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub constant_used: f64,
    pub pass: bool,
    pub converged: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl From<&VerificationReport> for CheckRecord {
    fn from(r: &VerificationReport) -> Self {
        Self {
            mode: r.check.name().into(),
            statement: r.statement.clone(),
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            constant_used: r.constant_used,
            pass: r.pass,
            converged: r.converged,
            diagnostics: r.diagnostics.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NormRecord {
    pub mode: String,
    pub value: f64,
    pub per_s: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<[f64; 2]>,
    pub error_estimate: f64,
    pub converged: bool,
}

impl NormRecord {
    pub fn new(mode: &str, n: &NormEstimate) -> Self {
        Self {
            mode: mode.into(),
            value: n.value,
            per_s: n.per_s.iter().map(|&(s, v)| [s, v]).collect(),
            parts: n.parts.map(|(a, b)| [a, b]),
            error_estimate: n.error_estimate,
            converged: n.converged,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ZeroRecord {
    pub point: [f64; 2],
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ZeroSetRecord {
    pub radius: f64,
    pub zeros: Vec<ZeroRecord>,
    pub certified_count: u32,
    pub unresolved_cells: usize,
}

fn zero_records(zeros: &[Zero]) -> Vec<ZeroRecord> {
    zeros
        .iter()
        .map(|z| ZeroRecord {
            point: [z.point.re, z.point.im],
            multiplicity: z.multiplicity,
        })
        .collect()
}

impl ZeroSetRecord {
    pub fn from_set(radius: f64, set: &ZeroSet) -> Self {
        Self {
            radius,
            zeros: zero_records(&set.zeros),
            certified_count: set.certified_count,
            unresolved_cells: set.unresolved.len(),
        }
    }

    /// A zero list taken as is, e.g. the stored zeros of a Blaschke product.
    pub fn from_list(radius: f64, zeros: &[Zero], complete: bool) -> Self {
        Self {
            radius,
            zeros: zero_records(zeros),
            certified_count: zeros.iter().map(|z| z.multiplicity).sum(),
            unresolved_cells: usize::from(!complete),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GreenRecord {
    pub s: f64,
    pub zero_sum: f64,
    pub integral: f64,
    pub integral_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<[f64; 2]>,
    pub integral_side: f64,
    pub residual: f64,
    pub budget: f64,
}

impl GreenRecord {
    pub fn new(s: f64, g: &GreenResidual) -> Self {
        Self {
            s,
            zero_sum: g.zero_sum,
            integral: g.integral.value,
            integral_error: g.integral.error_estimate,
            boundary: g.boundary.map(|(a, b)| [a, b]),
            integral_side: g.integral_side,
            residual: g.residual,
            budget: g.budget,
        }
    }
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.scenarios.iter().all(ScenarioReport::all_pass)
    }

    pub fn any_rejected(&self) -> bool {
        self.scenarios.iter().any(|s| s.status == Status::Rejected)
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| LabError::Schema(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Rejected or failed scenarios contribute one row with the status as mode
    /// and empty numbers.
    pub fn to_csv(&self) -> Result<Vec<u8>, LabError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| LabError::Schema(e.to_string());
        w.write_record(CSV_HEADER).map_err(err)?;
        for sc in &self.scenarios {
            match sc.status {
                Status::Ok => {
                    for c in &sc.checks {
                        w.write_record([
                            sc.name.clone(),
                            c.mode.clone(),
                            c.lhs.to_string(),
                            c.rhs.to_string(),
                            c.ratio.to_string(),
                            c.pass.to_string(),
                        ])
                        .map_err(err)?;
                    }
                }
                Status::Rejected | Status::Error => {
                    let tag = if sc.status == Status::Rejected {
                        "rejected"
                    } else {
                        "error"
                    };
                    w.write_record([sc.name.as_str(), tag, "", "", "", "false"])
                        .map_err(err)?;
                }
            }
        }
        w.into_inner().map_err(|e| LabError::Schema(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

pub const JSON_NAME: &str = "report.json";
pub const CSV_NAME: &str = "summary.csv";

pub fn write_outputs(report: &RunReport, dir: &Path, format: Format) -> Result<(), LabError> {
    std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let put = |name: &str, bytes: &[u8]| -> Result<(), LabError> {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).map_err(|e| LabError::io(&path, e))?;
        f.write_all(bytes).map_err(|e| LabError::io(&path, e))
    };
    if matches!(format, Format::Json | Format::Both) {
        put(JSON_NAME, report.to_json()?.as_bytes())?;
    }
    if matches!(format, Format::Csv | Format::Both) {
        put(CSV_NAME, &report.to_csv()?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(pass: bool) -> CheckRecord {
        CheckRecord {
            mode: "rational_p_positive".into(),
            statement: String::new(),
            lhs: 0.5625,
            rhs: 1.5,
            ratio: 0.375,
            constant_used: 1.0,
            pass,
            converged: true,
            diagnostics: Vec::new(),
        }
    }

    #[test]
    fn csv_rows() {
        let mut a = ScenarioReport::new("a");
        a.checks.push(check(true));
        let b = ScenarioReport::failed("b", Status::Rejected, "scenario rejected: x".into());
        let r = RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            command: "verify".into(),
            config: None,
            seed: 0,
            rel_tol: 1e-6,
            scenarios: vec![a, b],
        };
        let csv = String::from_utf8(r.to_csv().unwrap()).unwrap();
        assert_eq!(
            csv,
            "scenario,mode,lhs,rhs,ratio,pass\na,rational_p_positive,0.5625,1.5,0.375,true\nb,rejected,,,,false\n"
        );
        assert!(r.any_rejected() && !r.all_pass());
        assert!(r.to_json().unwrap().contains("\"schema_version\": 1"));
    }
}
