//! Running a config: build scenarios, fan out over worker threads, collect
//! reports in config order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use blaschke_core::QuadratureConfig;

use crate::calibration::Calibration;
use crate::config::Config;
use crate::report::{RunReport, ScenarioReport, Status, REPORT_SCHEMA_VERSION};
use crate::scenario::Scenario;
use crate::suites;
use crate::LabError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Default relative tolerance of the lab's quadratures.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Zeros,
    Norm,
    Green,
    Lemmas,
    Calibrate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Zeros => "zeros",
            Command::Norm => "norm",
            Command::Green => "green",
            Command::Lemmas => "lemmas",
            Command::Calibrate => "calibrate",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub rel_tol: Option<f64>,
    pub max_cells: Option<usize>,
    pub s_grid_size: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub calibration: Option<PathBuf>,
}

pub fn quadrature(cfg: &Config, opts: &RunOptions) -> Result<QuadratureConfig, LabError> {
    let mut q = QuadratureConfig {
        rel_tol: DEFAULT_REL_TOL,
        ..QuadratureConfig::default()
    };
    if let Some(v) = opts.rel_tol.or(cfg.quadrature.rel_tol) {
        q.rel_tol = v;
    }
    if let Some(v) = cfg.quadrature.abs_tol {
        q.abs_tol = v;
    }
    if let Some(v) = opts.max_cells.or(cfg.quadrature.max_cells) {
        q.max_cells = v;
    }
    q.validate().map_err(|e| LabError::Schema(e.to_string()))?;
    Ok(q)
}

/// `f` over `items` on up to `jobs` threads; results keep the input order.
pub fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(i, &items[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("worker finished"))
        .collect()
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// The calibration named on the command line, else the config's own entry
/// resolved against `base_dir`.
pub fn load_calibration(cfg: &Config, base_dir: &Path, opts: &RunOptions) -> Result<Option<Calibration>, LabError> {
    let path = match (&opts.calibration, &cfg.calibration) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => base_dir.join(p),
        (None, None) => return Ok(None),
    };
    Calibration::load(&path).map(Some)
}

pub fn run_config(cfg: &Config, base_dir: &Path, command: Command, opts: &RunOptions) -> Result<RunReport, LabError> {
    let q = quadrature(cfg, opts)?;
    let seed = opts.seed.unwrap_or(cfg.seed);
    let cal = match command {
        Command::Verify => load_calibration(cfg, base_dir, opts)?,
        _ => None,
    };
    let scenarios = par_map(&cfg.scenarios, opts.jobs.unwrap_or_else(default_jobs), |i, sc| {
        let built = match Scenario::build(sc, i, seed, opts.s_grid_size) {
            Ok(b) => b,
            Err(e) => return ScenarioReport::failed(&sc.name, Status::Rejected, e.to_string()),
        };
        match command {
            Command::Verify => suites::verify(&built, cal.as_ref(), &q),
            Command::Calibrate => suites::verify(&built, None, &q),
            Command::Zeros => suites::zeros(&built, &q),
            Command::Norm => suites::norm(&built, &q),
            Command::Green => suites::green(&built, &q),
            Command::Lemmas => suites::lemmas(&built, &q),
        }
    });
    Ok(RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        command: command.name().into(),
        config: cfg.name.clone(),
        seed,
        rel_tol: q.rel_tol,
        scenarios,
    })
}

/// Constants from a calibrate run.
pub fn calibration_from(cfg: &Config, report: &RunReport) -> Calibration {
    let families: BTreeMap<String, String> = cfg
        .scenarios
        .iter()
        .map(|s| (s.name.clone(), s.family.clone().unwrap_or_else(|| "default".into())))
        .collect();
    Calibration::from_report(report, &families)
}

pub fn exit_code(report: &RunReport) -> i32 {
    if report.any_rejected() {
        EXIT_REJECTED
    } else if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u64> = (0..37).collect();
        for jobs in [1, 3, 64] {
            let out = par_map(&items, jobs, |i, &x| (i as u64) * 100 + x);
            assert_eq!(out, items.iter().map(|&x| x * 101).collect::<Vec<_>>());
        }
        assert!(par_map(&Vec::<u8>::new(), 4, |_, _| 0).is_empty());
    }

    #[test]
    fn empty_config_passes() {
        let cfg = Config::parse("schema_version = 1").unwrap();
        let rep = run_config(&cfg, Path::new("."), Command::Verify, &RunOptions::default()).unwrap();
        assert_eq!(exit_code(&rep), EXIT_PASS);
        assert_eq!(rep.to_csv().unwrap(), b"scenario,mode,lhs,rhs,ratio,pass\n");
    }

    #[test]
    fn rejected_hypothesis() {
        let cfg = Config::parse(
            r#"
schema_version = 1
[[scenario]]
name = "bad"
p = 1.0
modes = ["rational_p_positive"]
function = { family = "blaschke", zeros = [[0.5, 0.0]] }
weight = { angles = [0.0], exponents = [-1.0] }
"#,
        )
        .unwrap();
        let rep = run_config(&cfg, Path::new("."), Command::Verify, &RunOptions::default()).unwrap();
        assert_eq!(exit_code(&rep), EXIT_REJECTED);
        let msg = rep.scenarios[0].message.as_deref().unwrap();
        assert!(msg.contains("hypothesis qⱼ > −p/4 violated"), "{msg}");
    }
}
