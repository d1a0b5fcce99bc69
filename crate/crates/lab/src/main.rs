use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blaschke_core::nevan::threshold_comparison;
use blaschke_lab::report::{write_outputs, Status};
use blaschke_lab::run::{calibration_from, exit_code, EXIT_IO, EXIT_PASS, EXIT_REJECTED};
use blaschke_lab::{run_config, Command, Config, Format, LabError, RunOptions, RunReport};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "blaschke-lab",
    version,
    about = "Numerical checks of weighted Blaschke-type conditions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Relative tolerance of every quadrature
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Cell budget per quadrature
    #[arg(long, global = true)]
    max_cells: Option<usize>,
    /// Points of the geometric s grid
    #[arg(long, global = true)]
    s_grid_size: Option<usize>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "both")]
    format: Format,
    /// Scenarios run concurrently (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Calibration file for `verify`, or the output of `calibrate`
    #[arg(long, global = true)]
    calibration: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Theorem modes of every scenario
    Verify { config: PathBuf },
    /// Zero location only
    Zeros { config: PathBuf },
    /// Norm estimation only
    Norm { config: PathBuf },
    /// Green identity residuals
    Green { config: PathBuf },
    /// Auxiliary lemma checks
    Lemmas { config: PathBuf },
    /// Freeze theorem constants as 1.5 times the largest observed ratio
    Calibrate { config: PathBuf },
    /// Which exponent threshold is weaker for the given p and q
    CompareThresholds {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
}

fn execute(cmd: Command, path: &Path, flags: &Flags) -> Result<i32, LabError> {
    let cfg = Config::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let opts = RunOptions {
        rel_tol: flags.rel_tol,
        max_cells: flags.max_cells,
        s_grid_size: flags.s_grid_size,
        seed: flags.seed,
        jobs: flags.jobs,
        calibration: flags.calibration.clone(),
    };
    let report = run_config(&cfg, base, cmd, &opts)?;
    print_summary(&report);
    write_outputs(&report, &flags.out_dir, flags.format)?;
    let code = exit_code(&report);
    if cmd == Command::Calibrate {
        if code == EXIT_REJECTED {
            return Ok(code);
        }
        let cal = calibration_from(&cfg, &report);
        let out = flags
            .calibration
            .clone()
            .unwrap_or_else(|| flags.out_dir.join("constants.toml"));
        std::fs::write(&out, cal.to_toml()?).map_err(|e| LabError::io(&out, e))?;
        println!("wrote {}", out.display());
        return Ok(if report.scenarios.iter().all(|s| s.status == Status::Ok) {
            EXIT_PASS
        } else {
            code
        });
    }
    Ok(code)
}

fn print_summary(report: &RunReport) {
    for sc in &report.scenarios {
        if let Some(msg) = &sc.message {
            eprintln!("{}: {msg}", sc.name);
        }
        for c in &sc.checks {
            println!(
                "{} {} ratio={} {}",
                sc.name,
                c.mode,
                c.ratio,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, path) = match &cli.command {
        Cmd::CompareThresholds { p, q } => {
            println!("{}", threshold_comparison(*p, *q).label());
            return ExitCode::SUCCESS;
        }
        Cmd::Verify { config } => (Command::Verify, config),
        Cmd::Zeros { config } => (Command::Zeros, config),
        Cmd::Norm { config } => (Command::Norm, config),
        Cmd::Green { config } => (Command::Green, config),
        Cmd::Lemmas { config } => (Command::Lemmas, config),
        Cmd::Calibrate { config } => (Command::Calibrate, config),
    };
    match execute(cmd, path, &cli.flags) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO as u8)
        }
    }
}
