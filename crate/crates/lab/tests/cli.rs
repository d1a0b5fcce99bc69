use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blaschke-lab"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out-dir").arg(out).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn compare_thresholds() {
    let out = bin()
        .args(["compare-thresholds", "--p", "2", "--q", "-0.3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ours_better");
    let out = bin()
        .args(["compare-thresholds", "--p", "0", "--q", "0.5"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "identical");
}

#[test]
fn empty_config_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.toml", "schema_version = 1\n");
    let out = run(&["verify", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv, "scenario,mode,lhs,rhs,ratio,pass\n");
}

#[test]
fn violated_hypothesis_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        r#"schema_version = 1
[[scenario]]
name = "pole"
p = 1.0
modes = ["rational_p_positive"]
function = { family = "blaschke", zeros = [[0.5, 0.0]] }
weight = { angles = [0.0], exponents = [-1.0] }
"#,
    );
    let out = run(&["verify", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis qⱼ > −p/4 violated"));
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(csv.contains("pole,rejected,,,,false"), "{csv}");
}

#[test]
fn schema_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v9.toml", "schema_version = 9\n");
    assert_eq!(
        run(&["verify", cfg.to_str().unwrap()], dir.path()).status.code(),
        Some(4)
    );
    let cfg = write(dir.path(), "junk.toml", "schema_version = [\n");
    assert_eq!(
        run(&["verify", cfg.to_str().unwrap()], dir.path()).status.code(),
        Some(4)
    );
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        run(&["verify", missing.to_str().unwrap()], dir.path()).status.code(),
        Some(4)
    );
}

#[test]
fn csv_only_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("default.toml");
    let out = run(&["zeros", cfg.to_str().unwrap(), "--format", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("summary.csv").exists());
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn verify_default_is_repeatable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = configs().join("default.toml");
    let cfg = cfg.to_str().unwrap();
    assert_eq!(run(&["verify", cfg], a.path()).status.code(), Some(0));
    assert_eq!(run(&["verify", cfg, "--jobs", "3"], b.path()).status.code(), Some(0));
    for name in ["report.json", "summary.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn calibrate_writes_constants() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("calibration.toml");
    let dest = dir.path().join("constants.toml");
    let out = bin()
        .args(["calibrate", cfg.to_str().unwrap(), "--out-dir"])
        .arg(dir.path())
        .arg("--calibration")
        .arg(&dest)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let fresh = std::fs::read_to_string(&dest).unwrap();
    let frozen = std::fs::read_to_string(configs().join("constants.toml")).unwrap();
    assert_eq!(fresh, frozen);
}
