use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = "flux = burgers

[ic]
name = gaussian
a = 0.5
x0 = 0
sigma = 0.7

[grid]
x_min = -3
x_max = 3
n = 128

[solver]
ell = 0.3
epsilon = 0.2
t_final = 0.3
snapshot_every = 10
";

fn hamreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamreg")).args(args).output().unwrap()
}

fn write_cfg(dir: &Path, text: &str) -> String {
    let p = dir.join("s.cfg");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn validate_accepts_a_good_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = hamreg(&["validate", "--config", &write_cfg(dir.path(), SMALL)]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "ok");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SMALL.replace("epsilon = 0.2", "epsilon = -1");
    let o = hamreg(&["validate", "--config", &write_cfg(dir.path(), &bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("epsilon"));
    let missing = dir.path().join("nope.cfg");
    assert_eq!(code(&hamreg(&["run", "--config", missing.to_str().unwrap()])), 2);
}

#[test]
fn run_writes_the_requested_sinks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{SMALL}\n[output]\ncsv = true\nndjson = true\n"));
    let out = dir.path().join("out");
    let o = hamreg(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("diagnostics.csv").is_file());
    assert!(out.join("snapshots.ndjson").is_file());
}

#[test]
fn check_reports_every_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let o = hamreg(&["check", "--config", &write_cfg(dir.path(), SMALL)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["completion", "mean", "oleinik", "tv_bound", "energy"] {
        assert!(text.lines().any(|l| l.contains(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn sweep_ladder_must_be_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), SMALL);
    let o = hamreg(&["sweep", "--config", &cfg, "--axis", "n", "--values", "128,64,256"]);
    assert_eq!(code(&o), 2);
    let o = hamreg(&["sweep", "--config", &cfg, "--axis", "width", "--values", "1,2,3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn self_convergence_sweep_writes_ndjson() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), SMALL);
    let out = dir.path().join("sweep");
    let o = hamreg(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "n",
        "--values",
        "64,128,256",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let rows = fs::read_to_string(out.join("sweep.ndjson")).unwrap();
    assert_eq!(rows.lines().count(), 3);
}
