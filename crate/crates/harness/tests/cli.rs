use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_honeycomb-harness"))
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("honeycomb-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().arg("--output-dir").arg(dir).args(args).output().unwrap()
}

#[test]
fn anyon_suite_passes_and_is_reproducible() {
    let (a, b) = (scratch("anyons-a"), scratch("anyons-b"));
    let out = run_in(&a, &["anyons"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(run_in(&b, &["anyons"]).status.code(), Some(0));
    let first = std::fs::read(a.join("anyons.json")).unwrap();
    let second = std::fs::read(b.join("anyons.json")).unwrap();
    let strip = |v: &[u8]| String::from_utf8_lossy(v).replace(&a.display().to_string(), "").replace(&b.display().to_string(), "");
    assert_eq!(strip(&first), strip(&second));
    for d in [a, b] {
        std::fs::remove_dir_all(d).unwrap();
    }
}

#[test]
fn small_sweep_writes_datasets_and_plots() {
    let dir = scratch("sweep");
    let out = run_in(&dir, &["--set", "lattice.nx=2", "--set", "lattice.ny=2", "gap-sweep", "--points", "3"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("sweep_gaps_positive"), "{stdout}");
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let csv = std::fs::read_to_string(dir.join("gap_sweep.csv")).unwrap();
    assert!(csv.starts_with("# honeycomb-anyons gap-sweep v"));
    assert_eq!(csv.lines().count(), 2 + 9);
    let plots = run_in(&dir, &["plots"]);
    assert_eq!(plots.status.code(), Some(0));
    assert!(dir.join("plot_gap_sweep.py").is_file());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = scratch("transport");
    let out = run_in(&dir, &["transport", "--ramp-times", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL transport_adiabatic_success"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = scratch("config");
    assert_eq!(run_in(&dir, &["--set", "sweep.nonsense=1", "anyons"]).status.code(), Some(2));
    assert_eq!(run_in(&dir, &["--set", "sweep.points=0", "gap-sweep"]).status.code(), Some(2));
    assert_eq!(run_in(&dir, &["plots"]).status.code(), Some(2));
    assert_eq!(run_in(&dir, &["plots", "missing.csv"]).status.code(), Some(2));
    assert_eq!(bin().arg("no-such-command").output().unwrap().status.code(), Some(2));
    let _ = std::fs::remove_dir_all(dir);
}
