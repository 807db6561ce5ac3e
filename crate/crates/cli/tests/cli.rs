//! Exit codes and outputs of the `halting` binary.

use std::path::Path;
use std::process::{Command, Output};

fn halting(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halting"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.conf");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn successful_run_writes_outputs_and_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let config = write_config(
        dir.path(),
        &format!(
            "algorithm = jacobi\nensembles = GOE, BE\nn = 6\nepsilon = 1e-8\ntrials = 40\nseed = 9\nout = {}\n",
            out_dir.display()
        ),
    );
    let out = halting(&["run", "--config", &config]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("KS(GOE, BE)"), "{stdout}");
    for file in ["GOE.csv", "BE.csv", "summary.json", "histogram.svg"] {
        assert!(out_dir.join(file).is_file(), "missing {file}");
    }

    let check = halting(&["check", "--config", &config, &out_dir.display().to_string()]);
    assert_eq!(code(&check), 0, "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn check_detects_edited_records() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let config = write_config(
        dir.path(),
        &format!(
            "algorithm = curie-weiss\nensembles = o, u\nn = 10\ntrials = 30\nseed = 2\nout = {}\n",
            out_dir.display()
        ),
    );
    assert_eq!(code(&halting(&["run", "-c", &config])), 0);
    let csv = out_dir.join("o.csv");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let fields: Vec<&str> = lines[1].split(',').collect();
    lines[1] = format!("{},{},{}", fields[0], 1e6, fields[2..].join(","));
    std::fs::write(&csv, lines.join("\n") + "\n").unwrap();
    let check = halting(&["check", "--config", &config, &out_dir.display().to_string()]);
    assert_eq!(code(&check), 1);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "algorithm = jacobi\nensembles = GOE, BE\nn = 5\nepsilon = 1e-8\ntrials = 10\n");
    let out = halting(&["run", "-c", &config, "--trials", "12", "--set", "seed=4"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("12 trials"));
}

#[test]
fn invalid_config_exits_with_2() {
    for args in [
        &["run", "--algorithm", "jacobi", "--ensemble", "GUE", "--n", "5", "--trials", "10"][..],
        &["run", "--algorithm", "qr", "--ensemble", "GOE", "--n", "5", "--trials", "10", "--set", "colour=blue"],
        &["run", "--algorithm", "curie-weiss", "--ensemble", "o", "--n", "7", "--trials", "10"],
        &["run", "--config", "/nonexistent/run.conf"],
    ] {
        let out = halting(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn degraded_batch_exits_with_3() {
    let out = halting(&[
        "run",
        "--algorithm",
        "jacobi",
        "--ensemble",
        "GOE",
        "--n",
        "8",
        "--epsilon",
        "1e-12",
        "--trials",
        "20",
        "--max-iter",
        "2",
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degraded"));
}
