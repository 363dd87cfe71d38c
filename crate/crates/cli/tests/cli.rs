use std::path::Path;
use std::process::{Command, Output};

fn rotmhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotmhd")).args(args).output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.cfg");
    std::fs::write(
        &path,
        "grid.n = 16, 16, 8\nphys.nu = 0.1\nphys.nu_prime = 0.1\nsweep.eps_list = 0.1\ntime.T = 0.02\ntime.dt = 0.005\nseed = 3\n",
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn missing_config_names_the_path() {
    let out = rotmhd(&["sweep", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("/nonexistent/run.cfg"), "{}", text(&out.stderr));
}

#[test]
fn bad_key_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "grid.nn = 8\n").unwrap();
    let out = rotmhd(&["besov-bench", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("grid.nn"));
}

#[test]
fn report_of_an_empty_directory_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotmhd(&["report", "--in", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn besov_bench_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let run = dir.path().join("bench");
    let out = rotmhd(&["besov-bench", "--config", &cfg, "--out", run.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.starts_with("besov-bench "));
    assert!(stdout.contains("PASS"));
    assert!(run.join("norm_report.csv").exists() && run.join("manifest.json").exists());

    let out = rotmhd(&["single-run", "--config", &cfg, "--out", dir.path().join("single").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));

    let out = rotmhd(&["report", "--in", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = text(&out.stdout);
    assert!(report.contains("besov-bench") && report.contains("single-run"), "{report}");
}

#[test]
fn seed_override_changes_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let hash = |seed: &str| {
        let out = rotmhd(&["besov-bench", "--config", &cfg, "--out", dir.path().join(seed).to_str().unwrap(), "--seed", seed]);
        text(&out.stdout).lines().next().unwrap().split_whitespace().nth(1).unwrap().to_string()
    };
    assert_ne!(hash("1"), hash("2"));
    assert_eq!(hash("1"), hash("1"));
}
