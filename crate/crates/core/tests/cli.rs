use std::path::Path;
use std::process::{Command, Output};

use nlch::output::{RATE_HEADER, SUMMARY_HEADER, TIMESERIES_HEADER};

fn nlch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_config(dir: &Path, name: &str, config: &str, command: &str) -> Output {
    let cfg = dir.join(format!("{name}.cfg"));
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join(name);
    nlch(&[command, cfg.to_str().unwrap(), out.to_str().unwrap()])
}

fn column(csv: &str, index: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(index).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn zero_horizon_writes_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        dir.path(),
        "zero",
        "t_final = 0\nn_cells = 32\n",
        "simulate",
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let ts = std::fs::read_to_string(dir.path().join("zero/timeseries.csv")).unwrap();
    let lines: Vec<&str> = ts.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], TIMESERIES_HEADER);
    assert!(dir.path().join("zero/field_0.csv").exists());
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("zero/manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["config"]["n_cells"], "32");
    assert_eq!(
        manifest["config"].as_object().unwrap().len(),
        nlch::config::KEYS.len()
    );
}

#[test]
fn out_of_range_mean_exits_with_h4() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        dir.path(),
        "mean",
        "potential = double_obstacle\nic_amplitude = 1.5\nic_wavenumber = 0\n",
        "simulate",
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(H4)"), "{err}");
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, cfg, needle) in [
        ("unknown", "colour = red\n", "unknown key"),
        ("weak", "kernel_mass = 0.5\n", "(H3)"),
        ("negative", "kernel_mass = -1\n", "(H2)"),
        ("log", "potential = logarithmic\ntheta = 2\n", "theta"),
    ] {
        let out = run_with_config(dir.path(), name, cfg, "simulate");
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }
}

#[test]
fn default_experiment_conserves_mass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(dir.path(), "default", "", "simulate");
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let ts = std::fs::read_to_string(dir.path().join("default/timeseries.csv")).unwrap();
    let mass = column(&ts, 2);
    assert_eq!(mass.len(), 501);
    for m in &mass {
        assert!((m - mass[0]).abs() <= 1e-12 * (1.0 + mass[0].abs()));
    }
    for step in [0, 50, 250, 500] {
        let field =
            std::fs::read_to_string(dir.path().join(format!("default/field_{step}.csv"))).unwrap();
        assert!(field.starts_with("x,u,mu\n"));
        assert_eq!(field.lines().count(), 257);
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_cells = 48\nt_final = 0.01\noutput_every = 20\npotential = logarithmic\n";
    run_with_config(dir.path(), "a", cfg, "simulate");
    run_with_config(dir.path(), "b", cfg, "simulate");
    for file in [
        "timeseries.csv",
        "field_0.csv",
        "field_60.csv",
        "field_100.csv",
    ] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn rate_study_writes_csvs_and_reports_pairwise_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_cells = 64\nlambda_sweep = 0.1, 0.01, 0.001\n";
    let out = run_with_config(dir.path(), "rate", cfg, "rate-study");
    let rate = std::fs::read_to_string(dir.path().join("rate/rate.csv")).unwrap();
    let summary = std::fs::read_to_string(dir.path().join("rate/summary.csv")).unwrap();
    assert!(rate.starts_with(&format!("{RATE_HEADER}\n")));
    assert_eq!(rate.lines().count(), 4);
    assert!(rate.lines().last().unwrap().ends_with(','));
    assert!(summary.starts_with(&format!("{SUMMARY_HEADER}\n")));
    let pass: bool = summary
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }));
}

#[test]
fn thread_cap_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "n_cells = 32\nt_final = 0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nlch"))
        .args([
            "simulate",
            cfg.to_str().unwrap(),
            dir.path().join("o").to_str().unwrap(),
        ])
        .env("NLCH_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_suites_and_fault_injection() {
    let out = nlch(&["check", "spectral"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8_lossy(&out.stdout);
    let residual_line = table
        .lines()
        .find(|l| l.contains("eigen-residual"))
        .unwrap();
    assert!(residual_line.starts_with("PASS"));

    assert_eq!(nlch(&["check", "operator"]).status.code(), Some(0));

    let out = nlch(&["check", "operator", "--inject-asymmetry", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("failed invariant: B symmetric"), "{err}");
}

#[test]
fn graph_suite_passes() {
    let out = nlch(&["check", "graphs"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
