use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nlch::checks::{self, CheckOutcome};
use nlch::config::RunConfig;
use nlch::harness::{self, SweepOptions};
use nlch::output::{self, RunManifest};
use nlch::{Error, Execution, Problem};

#[derive(Parser)]
#[command(
    name = "nlch",
    version,
    about = "Yosida-regularized nonlocal Cahn-Hilliard solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write timeseries.csv, field_<step>.csv and manifest.json.
    Simulate { config: PathBuf, out_dir: PathBuf },
    /// Run the lambda sweep and write rate.csv, summary.csv and manifest.json.
    RateStudy { config: PathBuf, out_dir: PathBuf },
    /// Run a seeded property suite and print a pass/fail table.
    Check {
        what: Suite,
        #[arg(long, default_value_t = checks::DEFAULT_SEED)]
        seed: u64,
        /// Perturb one off-diagonal kernel entry before checking (test hook).
        #[arg(long, hide = true)]
        inject_asymmetry: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Graphs,
    Operator,
    Spectral,
}

enum Failure {
    Check,
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Run(e.to_string())
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var("NLCH_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Config(format!(
                "NLCH_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn prepare(config: &Path, out_dir: &Path) -> Result<RunConfig, Failure> {
    let cfg = RunConfig::load(config).map_err(|e| match e {
        Error::Io(io) => Failure::Config(format!("{}: {io}", config.display())),
        other => other.into(),
    })?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Failure::Run(format!("{}: {e}", out_dir.display())))?;
    Ok(cfg)
}

fn manifest(command: &str, cfg: &RunConfig, started: f64) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        config: cfg.resolved(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: output::unix_time(),
    }
}

fn cmd_simulate(config: &Path, out_dir: &Path) -> Result<(), Failure> {
    let started = output::unix_time();
    let cfg = prepare(config, out_dir)?;
    let threads = threads_from_env()?;
    let problem = Problem::new(cfg.sim_config()?)?;
    let traj = nlch::par::with_threads(threads, || problem.simulate())?;
    write(
        &out_dir.join("timeseries.csv"),
        &output::timeseries_csv(&traj.diagnostics),
    )?;
    for (step, u) in &traj.snapshots {
        let mu = problem.chemical_potential(u)?;
        write(
            &out_dir.join(format!("field_{step}.csv")),
            &output::field_csv(u, &mu),
        )?;
    }
    manifest("simulate", &cfg, started)
        .write(&out_dir.join("manifest.json"))
        .map_err(Failure::from)
}

fn cmd_rate_study(config: &Path, out_dir: &Path) -> Result<(), Failure> {
    let started = output::unix_time();
    let cfg = prepare(config, out_dir)?;
    let opts = SweepOptions {
        exec: Execution::default(),
        threads: threads_from_env()?,
    };
    let result = harness::run_sweep(
        &cfg.sim_config()?,
        &cfg.lambda_sweep,
        cfg.resolved_lambda_ref(),
        opts,
    )?;
    let pairwise = harness::pairwise_bound_check(&result);
    let pass = result.rate_ok() && pairwise.is_ok();
    write(&out_dir.join("rate.csv"), &output::rate_csv(&result))?;
    write(
        &out_dir.join("summary.csv"),
        &output::summary_csv(result.fit, pass),
    )?;
    manifest("rate-study", &cfg, started).write(&out_dir.join("manifest.json"))?;
    match result.fit {
        Some(f) => println!("slope {:.4}  r^2 {:.4}", f.slope, f.r_squared),
        None => println!("slope unavailable"),
    }
    println!("pairwise spread {:.3}", pairwise.spread());
    if pass {
        Ok(())
    } else {
        if !result.rate_ok() {
            eprintln!("rate check failed");
        }
        if !pairwise.is_ok() {
            eprintln!(
                "pairwise check failed: spread {:.3} > {}",
                pairwise.spread(),
                harness::MAX_PAIRWISE_SPREAD
            );
        }
        Err(Failure::Check)
    }
}

fn cmd_check(what: Suite, seed: u64, asymmetry: Option<f64>) -> Result<(), Failure> {
    let outcomes: Vec<CheckOutcome> = match what {
        Suite::Graphs => {
            let mut v = checks::yosida_oracle_suite(seed, 100, Execution::default());
            v.extend(checks::graph_suite(seed, 1000));
            v
        }
        Suite::Operator => {
            let mut op = checks::default_operator();
            if let Some(eps) = asymmetry {
                op.inject_asymmetry(eps);
            }
            checks::operator_suite(&op, seed, 20)
        }
        Suite::Spectral => checks::spectral_suite(64, seed, 20),
    };
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<&CheckOutcome> = outcomes.iter().filter(|o| !o.passed).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        for o in failed {
            eprintln!("failed invariant: {}", o.name);
        }
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { config, out_dir } => cmd_simulate(config, out_dir),
        Command::RateStudy { config, out_dir } => cmd_rate_study(config, out_dir),
        Command::Check {
            what,
            seed,
            inject_asymmetry,
        } => cmd_check(*what, *seed, *inject_asymmetry),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
