//! `hamreg`: run, sweep, check and validate scenario files.
//!
//! Exit codes: 0 when everything ran and every applicable check passed,
//! 1 on a failed check or a runtime failure, 2 on a configuration error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use hamreg::output::write_ndjson;
use hamreg::sweep::{Axis, Comparison, SweepSpec};
use hamreg::{check_suite, parse_config, run, run_sweep, write_outputs, RunOutcome, ScenarioConfig, SweepError};

#[derive(Parser)]
#[command(name = "hamreg", version, about = "Hamiltonian-regularized conservation law solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and write its diagnostics and snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `[output] dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a ladder of scenarios along one axis and compare them.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// ell, epsilon or n.
        #[arg(long)]
        axis: String,
        /// Comma-separated ladder values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// entropy, ghs or self.
        #[arg(long, default_value = "self")]
        compare: String,
        /// Measurement interval `a,b`; defaults to the central half.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        window: Option<Vec<f64>>,
        /// Reference resolution for entropy/ghs comparisons.
        #[arg(long)]
        reference_n: Option<usize>,
        /// Directory for `sweep.ndjson`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario and evaluate every applicable diagnostic check.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

enum Failure {
    Config(String),
    Check,
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Runtime(e)
    }
}

fn load(path: &Path) -> Result<ScenarioConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn cmd_run(config: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = load(config)?;
    let traj = run(&cfg).context("run failed")?;
    let last = traj.records.last().expect("trajectory has an initial record");
    println!(
        "steps {}  t {}  energy {:.6e}  mean {:.6e}",
        traj.steps, last.t, last.energy, last.mean
    );
    if let Some(dir) = out.or_else(|| cfg.output.dir.clone()) {
        for p in write_outputs(&traj, &dir, &cfg.output).context("writing outputs")? {
            println!("wrote {}", p.display());
        }
    }
    match &traj.outcome {
        RunOutcome::Completed => Ok(()),
        RunOutcome::BlowUp { t, reason } if cfg.epsilon == 0.0 => {
            println!("breakdown at t = {t}: {reason}");
            Ok(())
        }
        RunOutcome::BlowUp { t, reason } => {
            println!("FAIL cut-off run stopped at t = {t}: {reason}");
            Err(Failure::Check)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: &Path,
    axis: &str,
    values: Vec<f64>,
    compare: &str,
    window: Option<Vec<f64>>,
    reference_n: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let base = load(config)?;
    let axis = Axis::parse(axis).ok_or_else(|| Failure::Config(format!("unknown axis `{axis}` (ell, epsilon, n)")))?;
    let comparison = Comparison::parse(compare)
        .ok_or_else(|| Failure::Config(format!("unknown comparison `{compare}` (entropy, ghs, self)")))?;
    let mut spec = SweepSpec::new(base, axis, values, comparison);
    spec.window = window.map(|w| (w[0], w[1]));
    spec.reference_n = reference_n;
    let report = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e @ (SweepError::TooFewValues(_) | SweepError::NotMonotone | SweepError::BadValue { .. })) => {
            return Err(Failure::Config(e.to_string()))
        }
        Err(e) => return Err(Failure::Runtime(e.into())),
    };
    println!(
        "{:>12} {:>12} {:>12} {:>12} {:>8}",
        axis.name(),
        "L1",
        "Linf",
        "H1",
        "order"
    );
    // the finest rung of a self-convergence ladder has nothing to compare to
    let dist = |v: f64| {
        if v.is_finite() {
            format!("{v:.4e}")
        } else {
            "-".to_string()
        }
    };
    for row in &report.rows {
        let order = row.order.map_or("-".to_string(), |o| format!("{o:.3}"));
        println!(
            "{:>12} {:>12} {:>12} {:>12} {:>8}",
            row.value,
            dist(row.l1),
            dist(row.linf),
            dist(row.h1),
            order
        );
    }
    if let Some(dir) = out {
        let path = dir.join("sweep.ndjson");
        write_ndjson(&path, &report.rows).context("writing sweep report")?;
        println!("wrote {}", path.display());
    }
    if report.decreasing {
        println!("PASS distances decrease along the ladder");
        Ok(())
    } else {
        println!("FAIL distances do not decrease along the ladder");
        Err(Failure::Check)
    }
}

fn cmd_check(config: &Path) -> Result<(), Failure> {
    let cfg = load(config)?;
    let traj = run(&cfg).context("run failed")?;
    let mut failed = false;
    for c in check_suite(&traj) {
        let tag = match c.pass {
            Some(true) => "PASS",
            Some(false) => {
                failed = true;
                "FAIL"
            }
            None => "SKIP",
        };
        println!("{tag} {:<11} {}", c.name, c.detail);
    }
    if failed {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Sweep {
            config,
            axis,
            values,
            compare,
            window,
            reference_n,
            out,
        } => cmd_sweep(&config, &axis, values, &compare, window, reference_n, out),
        Command::Check { config } => cmd_check(&config),
        Command::Validate { config } => load(&config).map(|_| println!("ok")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
