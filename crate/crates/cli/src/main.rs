use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use tdme_cli::{builtins, emit_csv, emit_json, init_threads, load_config, run_scenario, scenarios, CliError};

#[derive(Parser)]
#[command(name = "tdme", version, about = "Time-deformed master equations: scenarios, witnesses and classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and emit its CSV/JSON record.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a configuration value, e.g. `alpha=0.7` or `engine=laplace`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Deformation witnesses.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Classify the original and deformed dynamics of a scenario.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Laplace-domain utilities.
    Laplace {
        #[command(subcommand)]
        op: LaplaceOp,
    },
}

#[derive(Subcommand)]
enum WitnessKind {
    /// Switch the generator on at t1 and test complete positivity.
    Step {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t1: f64,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Subcommand)]
enum LaplaceOp {
    /// Invert a builtin transform at time t.
    Invert {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        t: f64,
        /// Deform the transform as a Pauli eigenvalue before inverting.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn execute(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            let started = Instant::now();
            let record = run_scenario(&cfg)?;
            eprintln!("wall-clock: {:.3} s", started.elapsed().as_secs_f64());
            if let Some(path) = &cfg.output.csv {
                emit_csv(&record, path)?;
            }
            if let Some(path) = &cfg.output.json {
                emit_json(&record, path)?;
            }
            print_json(&record.summary());
            let failed = record.failed_oracles();
            if !failed.is_empty() {
                let names: Vec<String> = failed
                    .iter()
                    .map(|o| format!("{} ({:.3e} > {:.1e})", o.name, o.max_deviation, o.tolerance))
                    .collect();
                return Err(CliError::Oracle(names.join("; ")));
            }
            Ok(())
        }
        Command::Witness {
            kind: WitnessKind::Step { config, t1, overrides },
        } => {
            let cfg = load_config(&config, &overrides)?;
            print_json(&scenarios::step_witness(&cfg, t1)?);
            Ok(())
        }
        Command::Classify { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            print_json(&scenarios::classify_scenario(&cfg)?);
            Ok(())
        }
        Command::Laplace {
            op: LaplaceOp::Invert { expr, t, alpha },
        } => {
            print_json(&builtins::invert(&expr, t, alpha)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tdme: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
