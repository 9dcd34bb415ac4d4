//! Thin CLI over the rmt-lab library: `simulate`, `theory`, `laws`,
//! `volterra`, and `report` subcommands driven by strict JSON configs.

use clap::{Args, Parser, Subcommand};
use rmt_lab::cli;
use rmt_lab::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rmt-lab", version, about = "Random-matrix spectral statistics laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV/JSON results.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Config overrides, repeatable: --set key=value (dotted paths).
    #[arg(long = "set")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated sampling experiment and write CLT reports.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Worker threads (overrides config and RMT_LAB_WORKERS).
        #[arg(long)]
        workers: Option<usize>,
        /// Base seed (overrides the config seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate a limiting variance formula.
    Theory {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate limiting densities and Fourier kernels.
    Laws {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the limiting Y-equation by marching and closed form.
    Volterra {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recompute reports from a previously written raw.csv.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Path to the raw replica CSV.
        #[arg(long)]
        raw: PathBuf,
    },
}

fn read_config(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(Error::Io)
}

fn run() -> Result<(), Error> {
    let cli_args = Cli::parse();
    match cli_args.command {
        Command::Simulate {
            common,
            workers,
            seed,
        } => {
            let text = read_config(&common.config)?;
            let cfg: cli::SimulateConfig = cli::parse_config(&text, &common.overrides)?;
            let out = cli::run_simulate(&cfg, &common.out, workers, seed)?;
            for report in &out.reports {
                println!(
                    "n={:<6} replicas={:<6} sample_var={:.6} theory={:.6} ks={}",
                    report.n,
                    report.replicas,
                    report.sample_variance,
                    report.theory_total,
                    report
                        .ks_statistic
                        .map_or(String::from("n/a"), |k| format!("{k:.4}")),
                );
            }
            Ok(())
        }
        Command::Theory { common } => {
            let text = read_config(&common.config)?;
            let cfg: cli::TheoryConfig = cli::parse_config(&text, &common.overrides)?;
            cli::run_theory(&cfg, &common.out)?;
            Ok(())
        }
        Command::Laws { common } => {
            let text = read_config(&common.config)?;
            let cfg: cli::LawsConfig = cli::parse_config(&text, &common.overrides)?;
            cli::run_laws(&cfg, &common.out)
        }
        Command::Volterra { common } => {
            let text = read_config(&common.config)?;
            let cfg: cli::VolterraConfig = cli::parse_config(&text, &common.overrides)?;
            let sup = cli::run_volterra(&cfg, &common.out)?;
            println!("sup |Y_solver - Y_closed| = {sup:.3e}");
            Ok(())
        }
        Command::Report { common, raw } => {
            let text = read_config(&common.config)?;
            let cfg: cli::SimulateConfig = cli::parse_config(&text, &common.overrides)?;
            cli::run_report(&cfg, &raw, &common.out)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Config(_) | Error::Argument(_) => 2,
                Error::Numeric(_) => 3,
                Error::Io(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}
