//! Command-line interface.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::experiments::describe;
use crate::output::write_all;
use crate::runner::Runner;
use crate::LabError;

#[derive(Debug, Parser)]
#[command(
    name = "sle-lab",
    version,
    about = "Simulate SLE(kappa; rho) and run verification experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a YAML config file.
    Run {
        config: PathBuf,
        /// Master seed; overrides the config file.
        #[arg(long, env = "SLE_LAB_SEED")]
        seed: Option<u64>,
        /// Worker threads (0 = all cores). Does not change the results.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Output directory.
        #[arg(long, default_value = "sle-lab-out")]
        out: PathBuf,
    },
    /// Print an experiment's parameters and the result it tests.
    Describe { experiment: String },
}

/// Runs a command. `Ok(true)` iff every check passed.
pub fn execute(cli: Cli) -> Result<bool, LabError> {
    match cli.command {
        Command::Describe { experiment } => {
            print!("{}", describe(&experiment)?);
            Ok(true)
        }
        Command::Run {
            config,
            seed,
            threads,
            out,
        } => {
            let config = RunConfig::load(&config, seed)?;
            let runner = Runner::new(config.seed, threads)?;
            let outcome = config.experiment.run(&runner)?;
            let files = write_all(&out, &config, &outcome)?;
            let report = &outcome.report;
            for c in &report.checks {
                println!(
                    "{:<4} {}: {:.6} (threshold {:.6})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.statistic,
                    c.threshold
                );
            }
            println!(
                "{} {}",
                report.name,
                if report.passed { "passed" } else { "FAILED" }
            );
            for f in files {
                println!("wrote {}", f.display());
            }
            eprintln!("runtime {:.2} s", report.runtime);
            Ok(report.passed)
        }
    }
}
