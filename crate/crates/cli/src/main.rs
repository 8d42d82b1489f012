use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use udwsim_cli::checks::run_checks;
use udwsim_cli::config::{Kind, OutputSection, QuadSection, ScenarioConfig, SweepSection};
use udwsim_cli::{run, CliError};

#[derive(Parser)]
#[command(
    name = "udwsim",
    version,
    about = "Detector and waveguide transition amplitudes"
)]
struct Cli {
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, env = "UDWSIM_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { config: PathBuf },
    /// Acceleration sweep of the exponential-gradient crystal.
    Fig2 {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Crystal lengths in μm.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        lengths: Option<Vec<f64>>,
        /// Smallest acceleration, 1/s.
        #[arg(long)]
        a_min: Option<f64>,
        /// Largest acceleration, 1/s.
        #[arg(long)]
        a_max: Option<f64>,
        #[arg(long, default_value_t = 60)]
        a_points: usize,
    },
    /// Run the invariant suite.
    Check,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let s = run(&cfg, cli.workers)?;
            println!("wrote {} rows to {}", s.rows, s.csv.display());
            if s.failures > 0 {
                eprintln!("{} rows failed; see the status column", s.failures);
            }
            Ok(())
        }
        Command::Fig2 {
            out,
            lengths,
            a_min,
            a_max,
            a_points,
        } => {
            let sweep = SweepSection {
                lengths_um: lengths.unwrap_or_else(udwsim_cli::config::default_lengths),
                a_min_per_s: a_min,
                a_max_per_s: a_max,
                a_points,
                ..SweepSection::default()
            };
            let cfg = ScenarioConfig {
                kind: Kind::Fig2Sweep,
                quad: QuadSection::default(),
                output: OutputSection { dir: out },
                udw: None,
                spdc: None,
                sweep: Some(sweep),
            };
            let s = run(&cfg, cli.workers)?;
            println!("wrote {} rows to {}", s.rows, s.csv.display());
            Ok(())
        }
        Command::Check => {
            let outcomes = run_checks();
            for c in &outcomes {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {:<24} {}", c.name, c.detail);
            }
            if outcomes.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(CliError::Physics(udwsim::Error::Domain(
                    "invariant check failed".into(),
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
