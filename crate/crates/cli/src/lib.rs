//! Command-line front end: scenario files, sweeps and the invariant check.

pub mod checks;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod stats;
pub mod sweep;

pub use config::ScenarioConfig;
pub use error::CliError;
pub use run::{run, RunSummary};
pub use sweep::{fig2_sweep, SweepResult, SweepRow};
