//! Configuration, presets, artifact writers and subcommands of the `zeroeq` tool.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;
pub mod sweep;

pub use cli::run_cli;
pub use config::{parse_config, preset, RunConfig, PRESETS};
pub use error::{exit, CliError};
pub use run::{run_experiment, RunOutcome};
