//! Command-line front end for `fcg-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod curves;
pub mod error;
pub mod format;
pub mod range;

pub use cli::{run, Cli, Command};
pub use config::ScenarioConfig;
pub use error::{CliError, CliResult};
