use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use fcg_core::FactorMode;

use crate::commands::{self, Options};
use crate::config::ScenarioConfig;
use crate::curves::{curves, CurvesArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "fcg",
    version,
    about = "Function-coherent valuation, reversal scans and coherence audits"
)]
pub struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Indifference tolerance when comparing values.
    #[arg(long, global = true, default_value_t = 1e-9, value_name = "FLOAT")]
    pub tol: f64,
    /// Round each leaf discount factor to two decimals before use.
    #[arg(long, global = true)]
    pub paper_rounding: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value every schedule.
    Eval,
    /// Shift both scan schedules by each delta and report preference flips.
    Scan,
    /// Audit the assessments for F1-F3 violations.
    Check,
    /// Fit a representing functional to the assessments.
    Fit,
    /// Emit discount-factor curves.
    Curves(Box<CurvesArgs>),
}

impl Cli {
    fn options(&self) -> CliResult<Options> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Usage(format!(
                "--tol must be finite and >= 0, got {}",
                self.tol
            )));
        }
        let mode = if self.paper_rounding {
            FactorMode::TwoDecimalLeaves
        } else {
            FactorMode::Exact
        };
        Ok(Options {
            tol: self.tol,
            mode,
        })
    }

    fn scenario(&self) -> CliResult<ScenarioConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs --config PATH".into()))?;
        ScenarioConfig::load(path)
    }
}

/// Runs a parsed command line, writing results to `out`. Returns the exit
/// status for commands that complete.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<u8> {
    let opts = cli.options()?;
    match &cli.command {
        Command::Curves(args) => curves(args, opts.mode, out),
        Command::Eval => commands::eval(&cli.scenario()?, opts, out),
        Command::Scan => commands::scan(&cli.scenario()?, opts, out),
        Command::Check => commands::check(&cli.scenario()?, out),
        Command::Fit => commands::fit(&cli.scenario()?, out),
    }
}
