use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use fcg_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => {
            let _ = out.flush();
            ExitCode::from(code)
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("fcg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
