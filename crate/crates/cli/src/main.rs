use std::process::ExitCode;

use clap::Parser;
use wgg_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("wgg: {e}");
            ExitCode::from(e.code())
        }
    }
}
