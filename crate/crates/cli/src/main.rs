use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;
use ordinal_seasonality_cli::args::Cli;
use ordinal_seasonality_cli::error::EXIT_INTERNAL;
use ordinal_seasonality_cli::{run, LOG_ENV};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn"))
        .format_timestamp(None)
        .format_target(false)
        .init();

    // clap reports its own usage errors with status 2
    let cli = Cli::parse();
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL as u8),
    }
}
