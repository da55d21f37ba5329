//! Command-line front end: argument parsing, report assembly and rendering.

pub mod analysis;
pub mod args;
pub mod error;
pub mod input;
pub mod output;
pub mod shuffle;
pub mod simulate;
pub mod tables;

use args::{Cli, Command};
use error::CliResult;

pub const LOG_ENV: &str = "ORDINAL_SEASONALITY_LOG";

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(a) => output::emit(&a.output, &analysis::analyze(&a)?, output::analysis_csv),
        Command::Simulate(a) => output::emit(&a.output, &simulate::simulate(&a)?, output::simulation_csv),
        Command::Shuffle(a) => output::emit(&a.output, &shuffle::shuffle(&a)?, output::shuffle_csv),
        Command::Patterns(a) => output::emit(&a.output, &tables::patterns(&a)?, output::patterns_csv),
        Command::Hurst(a) => output::emit(&a.output, &tables::hurst(&a)?, output::hurst_csv),
    }
}
