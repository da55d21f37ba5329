use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordinal_seasonality::ingest::DEFAULT_DATE_FORMAT;
use ordinal_seasonality::{FgnMethod, HurstMethod, PatternFamily, TieRule};

#[derive(Debug, Parser)]
#[command(
    name = "ordinal-seasonality",
    version,
    about = "Day-of-the-week seasonality tests on ordinal patterns of returns",
    after_help = "Set ORDINAL_SEASONALITY_LOG (e.g. info, debug) for diagnostics on stderr."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pattern counts, position matrix and hypothesis tests for a return series.
    Analyze(AnalyzeArgs),
    /// Monte-Carlo runs of the tests on fractional Gaussian noise.
    Simulate(SimulateArgs),
    /// Tests on randomly permuted copies of a series.
    Shuffle(ShuffleArgs),
    /// List ordinal patterns with their ids.
    Patterns(PatternsArgs),
    /// Estimate the Hurst exponent of a series.
    Hurst(HurstArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Weeks {
    /// Consecutive blocks of `--stride` returns, ignoring the calendar.
    #[default]
    Block,
    /// Complete Monday-Friday weeks from the date column.
    Calendar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    MondayLargest,
    MondayWorstFridayBest,
}

impl From<FamilyArg> for PatternFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::MondayLargest => PatternFamily::MondayLargest,
            FamilyArg::MondayWorstFridayBest => PatternFamily::MondayWorstFridayBest,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rs,
    #[default]
    Dfa,
}

impl From<MethodArg> for HurstMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rs => HurstMethod::Rs,
            MethodArg::Dfa => HurstMethod::Dfa,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    #[default]
    EarlierFirst,
    LaterFirst,
}

impl From<TieArg> for TieRule {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::EarlierFirst => TieRule::EarlierFirst,
            TieArg::LaterFirst => TieRule::LaterFirst,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    #[default]
    Circulant,
    Hosking,
}

impl From<GeneratorArg> for FgnMethod {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::Circulant => FgnMethod::Circulant,
            GeneratorArg::Hosking => FgnMethod::Hosking,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with a header row; `.gz` files are decompressed.
    #[arg(long)]
    pub input: PathBuf,
    /// Column holding returns.
    #[arg(long, required_unless_present = "price_column", conflicts_with = "price_column")]
    pub column: Option<String>,
    /// Column holding prices; log returns are computed from it.
    #[arg(long)]
    pub price_column: Option<String>,
    #[arg(long)]
    pub date_column: Option<String>,
    #[arg(long, default_value = DEFAULT_DATE_FORMAT)]
    pub date_format: String,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
}

#[derive(Debug, Args)]
pub struct PatternOptions {
    /// Pattern length.
    #[arg(long = "d", default_value_t = 5)]
    pub d: usize,
    /// Offset between window starts; defaults to `--d`.
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub weeks: Weeks,
    /// Ordering of equal returns inside a window.
    #[arg(long, value_enum, default_value_t)]
    pub ties: TieArg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("significance level {a} must lie in (0, 1)"))
    }
}

fn parse_hurst(s: &str) -> Result<f64, String> {
    let h: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if h > 0.0 && h < 1.0 {
        Ok(h)
    } else {
        Err(format!("Hurst exponent {h} must lie in (0, 1)"))
    }
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("{s:?} is not a positive integer")),
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub patterns: PatternOptions,
    /// Comma-separated subperiod lengths in returns, e.g. 3050,3050,3050,3050,1350.
    #[arg(long)]
    pub subperiods: Option<String>,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Hurst estimator for the report.
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// One or more Hurst exponents in (0, 1), comma-separated or repeated.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_hurst)]
    pub hurst: Vec<f64>,
    /// Points per simulated series.
    #[arg(long, default_value_t = 10_000, value_parser = parse_positive)]
    pub length: usize,
    #[arg(long, default_value_t = 1000, value_parser = parse_positive)]
    pub reps: usize,
    /// Master seed; every replication derives its stream from it.
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, value_parser = parse_positive)]
    pub jobs: Option<usize>,
    #[arg(long = "d", default_value_t = 5)]
    pub d: usize,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t)]
    pub generator: GeneratorArg,
    /// Week count used in the z statistic of the averaged sample.
    #[arg(long)]
    pub average_weeks: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ShuffleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub patterns: PatternOptions,
    #[arg(long)]
    pub seed: u64,
    /// Number of surrogate series.
    #[arg(long, default_value_t = 1, value_parser = parse_positive)]
    pub reps: usize,
    #[arg(long, value_parser = parse_positive)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PatternsArgs {
    #[arg(long = "d", default_value_t = 5)]
    pub d: usize,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HurstArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    #[arg(long, default_value_t = ordinal_seasonality::hurst::DEFAULT_MIN_WINDOW)]
    pub min_window: usize,
    /// Defaults to a quarter of the series length.
    #[arg(long)]
    pub max_window: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}
