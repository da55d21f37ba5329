//! Ordinal-pattern tests for day-of-the-week seasonality in return series.
//!
//! Weeks of daily returns are reduced to ordinal patterns (the permutation
//! that sorts the week), and the resulting histogram is tested for uniformity,
//! for day and rank-position effects, and for specific pattern families.
//! Fractional Gaussian noise synthesis and Hurst estimation support the
//! long-memory side of the analysis.

pub mod error;
pub mod fgn;
pub mod hurst;
pub mod ingest;
pub mod patterns;
pub mod special;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use fgn::{
    fbm_from_fgn, fgn_autocovariance, fgn_generate, run_ensemble, run_ensemble_with_jobs,
    EnsembleConfig, FgnConfig, FgnMethod, SimulationReport,
};
pub use hurst::{estimate_hurst, HurstEstimate, HurstMethod};
pub use ingest::{
    calendar_weeks, load_csv, log_returns, shuffle_series, split_subperiods, CsvOptions,
    CsvSchema, ReturnSeries, SubperiodSpec, ValueColumn,
};
pub use patterns::{
    count_patterns, encode_window, pattern_family, OrdinalPattern, PatternDistribution,
    PatternFamily, PatternId, TieRule,
};
pub use stats::{position_matrix, PositionMatrix, TestOutcome};
