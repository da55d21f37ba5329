//! The `patterns` and `hurst` subcommands.

use ordinal_seasonality::hurst::default_max_window;
use ordinal_seasonality::patterns::all_patterns;
use ordinal_seasonality::{estimate_hurst, pattern_family, HurstEstimate, PatternFamily};
use serde::{Deserialize, Serialize};

use crate::args::{HurstArgs, PatternsArgs};
use crate::error::{CliError, CliResult};
use crate::input::{load_returns, InputMeta};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRow {
    pub id: u32,
    pub pattern: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternTable {
    pub order: usize,
    pub family: Option<PatternFamily>,
    pub patterns: Vec<PatternRow>,
}

pub fn patterns(args: &PatternsArgs) -> CliResult<PatternTable> {
    if !(2..=10).contains(&args.d) {
        return Err(CliError::Usage(format!("--d {} outside 2..=10", args.d)));
    }
    let family: Option<PatternFamily> = args.family.map(Into::into);
    let keep = match family {
        Some(f) => Some(pattern_family(f, args.d)?),
        None => None,
    };
    let patterns = all_patterns(args.d)?
        .map(|p| PatternRow {
            id: p.rank().get(),
            pattern: p.to_string(),
        })
        .filter(|row| keep.as_ref().map_or(true, |ids| ids.iter().any(|i| i.get() == row.id)))
        .collect();
    Ok(PatternTable {
        order: args.d,
        family,
        patterns,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HurstReport {
    pub input: InputMeta,
    pub estimate: HurstEstimate,
}

pub fn hurst(args: &HurstArgs) -> CliResult<HurstReport> {
    let (series, input) = load_returns(&args.input)?;
    let max = args.max_window.unwrap_or_else(|| default_max_window(series.len()));
    let estimate = estimate_hurst(series.values(), args.method.into(), args.min_window, max)?;
    Ok(HurstReport { input, estimate })
}
