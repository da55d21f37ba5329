use ordinal_seasonality::ingest::shuffle_replication;
use ordinal_seasonality::stats::{
    position_matrix, test_family, test_h1_pattern_uniformity, test_h2_day_rows,
    test_h3_position_columns,
};
use ordinal_seasonality::{PatternFamily, TestOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{distribution, tests_section, AnalysisSection, Settings, WeekMode};
use crate::args::{MethodArg, ShuffleArgs};
use crate::error::{CliError, CliResult};
use crate::input::{load_returns, InputMeta};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Brief {
    /// `None` when the statistic is infinite.
    pub statistic: Option<f64>,
    pub p_value: f64,
    pub rejected: bool,
}

impl Brief {
    fn new(t: &TestOutcome, alpha: f64) -> Self {
        Brief {
            statistic: t.statistic.is_finite().then_some(t.statistic),
            p_value: t.p_value,
            rejected: t.rejects(alpha),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurrogateRow {
    pub replication: u64,
    pub h1: Brief,
    /// Days whose position counts were rejected as uniform.
    pub h2_rejected_days: usize,
    /// Positions whose day counts were rejected as uniform.
    pub h3_rejected_positions: usize,
    pub h4: Option<Brief>,
    pub h5: Option<Brief>,
}

/// Share of surrogates rejecting each hypothesis at the configured level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RejectionRates {
    pub h1: f64,
    pub h2_any_day: f64,
    pub h3_any_position: f64,
    pub h4: Option<f64>,
    pub h5: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShuffleReport {
    pub input: InputMeta,
    pub settings: Settings,
    pub seed: u64,
    pub replications: usize,
    pub original: AnalysisSection,
    pub first_surrogate: AnalysisSection,
    pub surrogates: Vec<SurrogateRow>,
    pub rejection_rates: RejectionRates,
}

fn surrogate_row(series: &ordinal_seasonality::ReturnSeries, s: &Settings, replication: u64) -> CliResult<SurrogateRow> {
    let (dist, _) = distribution(series, s)?;
    let m = position_matrix(&dist);
    let family = |f| -> CliResult<Option<Brief>> {
        if dist.order() < 3 {
            return Ok(None);
        }
        Ok(Some(Brief::new(&test_family(&dist, f)?, s.alpha)))
    };
    Ok(SurrogateRow {
        replication,
        h1: Brief::new(&test_h1_pattern_uniformity(&dist)?, s.alpha),
        h2_rejected_days: test_h2_day_rows(&m)?.iter().filter(|t| t.rejects(s.alpha)).count(),
        h3_rejected_positions: test_h3_position_columns(&m)?.iter().filter(|t| t.rejects(s.alpha)).count(),
        h4: family(PatternFamily::MondayLargest)?,
        h5: family(PatternFamily::MondayWorstFridayBest)?,
    })
}

fn rate<F: Fn(&SurrogateRow) -> bool>(rows: &[SurrogateRow], f: F) -> f64 {
    rows.iter().filter(|r| f(r)).count() as f64 / rows.len() as f64
}

pub fn shuffle(args: &ShuffleArgs) -> CliResult<ShuffleReport> {
    let settings = Settings::from_options(&args.patterns, args.alpha, MethodArg::default().into())?;
    if settings.weeks == WeekMode::Calendar {
        return Err(CliError::Usage(
            "shuffled series carry no dates; use --weeks block".into(),
        ));
    }
    let (series, input) = load_returns(&args.input)?;
    let original = tests_section("original".into(), &series, &settings)?;
    let first = shuffle_replication(&series, args.seed, 0)?;
    let first_surrogate = tests_section("surrogate-0".into(), &first, &settings)?;

    let work = || {
        (0..args.reps as u64)
            .into_par_iter()
            .map(|i| {
                let s = shuffle_replication(&series, args.seed, i)?;
                surrogate_row(&s, &settings, i)
            })
            .collect::<CliResult<Vec<_>>>()
    };
    let surrogates = match args.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Internal(format!("cannot start worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let has_families = settings.order >= 3;
    let rejection_rates = RejectionRates {
        h1: rate(&surrogates, |r| r.h1.rejected),
        h2_any_day: rate(&surrogates, |r| r.h2_rejected_days > 0),
        h3_any_position: rate(&surrogates, |r| r.h3_rejected_positions > 0),
        h4: has_families.then(|| rate(&surrogates, |r| r.h4.as_ref().is_some_and(|b| b.rejected))),
        h5: has_families.then(|| rate(&surrogates, |r| r.h5.as_ref().is_some_and(|b| b.rejected))),
    };
    Ok(ShuffleReport {
        input,
        settings,
        seed: args.seed,
        replications: args.reps,
        original,
        first_surrogate,
        surrogates,
        rejection_rates,
    })
}
