//! Single-series analysis: pattern histogram, position matrix and H1-H5.

use ordinal_seasonality::hurst::{default_max_window, DEFAULT_MIN_WINDOW};
use ordinal_seasonality::ingest::calendar_weeks;
use ordinal_seasonality::patterns::{count_windows, DEFAULT_TIE_WARNING, WEEK};
use ordinal_seasonality::stats::{
    position_matrix, test_family, test_h1_pattern_uniformity, test_h2_day_rows,
    test_h3_position_columns,
};
use ordinal_seasonality::{
    count_patterns, estimate_hurst, split_subperiods, HurstEstimate, HurstMethod, OrdinalPattern,
    PatternDistribution, PatternFamily, ReturnSeries, SubperiodSpec, TestOutcome, TieRule,
};
use serde::{Deserialize, Serialize};

use crate::args::{AnalyzeArgs, PatternOptions, Weeks};
use crate::error::{CliError, CliResult};
use crate::input::{date_range, load_returns, InputMeta};

const WEEKDAYS: [&str; 5] = ["Mo", "Tu", "We", "Th", "Fr"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeekMode {
    Block,
    Calendar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub order: usize,
    pub stride: usize,
    pub weeks: WeekMode,
    pub tie_rule: TieRule,
    pub alpha: f64,
    pub hurst_method: HurstMethod,
}

impl Settings {
    pub fn from_options(p: &PatternOptions, alpha: f64, hurst_method: HurstMethod) -> CliResult<Self> {
        let weeks = match p.weeks {
            Weeks::Block => WeekMode::Block,
            Weeks::Calendar => WeekMode::Calendar,
        };
        if !(2..=10).contains(&p.d) {
            return Err(CliError::Usage(format!("--d {} outside 2..=10", p.d)));
        }
        if weeks == WeekMode::Calendar {
            if p.d != WEEK {
                return Err(CliError::Usage("--weeks calendar needs --d 5".into()));
            }
            if p.stride.is_some_and(|s| s != WEEK) {
                return Err(CliError::Usage("--stride does not apply to calendar weeks".into()));
            }
        }
        let stride = p.stride.unwrap_or(p.d);
        if stride == 0 {
            return Err(CliError::Usage("--stride must be positive".into()));
        }
        Ok(Settings {
            order: p.d,
            stride,
            weeks,
            tie_rule: p.ties.into(),
            alpha,
            hurst_method,
        })
    }
}

/// A test outcome with its significance marker and the decision at `alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    #[serde(flatten)]
    pub outcome: TestOutcome,
    pub stars: String,
    pub rejected: bool,
}

impl TestReport {
    pub fn new(outcome: TestOutcome, alpha: f64) -> Self {
        TestReport {
            stars: outcome.stars().to_string(),
            rejected: outcome.rejects(alpha),
            outcome,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternCount {
    pub id: u32,
    pub pattern: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledTest {
    pub label: String,
    pub test: TestReport,
}

/// Day-by-position counts; rows are days, columns run from worst to best.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub days: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub weeks: u64,
    /// Per-day uniformity across positions.
    pub rows: Vec<LabelledTest>,
    /// Per-position uniformity across days.
    pub columns: Vec<LabelledTest>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TieReport {
    pub rule: TieRule,
    pub tied_windows: u64,
    pub fraction: f64,
    pub threshold: f64,
    pub exceeded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSection {
    pub name: String,
    pub returns: usize,
    pub first_date: Option<String>,
    pub last_date: Option<String>,
    pub windows: u64,
    pub discarded_tail: usize,
    /// Incomplete calendar weeks left out (calendar mode only).
    pub skipped_weeks: Option<usize>,
    pub patterns: Vec<PatternCount>,
    pub forbidden: Vec<String>,
    pub matrix: MatrixReport,
    pub h1: TestReport,
    pub h4: Option<TestReport>,
    pub h5: Option<TestReport>,
    pub ties: TieReport,
    pub hurst: Option<HurstEstimate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputMeta,
    pub settings: Settings,
    /// Whole series first, then one section per subperiod.
    pub sections: Vec<AnalysisSection>,
}

pub fn day_labels(order: usize) -> Vec<String> {
    if order == WEEK {
        WEEKDAYS.iter().map(|s| s.to_string()).collect()
    } else {
        (0..order).map(|i| format!("d{i}")).collect()
    }
}

/// Counts windows of `series` under the configured week partition.
pub fn distribution(series: &ReturnSeries, s: &Settings) -> CliResult<(PatternDistribution, Option<usize>)> {
    match s.weeks {
        WeekMode::Block => Ok((count_patterns(series.values(), s.order, s.stride, s.tie_rule)?, None)),
        WeekMode::Calendar => {
            let weeks = calendar_weeks(series)?;
            if weeks.windows.is_empty() {
                return Err(CliError::Input(format!("{}: no complete Monday-Friday week", series.label())));
            }
            let dist = count_windows(weeks.slices(), WEEK, s.tie_rule)?;
            Ok((dist, Some(weeks.skipped)))
        }
    }
}

fn family_test(dist: &PatternDistribution, family: PatternFamily, alpha: f64) -> CliResult<Option<TestReport>> {
    if dist.order() < 3 {
        return Ok(None);
    }
    Ok(Some(TestReport::new(test_family(dist, family)?, alpha)))
}

pub fn tests_section(name: String, series: &ReturnSeries, s: &Settings) -> CliResult<AnalysisSection> {
    let (dist, skipped_weeks) = distribution(series, s)?;
    let mut warnings = Vec::new();

    let tie_fraction = dist.tie_fraction();
    let exceeded = dist.ties_exceed(DEFAULT_TIE_WARNING);
    if exceeded {
        let msg = format!(
            "{name}: {:.2}% of windows contain tied returns (threshold {:.0}%)",
            100.0 * tie_fraction,
            100.0 * DEFAULT_TIE_WARNING
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let matrix = position_matrix(&dist);
    let days = day_labels(s.order);
    let rows = test_h2_day_rows(&matrix)?
        .into_iter()
        .zip(&days)
        .map(|(t, d)| LabelledTest {
            label: d.clone(),
            test: TestReport::new(t, s.alpha),
        })
        .collect();
    let columns = test_h3_position_columns(&matrix)?
        .into_iter()
        .enumerate()
        .map(|(j, t)| LabelledTest {
            label: j.to_string(),
            test: TestReport::new(t, s.alpha),
        })
        .collect();

    let patterns = dist
        .iter()
        .map(|(id, count)| {
            Ok(PatternCount {
                id: id.get(),
                pattern: OrdinalPattern::unrank(id, s.order)?.to_string(),
                count,
            })
        })
        .collect::<Result<Vec<_>, ordinal_seasonality::Error>>()?;
    let forbidden = patterns.iter().filter(|p| p.count == 0).map(|p| p.pattern.clone()).collect();

    let hurst = if series.len() >= 8 * DEFAULT_MIN_WINDOW {
        match estimate_hurst(series.values(), s.hurst_method, DEFAULT_MIN_WINDOW, default_max_window(series.len())) {
            Ok(h) => Some(h),
            Err(e) => {
                log::info!("{name}: no Hurst estimate: {e}");
                None
            }
        }
    } else {
        None
    };

    let h1 = TestReport::new(test_h1_pattern_uniformity(&dist)?, s.alpha);
    for w in &h1.outcome.warnings {
        let msg = format!("{name}: H1: {w}");
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let (first_date, last_date) = date_range(series);
    Ok(AnalysisSection {
        name,
        returns: series.len(),
        first_date,
        last_date,
        windows: dist.windows(),
        discarded_tail: dist.discarded_tail(),
        skipped_weeks,
        patterns,
        forbidden,
        matrix: MatrixReport {
            days,
            counts: matrix.rows(),
            weeks: matrix.weeks(),
            rows,
            columns,
        },
        h1,
        h4: family_test(&dist, PatternFamily::MondayLargest, s.alpha)?,
        h5: family_test(&dist, PatternFamily::MondayWorstFridayBest, s.alpha)?,
        ties: TieReport {
            rule: s.tie_rule,
            tied_windows: dist.tied_windows(),
            fraction: tie_fraction,
            threshold: DEFAULT_TIE_WARNING,
            exceeded,
        },
        hurst,
        warnings,
    })
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<AnalysisReport> {
    let settings = Settings::from_options(&args.patterns, args.alpha, args.method.into())?;
    let spec = args
        .subperiods
        .as_deref()
        .map(|s| s.parse::<SubperiodSpec>().map_err(|e| CliError::Usage(format!("--subperiods: {e}"))))
        .transpose()?;
    let (series, input) = load_returns(&args.input)?;

    let mut sections = vec![tests_section("whole".into(), &series, &settings)?];
    if let Some(spec) = spec {
        for (i, part) in split_subperiods(&series, &spec)?.iter().enumerate() {
            sections.push(tests_section(format!("subperiod-{}", i + 1), part, &settings)?);
        }
    }
    Ok(AnalysisReport {
        input,
        settings,
        sections,
    })
}
