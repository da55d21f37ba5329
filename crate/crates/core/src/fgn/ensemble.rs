//! Monte-Carlo runs of the seasonality tests on simulated fGn.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{replication_rng, FgnConfig, FgnMethod, Sampler};
use crate::error::{Error, Result};
use crate::patterns::{
    count_patterns, pattern_family, OrdinalPattern, PatternFamily, PatternId, TieRule, WEEK,
};
use crate::stats::{
    binomial_test, chi2_uniform_test, position_matrix, test_family, test_h1_pattern_uniformity,
    test_h2_day_rows, test_h3_position_columns, BinomialTestInput, TestOutcome, DEFAULT_ALPHA,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub base: FgnConfig,
    pub replications: usize,
    pub master_seed: u64,
    /// Pattern length; windows are non-overlapping.
    pub order: usize,
    /// Level used for the headline rejection count.
    pub alpha: f64,
    /// Week count used in the z statistic of the averaged sample. Defaults to
    /// the per-sample window count.
    pub average_weeks: Option<f64>,
}

impl EnsembleConfig {
    pub fn new(hurst: f64, length: usize, replications: usize, master_seed: u64) -> Self {
        EnsembleConfig {
            base: FgnConfig::new(hurst, length, master_seed),
            replications,
            master_seed,
            order: WEEK,
            alpha: DEFAULT_ALPHA,
            average_weeks: None,
        }
    }

    fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.replications == 0 {
            return Err(Error::invalid("at least one replication is required"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.base.length < self.order {
            return Err(Error::invalid("series length shorter than the pattern order"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionCounts {
    pub at_10: usize,
    pub at_05: usize,
    pub at_01: usize,
    /// Rejections at the configured headline level.
    pub at_alpha: usize,
}

impl RejectionCounts {
    fn add(&mut self, t: &TestOutcome, alpha: f64) {
        self.at_10 += t.reject_10 as usize;
        self.at_05 += t.reject_05 as usize;
        self.at_01 += t.reject_01 as usize;
        self.at_alpha += t.rejects(alpha) as usize;
    }
}

/// A chi-squared hypothesis over the ensemble: the test applied to the
/// per-cell mean counts, plus how many individual samples rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquaredSummary {
    pub average: TestOutcome,
    pub rejections: RejectionCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: PatternFamily,
    pub p_e: f64,
    pub mean_p_o: f64,
    pub mean_q_o: f64,
    /// z-test of the mean observed share.
    pub average: TestOutcome,
    pub rejections: RejectionCounts,
    /// Replications whose observed share exceeded the expected one.
    pub above_expected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub hurst: f64,
    pub length: usize,
    pub replications: usize,
    pub master_seed: u64,
    pub order: usize,
    pub alpha: f64,
    pub method: FgnMethod,
    pub weeks_per_sample: u64,
    pub h1: ChiSquaredSummary,
    /// One entry per day.
    pub h2: Vec<ChiSquaredSummary>,
    /// One entry per rank position, worst first.
    pub h3: Vec<ChiSquaredSummary>,
    pub h4: FamilySummary,
    pub h5: FamilySummary,
}

struct Replication {
    counts: Vec<u64>,
    windows: u64,
    h1: TestOutcome,
    h2: Vec<TestOutcome>,
    h3: Vec<TestOutcome>,
    h4: TestOutcome,
    h5: TestOutcome,
    share4: f64,
    share5: f64,
}

fn replicate(cfg: &EnsembleConfig, sampler: &Sampler, index: usize) -> Result<Replication> {
    let mut rng = replication_rng(cfg.master_seed, index as u64);
    let xs = sampler.sample(cfg.base.sigma, &mut rng);
    let dist = count_patterns(&xs, cfg.order, cfg.order, TieRule::default())?;
    let matrix = position_matrix(&dist);
    let fam4 = pattern_family(PatternFamily::MondayLargest, cfg.order)?;
    let fam5 = pattern_family(PatternFamily::MondayWorstFridayBest, cfg.order)?;
    let windows = dist.windows();
    Ok(Replication {
        h1: test_h1_pattern_uniformity(&dist)?,
        h2: test_h2_day_rows(&matrix)?,
        h3: test_h3_position_columns(&matrix)?,
        h4: test_family(&dist, PatternFamily::MondayLargest)?,
        h5: test_family(&dist, PatternFamily::MondayWorstFridayBest)?,
        share4: dist.family_count(&fam4) as f64 / windows as f64,
        share5: dist.family_count(&fam5) as f64 / windows as f64,
        counts: dist.counts().to_vec(),
        windows,
    })
}

fn quiet(mut t: TestOutcome) -> TestOutcome {
    // averaged counts are far below the per-cell floor by construction of the
    // average; the floor warning is about individual samples
    t.warnings.clear();
    t
}

fn summarize(cfg: &EnsembleConfig, method: FgnMethod, reps: Vec<Replication>) -> Result<SimulationReport> {
    let order = cfg.order;
    let n = reps.len() as f64;
    let alpha = cfg.alpha;

    let mut mean_counts = vec![0.0f64; reps[0].counts.len()];
    for r in &reps {
        for (m, &c) in mean_counts.iter_mut().zip(&r.counts) {
            *m += c as f64;
        }
    }
    mean_counts.iter_mut().for_each(|m| *m /= n);

    // mean position matrix, from the mean pattern counts (the map is linear)
    let mut mean_cells = vec![0.0f64; order * order];
    for (k, &c) in mean_counts.iter().enumerate() {
        let p = OrdinalPattern::unrank(PatternId::from_index(k), order)?;
        for (pos, &day) in p.digits().iter().enumerate() {
            mean_cells[day as usize * order + pos] += c;
        }
    }

    let mut h1_rej = RejectionCounts::default();
    let mut h2_rej = vec![RejectionCounts::default(); order];
    let mut h3_rej = vec![RejectionCounts::default(); order];
    let mut h4_rej = RejectionCounts::default();
    let mut h5_rej = RejectionCounts::default();
    let (mut above4, mut above5) = (0, 0);
    let (mut sum4, mut sum5) = (0.0, 0.0);
    let p_e4 = PatternFamily::MondayLargest.expected_share(order);
    let p_e5 = PatternFamily::MondayWorstFridayBest.expected_share(order);
    for r in &reps {
        h1_rej.add(&r.h1, alpha);
        for (acc, t) in h2_rej.iter_mut().zip(&r.h2) {
            acc.add(t, alpha);
        }
        for (acc, t) in h3_rej.iter_mut().zip(&r.h3) {
            acc.add(t, alpha);
        }
        h4_rej.add(&r.h4, alpha);
        h5_rej.add(&r.h5, alpha);
        above4 += (r.share4 > p_e4) as usize;
        above5 += (r.share5 > p_e5) as usize;
        sum4 += r.share4;
        sum5 += r.share5;
    }

    let weeks_per_sample = reps[0].windows;
    if let Some(w) = reps[0].h1.warnings.first() {
        log::warn!("per-sample H1: {w}");
    }
    let avg_weeks = cfg.average_weeks.unwrap_or(weeks_per_sample as f64);
    let family = |family, p_e, mean_p_o: f64, rejections, above_expected| -> Result<FamilySummary> {
        Ok(FamilySummary {
            family,
            p_e,
            mean_p_o,
            mean_q_o: 1.0 - mean_p_o,
            average: binomial_test(&BinomialTestInput {
                p_e,
                p_o: mean_p_o,
                weeks: avg_weeks,
            })?,
            rejections,
            above_expected,
        })
    };

    let rows: Vec<ChiSquaredSummary> = (0..order)
        .map(|day| {
            Ok(ChiSquaredSummary {
                average: quiet(chi2_uniform_test(&mean_cells[day * order..(day + 1) * order])?),
                rejections: h2_rej[day],
            })
        })
        .collect::<Result<_>>()?;
    let cols: Vec<ChiSquaredSummary> = (0..order)
        .map(|pos| {
            let col: Vec<f64> = (0..order).map(|day| mean_cells[day * order + pos]).collect();
            Ok(ChiSquaredSummary {
                average: quiet(chi2_uniform_test(&col)?),
                rejections: h3_rej[pos],
            })
        })
        .collect::<Result<_>>()?;

    Ok(SimulationReport {
        hurst: cfg.base.hurst,
        length: cfg.base.length,
        replications: reps.len(),
        master_seed: cfg.master_seed,
        order,
        alpha,
        method,
        weeks_per_sample,
        h1: ChiSquaredSummary {
            average: quiet(chi2_uniform_test(&mean_counts)?),
            rejections: h1_rej,
        },
        h2: rows,
        h3: cols,
        h4: family(PatternFamily::MondayLargest, p_e4, sum4 / n, h4_rej, above4)?,
        h5: family(PatternFamily::MondayWorstFridayBest, p_e5, sum5 / n, h5_rej, above5)?,
    })
}

/// Runs the ensemble on the global rayon pool.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let sampler = Sampler::new(&cfg.base);
    let reps = (0..cfg.replications)
        .into_par_iter()
        .map(|i| replicate(cfg, &sampler, i))
        .collect::<Result<Vec<_>>>()?;
    summarize(cfg, sampler.method(), reps)
}

/// Runs the ensemble on a dedicated pool of `jobs` threads. The report does
/// not depend on `jobs`.
pub fn run_ensemble_with_jobs(cfg: &EnsembleConfig, jobs: usize) -> Result<SimulationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_ensemble(cfg))
}
