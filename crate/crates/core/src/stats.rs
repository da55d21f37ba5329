//! Position matrix and the five seasonality hypothesis tests.
//!
//! H1 checks that all D! patterns are equally frequent. H2 checks, day by day,
//! that a day is equally likely to hold every rank position, and H3 checks,
//! position by position, that every day is equally likely to hold it. Those
//! three are Pearson chi-squared tests against a uniform expectation. H4 and H5
//! compare the share of a pattern family ("Monday best", "Monday worst and
//! Friday best") with its uniform share through the normal approximation to
//! the binomial test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patterns::{pattern_family, OrdinalPattern, PatternDistribution, PatternFamily, PatternId};
pub use crate::special::{chi2_sf, normal_cdf, normal_sf};
use crate::special::{binomial_cdf, binomial_sf};

/// Significance levels behind the `*`, `**` and `***` markers.
pub const LEVELS: [f64; 3] = [0.10, 0.05, 0.01];
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Expected cell count below which the chi-squared approximation is questionable.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// `cells[day * order + position]` counts how often `day` held `position`
/// (0 = worst return of the window).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionMatrix {
    order: usize,
    cells: Vec<u64>,
    weeks: u64,
}

impl PositionMatrix {
    /// Builds a matrix from explicit rows, checking that every row and column
    /// sums to the same week count.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let order = rows.len();
        if order < 2 || rows.iter().any(|r| r.len() != order) {
            return Err(Error::invalid("position matrix must be square with order >= 2"));
        }
        let weeks: u64 = rows[0].iter().sum();
        for (i, r) in rows.iter().enumerate() {
            if r.iter().sum::<u64>() != weeks {
                return Err(Error::invalid(format!("row {i} does not sum to {weeks}")));
            }
        }
        for j in 0..order {
            if rows.iter().map(|r| r[j]).sum::<u64>() != weeks {
                return Err(Error::invalid(format!("column {j} does not sum to {weeks}")));
            }
        }
        Ok(PositionMatrix {
            order,
            cells: rows.concat(),
            weeks,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weeks(&self) -> u64 {
        self.weeks
    }

    pub fn get(&self, day: usize, position: usize) -> u64 {
        self.cells[day * self.order + position]
    }

    pub fn row(&self, day: usize) -> &[u64] {
        &self.cells[day * self.order..(day + 1) * self.order]
    }

    pub fn column(&self, position: usize) -> Vec<u64> {
        (0..self.order).map(|day| self.get(day, position)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.cells.chunks(self.order).map(<[u64]>::to_vec).collect()
    }
}

pub fn position_matrix(dist: &PatternDistribution) -> PositionMatrix {
    let order = dist.order();
    let mut cells = vec![0u64; order * order];
    for (id, count) in dist.iter().filter(|&(_, c)| c > 0) {
        let pattern = OrdinalPattern::unrank(id, order).expect("distribution ids are in range");
        for (position, &day) in pattern.digits().iter().enumerate() {
            cells[day as usize * order + position] += count;
        }
    }
    PositionMatrix {
        order,
        cells,
        weeks: dist.windows(),
    }
}

/// Pearson's statistic of `observed` against equal expected counts.
pub fn chi2_statistic(observed: &[f64]) -> Result<f64> {
    if observed.len() < 2 {
        return Err(Error::invalid("chi-squared needs at least two categories"));
    }
    let total: f64 = observed.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(Error::invalid("chi-squared needs a positive total count"));
    }
    let expected = total / observed.len() as f64;
    Ok(observed
        .iter()
        .map(|&o| (o - expected) * (o - expected) / expected)
        .sum())
}

/// Test-specific inputs carried alongside an outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observed {
    ChiSquared {
        observed: Vec<f64>,
        expected: f64,
    },
    Binomial {
        p_e: f64,
        p_o: f64,
        q_o: f64,
        weeks: f64,
        /// One-sided p-value for the family being over-represented.
        p_over: f64,
        /// One-sided p-value for the family being under-represented.
        p_under: f64,
        /// True when the exact binomial tail replaced the normal approximation.
        exact: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    /// Infinite when the exact binomial fallback was used; serialized as a
    /// string in that case since JSON has no infinities.
    #[serde(with = "lenient_f64")]
    pub statistic: f64,
    pub df: Option<u32>,
    pub p_value: f64,
    pub reject_10: bool,
    pub reject_05: bool,
    pub reject_01: bool,
    pub observed: Observed,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TestOutcome {
    fn new(statistic: f64, df: Option<u32>, p_value: f64, observed: Observed) -> Self {
        TestOutcome {
            statistic,
            df,
            p_value,
            reject_10: p_value < LEVELS[0],
            reject_05: p_value < LEVELS[1],
            reject_01: p_value < LEVELS[2],
            observed,
            warnings: Vec::new(),
        }
    }

    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }

    /// Significance marker: `***` at 1%, `**` at 5%, `*` at 10%.
    pub fn stars(&self) -> &'static str {
        if self.reject_01 {
            "***"
        } else if self.reject_05 {
            "**"
        } else if self.reject_10 {
            "*"
        } else {
            ""
        }
    }
}

mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("NaN")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Chi-squared goodness-of-fit test of `observed` against a uniform expectation.
pub fn chi2_uniform_test(observed: &[f64]) -> Result<TestOutcome> {
    let statistic = chi2_statistic(observed)?;
    let df = observed.len() as u32 - 1;
    let expected = observed.iter().sum::<f64>() / observed.len() as f64;
    let mut outcome = TestOutcome::new(
        statistic,
        Some(df),
        chi2_sf(statistic, df),
        Observed::ChiSquared {
            observed: observed.to_vec(),
            expected,
        },
    );
    if expected < MIN_EXPECTED_COUNT {
        let msg = format!(
            "expected count {expected:.3} per category is below {MIN_EXPECTED_COUNT}; chi-squared p-value is unreliable"
        );
        outcome.warnings.push(msg);
    }
    Ok(outcome)
}

fn as_f64(xs: &[u64]) -> Vec<f64> {
    xs.iter().map(|&x| x as f64).collect()
}

pub fn test_h1_pattern_uniformity(dist: &PatternDistribution) -> Result<TestOutcome> {
    if dist.windows() == 0 {
        return Err(Error::invalid("distribution has no windows"));
    }
    chi2_uniform_test(&as_f64(dist.counts()))
}

pub fn test_h2_day_rows(matrix: &PositionMatrix) -> Result<Vec<TestOutcome>> {
    (0..matrix.order())
        .map(|day| chi2_uniform_test(&as_f64(matrix.row(day))))
        .collect()
}

pub fn test_h3_position_columns(matrix: &PositionMatrix) -> Result<Vec<TestOutcome>> {
    (0..matrix.order())
        .map(|pos| chi2_uniform_test(&as_f64(&matrix.column(pos))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialTestInput {
    pub p_e: f64,
    pub p_o: f64,
    /// Number of windows; real-valued so ensemble averages can be tested.
    pub weeks: f64,
}

impl BinomialTestInput {
    pub fn q_o(&self) -> f64 {
        1.0 - self.p_o
    }
}

/// `z = (p_e - p_o) / sqrt(p_o q_o / N)`; negative when the observed share
/// exceeds the expected one.
pub fn binomial_z(input: &BinomialTestInput) -> Result<f64> {
    let BinomialTestInput { p_e, p_o, weeks } = *input;
    if !(p_e > 0.0 && p_e < 1.0) {
        return Err(Error::invalid(format!("expected frequency {p_e} outside (0, 1)")));
    }
    if weeks.is_nan() || weeks < 1.0 {
        return Err(Error::invalid(format!("week count {weeks} must be at least 1")));
    }
    if !(0.0..=1.0).contains(&p_o) {
        return Err(Error::invalid(format!("observed frequency {p_o} outside [0, 1]")));
    }
    if p_o == 0.0 || p_o == 1.0 {
        return Err(Error::DegenerateFrequency { p_o });
    }
    Ok((p_e - p_o) / (p_o * (1.0 - p_o) / weeks).sqrt())
}

/// Two-sided binomial z-test; falls back to exact binomial tails when the
/// observed frequency is 0 or 1.
pub fn binomial_test(input: &BinomialTestInput) -> Result<TestOutcome> {
    let observed = |p_over, p_under, exact| Observed::Binomial {
        p_e: input.p_e,
        p_o: input.p_o,
        q_o: input.q_o(),
        weeks: input.weeks,
        p_over,
        p_under,
        exact,
    };
    match binomial_z(input) {
        Ok(z) => {
            let p_over = normal_cdf(z);
            let p_under = normal_sf(z);
            let p_value = (2.0 * p_over.min(p_under)).min(1.0);
            Ok(TestOutcome::new(z, None, p_value, observed(p_over, p_under, false)))
        }
        Err(Error::DegenerateFrequency { p_o }) => {
            let n = input.weeks.round() as u64;
            let k = (p_o * n as f64).round() as u64;
            let p_over = binomial_sf(k, n, input.p_e);
            let p_under = binomial_cdf(k, n, input.p_e);
            let p_value = (2.0 * p_over.min(p_under)).min(1.0);
            let z = if p_o == 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
            let mut outcome = TestOutcome::new(z, None, p_value, observed(p_over, p_under, true));
            outcome.warnings.push(format!(
                "observed frequency {p_o} is degenerate; exact binomial tail used"
            ));
            Ok(outcome)
        }
        Err(e) => Err(e),
    }
}

pub fn test_family(dist: &PatternDistribution, family: PatternFamily) -> Result<TestOutcome> {
    if dist.windows() == 0 {
        return Err(Error::invalid("distribution has no windows"));
    }
    let ids: Vec<PatternId> = pattern_family(family, dist.order())?;
    let hits = dist.family_count(&ids);
    binomial_test(&BinomialTestInput {
        p_e: family.expected_share(dist.order()),
        p_o: hits as f64 / dist.windows() as f64,
        weeks: dist.windows() as f64,
    })
}

pub fn test_h4_monday_largest(dist: &PatternDistribution) -> Result<TestOutcome> {
    test_family(dist, PatternFamily::MondayLargest)
}

pub fn test_h5_monday_worst_friday_best(dist: &PatternDistribution) -> Result<TestOutcome> {
    test_family(dist, PatternFamily::MondayWorstFridayBest)
}
