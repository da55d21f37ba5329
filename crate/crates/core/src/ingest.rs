//! Loading, transforming and partitioning return series.

use std::fs::File;
use std::io::{BufReader, Read};
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate, Weekday};
use flate2::read::GzDecoder;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgn::replication_rng;

pub const DEFAULT_DATE_FORMAT: &str = "%Y-%m-%d";

/// Ordered daily observations, optionally date-stamped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    values: Vec<f64>,
    dates: Option<Vec<NaiveDate>>,
    label: String,
}

impl ReturnSeries {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at index {i}")));
        }
        Ok(ReturnSeries {
            values,
            dates: None,
            label: label.into(),
        })
    }

    pub fn with_dates(values: Vec<f64>, dates: Vec<NaiveDate>, label: impl Into<String>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} dates for {} values",
                dates.len(),
                values.len()
            )));
        }
        if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Order {
                row: i + 2,
                message: format!("{} does not follow {}", dates[i + 1], dates[i]),
            });
        }
        let mut s = ReturnSeries::new(values, label)?;
        s.dates = Some(dates);
        Ok(s)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dates(&self) -> Option<&[NaiveDate]> {
        self.dates.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    fn slice(&self, range: Range<usize>, label: String) -> ReturnSeries {
        ReturnSeries {
            values: self.values[range.clone()].to_vec(),
            dates: self.dates.as_ref().map(|d| d[range].to_vec()),
            label,
        }
    }
}

/// Which column carries the series, and what it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueColumn {
    Price(String),
    Return(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvSchema {
    pub date_column: Option<String>,
    pub value: ValueColumn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub date_format: String,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            date_format: DEFAULT_DATE_FORMAT.to_string(),
        }
    }
}

fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    let file = BufReader::new(File::open(path)?);
    let gz = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("gz"));
    Ok(if gz {
        Box::new(GzDecoder::new(file))
    } else {
        Box::new(file)
    })
}

/// Loads one column of a headed CSV file; `.gz` files are decompressed.
///
/// Row numbers in errors count data rows from 1, excluding the header.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema, options: &CsvOptions) -> Result<ReturnSeries> {
    let path = path.as_ref();
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().trim_end_matches(".csv").to_string())
        .unwrap_or_default();
    read_csv(open_input(path)?, schema, options, label)
}

pub fn read_csv<R: Read>(
    input: R,
    schema: &CsvSchema,
    options: &CsvOptions,
    label: impl Into<String>,
) -> Result<ReturnSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Schema {
            row: None,
            message: format!("missing column {name:?}"),
        })
    };
    let (value_name, value_idx) = match &schema.value {
        ValueColumn::Price(c) | ValueColumn::Return(c) => (c.as_str(), find(c)?),
    };
    let date_idx = schema.date_column.as_deref().map(find).transpose()?;

    let mut values = Vec::new();
    let mut dates = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let raw = record.get(value_idx).unwrap_or("");
        if raw.is_empty() {
            return Err(Error::Schema {
                row: Some(row),
                message: format!("empty {value_name:?} field"),
            });
        }
        let v: f64 = raw.parse().map_err(|_| Error::Schema {
            row: Some(row),
            message: format!("cannot parse {raw:?} in column {value_name:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Schema {
                row: Some(row),
                message: format!("non-finite value {raw:?}"),
            });
        }
        values.push(v);
        if let Some(di) = date_idx {
            let raw = record.get(di).unwrap_or("");
            let d = NaiveDate::parse_from_str(raw, &options.date_format).map_err(|e| Error::Schema {
                row: Some(row),
                message: format!("cannot parse date {raw:?}: {e}"),
            })?;
            if let Some(prev) = dates.last() {
                if d <= *prev {
                    return Err(Error::Order {
                        row,
                        message: format!("{d} does not follow {prev}"),
                    });
                }
            }
            dates.push(d);
        }
    }
    if values.is_empty() {
        return Err(Error::invalid("input has no data rows"));
    }
    if date_idx.is_some() {
        ReturnSeries::with_dates(values, dates, label)
    } else {
        ReturnSeries::new(values, label)
    }
}

/// `r_t = ln(P_t / P_{t-1})`, dated on the later day.
pub fn log_returns(prices: &ReturnSeries) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::invalid("need at least two prices"));
    }
    if let Some(i) = prices.values.iter().position(|&p| p <= 0.0) {
        return Err(Error::invalid(format!(
            "non-positive price {} at index {i}",
            prices.values[i]
        )));
    }
    let values = prices.values.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let dates = prices.dates.as_ref().map(|d| d[1..].to_vec());
    Ok(ReturnSeries {
        values,
        dates,
        label: prices.label.clone(),
    })
}

/// Lengths of consecutive, non-overlapping subperiods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubperiodSpec {
    pub lengths: Vec<usize>,
}

impl SubperiodSpec {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() || lengths.contains(&0) {
            return Err(Error::invalid("subperiod lengths must be positive"));
        }
        Ok(SubperiodSpec { lengths })
    }

    pub fn count(&self) -> usize {
        self.lengths.len()
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }
}

impl FromStr for SubperiodSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lengths = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad subperiod length {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SubperiodSpec::new(lengths)
    }
}

pub fn split_subperiods(series: &ReturnSeries, spec: &SubperiodSpec) -> Result<Vec<ReturnSeries>> {
    if spec.total() != series.len() {
        return Err(Error::invalid(format!(
            "subperiod lengths sum to {} but the series has {} points",
            spec.total(),
            series.len()
        )));
    }
    let mut start = 0;
    Ok(spec
        .lengths
        .iter()
        .enumerate()
        .map(|(i, &len)| {
            let part = series.slice(start..start + len, format!("{}-{}", series.label, i + 1));
            start += len;
            part
        })
        .collect())
}

/// Uniformly permuted copy of the values; dates are dropped.
pub fn shuffle_series(series: &ReturnSeries, seed: u64) -> Result<ReturnSeries> {
    shuffle_replication(series, seed, 0)
}

/// Shuffle number `index` of a seeded family of surrogates.
pub fn shuffle_replication(series: &ReturnSeries, seed: u64, index: u64) -> Result<ReturnSeries> {
    if series.len() < 2 {
        return Err(Error::invalid("need at least two values to shuffle"));
    }
    let mut values = series.values.clone();
    values.shuffle(&mut replication_rng(seed, index));
    Ok(ReturnSeries {
        values,
        dates: None,
        label: format!("{}-shuffled", series.label),
    })
}

/// Complete Monday-to-Friday weeks extracted from a dated series.
#[derive(Clone, Debug, PartialEq)]
pub struct CalendarWeeks {
    pub windows: Vec<[f64; 5]>,
    /// Monday of each emitted week.
    pub mondays: Vec<NaiveDate>,
    /// ISO weeks present in the input that lacked at least one weekday.
    pub skipped: usize,
}

impl CalendarWeeks {
    pub fn slices(&self) -> impl Iterator<Item = &[f64]> {
        self.windows.iter().map(|w| &w[..])
    }
}

pub fn calendar_weeks(series: &ReturnSeries) -> Result<CalendarWeeks> {
    let dates = series
        .dates()
        .ok_or_else(|| Error::invalid("calendar weeks need a dated series"))?;
    if let Some(i) = dates
        .iter()
        .position(|d| matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
    {
        return Err(Error::RejectedRow {
            row: i + 1,
            message: format!("{} falls on a weekend", dates[i]),
        });
    }

    let mut out = CalendarWeeks {
        windows: Vec::new(),
        mondays: Vec::new(),
        skipped: 0,
    };
    let mut i = 0;
    while i < dates.len() {
        let week = dates[i].iso_week();
        let mut j = i;
        while j < dates.len() && dates[j].iso_week() == week {
            j += 1;
        }
        // dates are strictly increasing, so five entries in one ISO week are Mon..Fri
        if j - i == 5 {
            let mut w = [0.0; 5];
            w.copy_from_slice(&series.values[i..j]);
            out.windows.push(w);
            out.mondays.push(dates[i]);
        } else {
            out.skipped += 1;
        }
        i = j;
    }
    Ok(out)
}
