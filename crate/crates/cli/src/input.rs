use ordinal_seasonality::ingest::{CsvOptions, CsvSchema, ValueColumn};
use ordinal_seasonality::{load_csv, log_returns, ReturnSeries};
use serde::{Deserialize, Serialize};

use crate::args::InputArgs;
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Return,
    Price,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputMeta {
    pub path: String,
    pub column: String,
    pub kind: ValueKind,
    pub date_column: Option<String>,
    /// Data rows read from the file.
    pub rows: usize,
    /// Returns available for analysis.
    pub returns: usize,
    pub first_date: Option<String>,
    pub last_date: Option<String>,
}

pub fn date_range(series: &ReturnSeries) -> (Option<String>, Option<String>) {
    match series.dates() {
        Some(d) if !d.is_empty() => (Some(d[0].to_string()), Some(d[d.len() - 1].to_string())),
        _ => (None, None),
    }
}

/// Loads the requested column and converts prices to log returns.
pub fn load_returns(args: &InputArgs) -> CliResult<(ReturnSeries, InputMeta)> {
    if !args.delimiter.is_ascii() {
        return Err(CliError::Usage(format!("delimiter {:?} is not ASCII", args.delimiter)));
    }
    let (column, kind, value) = match (&args.column, &args.price_column) {
        (Some(c), None) => (c.clone(), ValueKind::Return, ValueColumn::Return(c.clone())),
        (None, Some(c)) => (c.clone(), ValueKind::Price, ValueColumn::Price(c.clone())),
        _ => return Err(CliError::Usage("give exactly one of --column or --price-column".into())),
    };
    let schema = CsvSchema {
        date_column: args.date_column.clone(),
        value,
    };
    let options = CsvOptions {
        delimiter: args.delimiter as u8,
        date_format: args.date_format.clone(),
    };
    let raw = load_csv(&args.input, &schema, &options)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let rows = raw.len();
    let series = match kind {
        ValueKind::Return => raw,
        ValueKind::Price => log_returns(&raw)?,
    };
    let (first_date, last_date) = date_range(&series);
    log::info!("loaded {rows} rows from {}", args.input.display());
    let meta = InputMeta {
        path: args.input.display().to_string(),
        column,
        kind,
        date_column: args.date_column.clone(),
        rows,
        returns: series.len(),
        first_date,
        last_date,
    };
    Ok((series, meta))
}
