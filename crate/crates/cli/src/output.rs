//! JSON and flat CSV renderings of the reports.

use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;

use crate::analysis::{AnalysisReport, TestReport};
use crate::args::{Format, OutputArgs};
use crate::error::{CliError, CliResult};
use crate::shuffle::{Brief, ShuffleReport};
use crate::simulate::SimulateOutput;
use crate::tables::{HurstReport, PatternTable};

/// Ten decimals for ordinary magnitudes, scientific notation for tiny ones.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:.10e}")
    } else {
        format!("{x:.10}")
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(internal)?;
    out.push(b'\n');
    Ok(out)
}

type Rows = Vec<Vec<String>>;

fn to_csv(header: &[&str], rows: Rows) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(internal)?;
    for r in rows {
        w.write_record(&r).map_err(internal)?;
    }
    w.into_inner().map_err(internal)
}

pub const ANALYSIS_HEADER: [&str; 7] = ["section", "record", "label", "index", "value", "p_value", "stars"];

fn test_row(section: &str, record: &str, label: &str, index: &str, t: &TestReport) -> Vec<String> {
    vec![
        section.into(),
        record.into(),
        label.into(),
        index.into(),
        num(t.outcome.statistic),
        num(t.outcome.p_value),
        t.stars.clone(),
    ]
}

fn value_row(section: &str, record: &str, label: &str, index: &str, value: String) -> Vec<String> {
    vec![
        section.into(),
        record.into(),
        label.into(),
        index.into(),
        value,
        String::new(),
        String::new(),
    ]
}

pub fn analysis_csv(report: &AnalysisReport) -> CliResult<Vec<u8>> {
    let mut rows = Vec::new();
    for s in &report.sections {
        let n = s.name.as_str();
        rows.push(value_row(n, "returns", "", "", s.returns.to_string()));
        rows.push(value_row(n, "windows", "", "", s.windows.to_string()));
        rows.push(value_row(n, "discarded_tail", "", "", s.discarded_tail.to_string()));
        if let Some(k) = s.skipped_weeks {
            rows.push(value_row(n, "skipped_weeks", "", "", k.to_string()));
        }
        for p in &s.patterns {
            rows.push(value_row(n, "pattern_count", &p.pattern, &p.id.to_string(), p.count.to_string()));
        }
        for (day, counts) in s.matrix.days.iter().zip(&s.matrix.counts) {
            for (pos, c) in counts.iter().enumerate() {
                rows.push(value_row(n, "matrix", day, &pos.to_string(), c.to_string()));
            }
        }
        for r in &s.matrix.rows {
            rows.push(test_row(n, "row_q", &r.label, "", &r.test));
        }
        for c in &s.matrix.columns {
            rows.push(test_row(n, "column_q", "", &c.label, &c.test));
        }
        rows.push(test_row(n, "h1", "", "", &s.h1));
        if let Some(t) = &s.h4 {
            rows.push(test_row(n, "h4", "", "", t));
        }
        if let Some(t) = &s.h5 {
            rows.push(test_row(n, "h5", "", "", t));
        }
        rows.push(value_row(n, "tied_windows", "", "", s.ties.tied_windows.to_string()));
        rows.push(value_row(n, "tie_fraction", "", "", num(s.ties.fraction)));
        if let Some(h) = &s.hurst {
            rows.push(value_row(n, "hurst", &h.method.to_string(), "", num(h.h)));
        }
    }
    to_csv(&ANALYSIS_HEADER, rows)
}

pub const SIMULATION_HEADER: [&str; 14] = [
    "hurst",
    "hypothesis",
    "index",
    "statistic",
    "df",
    "p_value",
    "stars",
    "rejections_10",
    "rejections_05",
    "rejections_01",
    "rejections_alpha",
    "replications",
    "mean_p_o",
    "above_expected",
];

pub fn simulation_csv(out: &SimulateOutput) -> CliResult<Vec<u8>> {
    let mut rows = Vec::new();
    for r in &out.runs {
        let h = num(r.hurst);
        let chi = |name: &str, index: String, s: &ordinal_seasonality::fgn::ChiSquaredSummary| {
            vec![
                h.clone(),
                name.to_string(),
                index,
                num(s.average.statistic),
                s.average.df.map(|d| d.to_string()).unwrap_or_default(),
                num(s.average.p_value),
                s.average.stars().to_string(),
                s.rejections.at_10.to_string(),
                s.rejections.at_05.to_string(),
                s.rejections.at_01.to_string(),
                s.rejections.at_alpha.to_string(),
                r.replications.to_string(),
                String::new(),
                String::new(),
            ]
        };
        rows.push(chi("h1", String::new(), &r.h1));
        for (i, s) in r.h2.iter().enumerate() {
            rows.push(chi("h2", i.to_string(), s));
        }
        for (i, s) in r.h3.iter().enumerate() {
            rows.push(chi("h3", i.to_string(), s));
        }
        for (name, f) in [("h4", &r.h4), ("h5", &r.h5)] {
            rows.push(vec![
                h.clone(),
                name.to_string(),
                String::new(),
                num(f.average.statistic),
                String::new(),
                num(f.average.p_value),
                f.average.stars().to_string(),
                f.rejections.at_10.to_string(),
                f.rejections.at_05.to_string(),
                f.rejections.at_01.to_string(),
                f.rejections.at_alpha.to_string(),
                r.replications.to_string(),
                num(f.mean_p_o),
                f.above_expected.to_string(),
            ]);
        }
    }
    to_csv(&SIMULATION_HEADER, rows)
}

pub fn shuffle_csv(report: &ShuffleReport) -> CliResult<Vec<u8>> {
    let brief = |b: Option<&Brief>| -> [String; 3] {
        match b {
            Some(b) => [
                b.statistic.map(num).unwrap_or_else(|| "inf".into()),
                num(b.p_value),
                b.rejected.to_string(),
            ],
            None => Default::default(),
        }
    };
    let rows = report
        .surrogates
        .iter()
        .map(|r| {
            let mut row = vec![r.replication.to_string()];
            row.extend(brief(Some(&r.h1)));
            row.push(r.h2_rejected_days.to_string());
            row.push(r.h3_rejected_positions.to_string());
            row.extend(brief(r.h4.as_ref()));
            row.extend(brief(r.h5.as_ref()));
            row
        })
        .collect();
    to_csv(
        &[
            "replication",
            "h1_statistic",
            "h1_p_value",
            "h1_rejected",
            "h2_rejected_days",
            "h3_rejected_positions",
            "h4_statistic",
            "h4_p_value",
            "h4_rejected",
            "h5_statistic",
            "h5_p_value",
            "h5_rejected",
        ],
        rows,
    )
}

pub fn patterns_csv(table: &PatternTable) -> CliResult<Vec<u8>> {
    let rows = table
        .patterns
        .iter()
        .map(|p| vec![p.id.to_string(), p.pattern.clone()])
        .collect();
    to_csv(&["id", "pattern"], rows)
}

pub fn hurst_csv(report: &HurstReport) -> CliResult<Vec<u8>> {
    let e = &report.estimate;
    let rows = e
        .window_sizes
        .iter()
        .zip(&e.fit_points)
        .map(|(w, (x, y))| {
            vec![
                e.method.to_string(),
                num(e.h),
                num(e.r_squared),
                w.to_string(),
                num(*x),
                num(*y),
            ]
        })
        .collect();
    to_csv(&["method", "h", "r_squared", "window", "ln_size", "ln_statistic"], rows)
}

/// Renders `value` in the requested format and writes it out.
pub fn emit<T: Serialize>(
    args: &OutputArgs,
    value: &T,
    csv: impl FnOnce(&T) -> CliResult<Vec<u8>>,
) -> CliResult<()> {
    let bytes = match args.format {
        Format::Json => to_json(value)?,
        Format::Csv => csv(value)?,
    };
    match &args.output {
        Some(path) => {
            let mut f = File::create(path)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
            f.write_all(&bytes).map_err(internal)
        }
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(&bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(internal),
            }
        }
    }
}
