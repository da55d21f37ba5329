//! Hurst exponent estimation by rescaled range and detrended fluctuation analysis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MIN_WINDOW: usize = 8;
const MIN_FIT_POINTS: usize = 4;
const GRID_RATIO: f64 = 1.5;
const TARGET_SIZES: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HurstMethod {
    /// Rescaled range.
    Rs,
    /// Order-1 detrended fluctuation analysis.
    #[default]
    Dfa,
}

impl fmt::Display for HurstMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HurstMethod::Rs => "rs",
            HurstMethod::Dfa => "dfa",
        })
    }
}

impl FromStr for HurstMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rs" => Ok(HurstMethod::Rs),
            "dfa" => Ok(HurstMethod::Dfa),
            other => Err(Error::invalid(format!("unknown Hurst method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub h: f64,
    pub method: HurstMethod,
    pub window_sizes: Vec<usize>,
    /// `(ln size, ln statistic)` pairs behind the fit.
    pub fit_points: Vec<(f64, f64)>,
    pub r_squared: f64,
}

/// Default upper window for a series of `len` points.
pub fn default_max_window(len: usize) -> usize {
    len / 4
}

/// Roughly geometric window sizes from `min` to `max` with ratio ≤ 1.5.
pub fn window_grid(min: usize, max: usize) -> Vec<usize> {
    let span = (max as f64 / min as f64).ln();
    let k = ((span / GRID_RATIO.ln()).ceil() as usize + 1).max(TARGET_SIZES);
    let mut sizes: Vec<usize> = (0..k)
        .map(|i| (min as f64 * (span * i as f64 / (k - 1) as f64).exp()).round() as usize)
        .map(|s| s.clamp(min, max))
        .collect();
    sizes.dedup();
    sizes
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean R/S over non-overlapping windows of `size`; `None` if every window is flat.
fn rescaled_range(xs: &[f64], size: usize) -> Option<f64> {
    let mut acc = 0.0;
    let mut used = 0usize;
    for block in xs.chunks_exact(size) {
        let m = mean(block);
        let (mut cum, mut lo, mut hi, mut ss) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &x in block {
            let d = x - m;
            cum += d;
            lo = lo.min(cum);
            hi = hi.max(cum);
            ss += d * d;
        }
        let sd = (ss / size as f64).sqrt();
        if sd > 0.0 && hi - lo > 0.0 {
            acc += (hi - lo) / sd;
            used += 1;
        }
    }
    (used > 0).then(|| acc / used as f64)
}

/// Root-mean-square residual of the profile around per-window linear fits.
fn dfa_fluctuation(profile: &[f64], size: usize) -> Option<f64> {
    let n = size as f64;
    let t_mean = (n - 1.0) / 2.0;
    let t_var: f64 = (0..size).map(|t| (t as f64 - t_mean).powi(2)).sum();
    let mut ss = 0.0;
    let mut count = 0usize;
    for block in profile.chunks_exact(size) {
        let y_mean = mean(block);
        let cov: f64 = block
            .iter()
            .enumerate()
            .map(|(t, &y)| (t as f64 - t_mean) * (y - y_mean))
            .sum();
        let slope = cov / t_var;
        for (t, &y) in block.iter().enumerate() {
            let r = y - y_mean - slope * (t as f64 - t_mean);
            ss += r * r;
        }
        count += size;
    }
    let f = (ss / count as f64).sqrt();
    (f > 0.0).then_some(f)
}

/// Least-squares slope and coefficient of determination.
fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

pub fn estimate_hurst(
    values: &[f64],
    method: HurstMethod,
    min_window: usize,
    max_window: usize,
) -> Result<HurstEstimate> {
    let len = values.len();
    if min_window < DEFAULT_MIN_WINDOW {
        return Err(Error::invalid(format!(
            "min_window {min_window} below {DEFAULT_MIN_WINDOW}"
        )));
    }
    if len < 4 * min_window {
        return Err(Error::invalid(format!(
            "series of length {len} too short for min_window {min_window}"
        )));
    }
    if min_window >= max_window || max_window > len / 4 {
        return Err(Error::invalid(format!(
            "need min_window < max_window <= {}; got {min_window}..{max_window}",
            len / 4
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("series contains non-finite values"));
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Err(Error::DegenerateSeries("series is constant".into()));
    }

    let sizes = window_grid(min_window, max_window);
    let profile: Vec<f64> = match method {
        HurstMethod::Dfa => {
            let m = mean(values);
            values
                .iter()
                .scan(0.0, |acc, &x| {
                    *acc += x - m;
                    Some(*acc)
                })
                .collect()
        }
        HurstMethod::Rs => Vec::new(),
    };

    let mut window_sizes = Vec::with_capacity(sizes.len());
    let mut fit_points = Vec::with_capacity(sizes.len());
    for &size in &sizes {
        let stat = match method {
            HurstMethod::Rs => rescaled_range(values, size),
            HurstMethod::Dfa => dfa_fluctuation(&profile, size),
        };
        if let Some(s) = stat {
            window_sizes.push(size);
            fit_points.push(((size as f64).ln(), s.ln()));
        }
    }
    if fit_points.len() < MIN_FIT_POINTS {
        return Err(Error::DegenerateSeries(format!(
            "only {} usable window sizes",
            fit_points.len()
        )));
    }
    let (h, r_squared) = fit_line(&fit_points);
    if !h.is_finite() {
        return Err(Error::DegenerateSeries("non-finite slope".into()));
    }
    Ok(HurstEstimate {
        h,
        method,
        window_sizes,
        fit_points,
        r_squared,
    })
}
