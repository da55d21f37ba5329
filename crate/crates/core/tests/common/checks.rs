//! Sampling-distribution helpers for the fGn and Hurst property tests.

use ordinal_seasonality::fgn_autocovariance;

/// Known-mean lag-`k` autocovariance estimate.
pub fn autocov(xs: &[f64], k: usize) -> f64 {
    let m = xs.len() - k;
    xs[..m].iter().zip(&xs[k..]).map(|(a, b)| a * b).sum::<f64>() / m as f64
}

/// Exact standard error of [`autocov`] for a zero-mean Gaussian series with
/// autocovariance `gamma` (which must extend to lag `n + k`).
pub fn autocov_se(gamma: &[f64], n: usize, k: usize) -> f64 {
    let m = n - k;
    let g = |d: i64| gamma[d.unsigned_abs() as usize];
    let mut var = 0.0;
    for d in -(m as i64 - 1)..=(m as i64 - 1) {
        let w = (m as i64 - d.abs()) as f64;
        var += w * (g(d) * g(d) + g(d + k as i64) * g(d - k as i64));
    }
    var.sqrt() / m as f64
}

pub fn gamma_table(hurst: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| fgn_autocovariance(hurst, k)).collect()
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    let ne = (n1 * n2 / (n1 + n2)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    (d, p.clamp(0.0, 1.0))
}

/// Sample skewness and excess kurtosis.
pub fn shape(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
