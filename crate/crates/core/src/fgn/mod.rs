//! Exact fractional Gaussian noise synthesis.
//!
//! The primary generator embeds the fGn covariance in a circulant matrix of
//! size `2n` and synthesizes in the frequency domain (Davies–Harte). For fGn
//! the embedding is non-negative definite for every `H`, but rounding can
//! produce slightly negative eigenvalues; anything beyond a tiny relative
//! tolerance sends generation to the Durbin–Levinson (Hosking) recursion.

mod ensemble;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;

pub use ensemble::{
    run_ensemble, run_ensemble_with_jobs, ChiSquaredSummary, EnsembleConfig, FamilySummary,
    RejectionCounts, SimulationReport,
};

/// Autocovariance of unit-variance fGn at lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let k = k as f64;
    let h2 = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FgnMethod {
    /// Circulant embedding, falling back to Hosking if the embedding fails.
    #[default]
    Circulant,
    Hosking,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgnConfig {
    pub hurst: f64,
    pub length: usize,
    pub sigma: f64,
    pub seed: u64,
    #[serde(default)]
    pub method: FgnMethod,
}

impl FgnConfig {
    pub fn new(hurst: f64, length: usize, seed: u64) -> Self {
        FgnConfig {
            hurst,
            length,
            sigma: 1.0,
            seed,
            method: FgnMethod::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::invalid(format!(
                "Hurst exponent {} outside (0, 1)",
                self.hurst
            )));
        }
        if self.length < 2 {
            return Err(Error::invalid("fGn length must be at least 2"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid(format!("sigma {} must be positive", self.sigma)));
        }
        Ok(())
    }
}

/// Seeded stream for replication `index` of a run keyed by `seed`.
///
/// ChaCha streams are independent for distinct stream ids, so a replication's
/// draws do not depend on which worker runs it.
pub fn replication_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Reusable circulant-embedding sampler for a fixed `(H, n)`.
pub struct CirculantFgn {
    n: usize,
    /// `sqrt(λ_k / m)` for k in 0..=n.
    scales: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl CirculantFgn {
    /// Returns `None` when the embedding has materially negative eigenvalues.
    pub fn new(hurst: f64, n: usize) -> Option<Self> {
        let m = 2 * n;
        let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
        for k in 0..=n {
            row.push(Complex::new(fgn_autocovariance(hurst, k), 0.0));
        }
        for k in (1..n).rev() {
            row.push(Complex::new(fgn_autocovariance(hurst, k), 0.0));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);

        let max = row.iter().map(|c| c.re).fold(0.0f64, f64::max);
        let tol = 1e-10 * max.max(1.0);
        let mut scales = Vec::with_capacity(n + 1);
        for c in &row[..=n] {
            let lambda = c.re;
            if lambda < -tol {
                return None;
            }
            scales.push((lambda.max(0.0) / m as f64).sqrt());
        }
        Some(CirculantFgn { n, scales, fft })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.n;
        let m = 2 * n;
        let mut w = vec![Complex::new(0.0, 0.0); m];
        let g = |rng: &mut R| -> f64 { rng.sample(StandardNormal) };
        w[0] = Complex::new(self.scales[0] * g(rng), 0.0);
        for k in 1..n {
            let s = self.scales[k] * std::f64::consts::FRAC_1_SQRT_2;
            let a = g(rng);
            let b = g(rng);
            w[k] = Complex::new(s * a, s * b);
            w[m - k] = w[k].conj();
        }
        w[n] = Complex::new(self.scales[n] * g(rng), 0.0);
        self.fft.process(&mut w);
        w[..n].iter().map(|c| c.re).collect()
    }
}

/// Sequential conditional synthesis via the Durbin–Levinson recursion; O(n²).
pub fn hosking_sample<R: Rng + ?Sized>(hurst: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let gamma: Vec<f64> = (0..n).map(|k| fgn_autocovariance(hurst, k)).collect();
    let mut out = Vec::with_capacity(n);
    let mut phi: Vec<f64> = Vec::with_capacity(n);
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    let mut v = gamma[0];
    out.push(v.sqrt() * rng.sample::<f64, _>(StandardNormal));
    for t in 1..n {
        // phi_{t,t}
        let mut acc = gamma[t];
        for j in 1..t {
            acc -= phi[j - 1] * gamma[t - j];
        }
        let kappa = acc / v;
        prev.clone_from(&phi);
        for j in 1..t {
            phi[j - 1] = prev[j - 1] - kappa * prev[t - j - 1];
        }
        phi.push(kappa);
        v *= 1.0 - kappa * kappa;

        let mean: f64 = (1..=t).map(|j| phi[j - 1] * out[t - j]).sum();
        out.push(mean + v.max(0.0).sqrt() * rng.sample::<f64, _>(StandardNormal));
    }
    out
}

/// Method actually used for a draw, after any fallback.
pub(crate) enum Sampler {
    Circulant(CirculantFgn),
    Hosking { hurst: f64, n: usize },
}

impl Sampler {
    pub(crate) fn new(cfg: &FgnConfig) -> Self {
        match cfg.method {
            FgnMethod::Hosking => Sampler::Hosking {
                hurst: cfg.hurst,
                n: cfg.length,
            },
            FgnMethod::Circulant => match CirculantFgn::new(cfg.hurst, cfg.length) {
                Some(c) => Sampler::Circulant(c),
                None => {
                    log::info!(
                        "circulant embedding not non-negative definite for H={} n={}; using Hosking recursion",
                        cfg.hurst,
                        cfg.length
                    );
                    Sampler::Hosking {
                        hurst: cfg.hurst,
                        n: cfg.length,
                    }
                }
            },
        }
    }

    pub(crate) fn method(&self) -> FgnMethod {
        match self {
            Sampler::Circulant(_) => FgnMethod::Circulant,
            Sampler::Hosking { .. } => FgnMethod::Hosking,
        }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, sigma: f64, rng: &mut R) -> Vec<f64> {
        let mut xs = match self {
            Sampler::Circulant(c) => c.sample(rng),
            Sampler::Hosking { hurst, n } => hosking_sample(*hurst, *n, rng),
        };
        if sigma != 1.0 {
            xs.iter_mut().for_each(|x| *x *= sigma);
        }
        xs
    }
}

pub fn fgn_generate(cfg: &FgnConfig) -> Result<ReturnSeries> {
    cfg.validate()?;
    let sampler = Sampler::new(cfg);
    let mut rng = replication_rng(cfg.seed, 0);
    let values = sampler.sample(cfg.sigma, &mut rng);
    ReturnSeries::new(values, format!("fgn-H{}", cfg.hurst))
}

/// Partial sums of a noise series.
pub fn fbm_from_fgn(noise: &ReturnSeries) -> Result<ReturnSeries> {
    if noise.is_empty() {
        return Err(Error::invalid("cannot integrate an empty series"));
    }
    let values = noise
        .values()
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    ReturnSeries::new(values, format!("{}-cumsum", noise.label()))
}

/// `x[0], x[1] - x[0], x[2] - x[1], ...`; inverse of [`fbm_from_fgn`].
pub fn first_differences(path: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.len());
    let mut prev = 0.0;
    for &x in path {
        out.push(x - prev);
        prev = x;
    }
    out
}
