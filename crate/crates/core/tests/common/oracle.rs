//! Quadrature reference values for the chi-squared and normal tails.

use std::f64::consts::PI;

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson over `pieces` equal sub-intervals of `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            adaptive(f, lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb), tol / pieces as f64, 40)
        })
        .sum()
}

/// `ln Γ(k / 2)` by the half-integer recurrence.
fn ln_gamma_half(k: u32) -> f64 {
    let (mut acc, mut z) = if k % 2 == 0 { (0.0, 1.0) } else { (0.5 * PI.ln(), 0.5) };
    while z < k as f64 / 2.0 {
        acc += z.ln();
        z += 1.0;
    }
    acc
}

pub fn normal_sf(z: f64) -> f64 {
    if z < 0.0 {
        return 1.0 - normal_sf(-z);
    }
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
    integrate(&phi, z, z + 40.0, 80, 1e-14)
}

pub fn chi2_sf(x: f64, df: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if df == 1 {
        // the density is unbounded at 0; integrate the normal tail instead
        return 2.0 * normal_sf(x.sqrt());
    }
    let k = df as f64;
    let ln_norm = -(0.5 * k) * 2f64.ln() - ln_gamma_half(df);
    let pdf = move |t: f64| {
        if t <= 0.0 {
            return if df == 2 { 0.5 } else { 0.0 };
        }
        (ln_norm + (0.5 * k - 1.0) * t.ln() - 0.5 * t).exp()
    };
    let hi = x.max(k) + 40.0 * (2.0 * k).sqrt() + 100.0;
    integrate(&pdf, x, hi, 200, 1e-13)
}

/// Evaluation points spanning `[0, 500]`, dense near the origin.
pub fn chi2_grid() -> Vec<f64> {
    let mut xs: Vec<f64> = vec![0.0, 1e-4, 1e-3, 0.01, 0.05];
    xs.extend((1..=200).map(|i| i as f64 * 0.25));
    xs.extend((11..=100).map(|i| i as f64 * 5.0));
    xs
}

pub const CHI2_DFS: [u32; 5] = [1, 2, 4, 10, 119];
