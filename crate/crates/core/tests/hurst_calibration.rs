use ordinal_seasonality::hurst::{default_max_window, DEFAULT_MIN_WINDOW};
use ordinal_seasonality::{estimate_hurst, fgn_generate, FgnConfig, HurstMethod};

const LEN: usize = 10_000;

fn mean_estimate(h: f64, method: HurstMethod, reps: u64, seed: u64) -> f64 {
    (0..reps)
        .map(|r| {
            let xs = fgn_generate(&FgnConfig::new(h, LEN, seed * 1000 + r)).unwrap();
            estimate_hurst(xs.values(), method, DEFAULT_MIN_WINDOW, default_max_window(LEN))
                .unwrap()
                .h
        })
        .sum::<f64>()
        / reps as f64
}

#[test]
fn default_method_is_calibrated() {
    for (i, h) in [0.3, 0.5, 0.7].into_iter().enumerate() {
        let m = mean_estimate(h, HurstMethod::default(), 100, i as u64 + 1);
        assert!((m - h).abs() <= 0.05, "H={h}: mean estimate {m}");
    }
}

#[test]
fn estimates_increase_with_h() {
    for method in [HurstMethod::Dfa, HurstMethod::Rs] {
        let means: Vec<f64> = (1..=9)
            .map(|i| mean_estimate(i as f64 / 10.0, method, 20, 50 + i))
            .collect();
        assert!(means.windows(2).all(|w| w[0] < w[1]), "{method}: {means:?}");
    }
}

#[test]
fn rescaled_range_tracks_white_noise() {
    let m = mean_estimate(0.5, HurstMethod::Rs, 30, 90);
    assert!((m - 0.5).abs() < 0.07, "{m}");
}
