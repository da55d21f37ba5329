use ordinal_seasonality::{log_returns, shuffle_series, split_subperiods, ReturnSeries, SubperiodSpec};
use proptest::prelude::*;

proptest! {
    #[test]
    fn shuffle_preserves_multiset(xs in prop::collection::vec(-1.0e6f64..1.0e6, 2..300), seed in any::<u64>()) {
        let s = ReturnSeries::new(xs.clone(), "x").unwrap();
        let out = shuffle_series(&s, seed).unwrap();
        prop_assert_eq!(out.len(), xs.len());
        let mut a = out.into_values();
        let mut b = xs;
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn split_then_concatenate_is_identity(lengths in prop::collection::vec(1usize..50, 1..8)) {
        let total: usize = lengths.iter().sum();
        let start = chrono::NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
        let dates: Vec<_> = start.iter_days().take(total).collect();
        let values: Vec<f64> = (0..total).map(|i| i as f64 * 0.5).collect();
        let s = ReturnSeries::with_dates(values.clone(), dates.clone(), "x").unwrap();
        let parts = split_subperiods(&s, &SubperiodSpec::new(lengths.clone()).unwrap()).unwrap();
        prop_assert_eq!(parts.len(), lengths.len());
        let v: Vec<f64> = parts.iter().flat_map(|p| p.values().to_vec()).collect();
        let d: Vec<_> = parts.iter().flat_map(|p| p.dates().unwrap().to_vec()).collect();
        prop_assert_eq!(v, values);
        prop_assert_eq!(d, dates);
    }

    #[test]
    fn returns_rebuild_prices(prices in prop::collection::vec(1.0e-2f64..1.0e4, 2..200)) {
        let s = ReturnSeries::new(prices.clone(), "p").unwrap();
        let r = log_returns(&s).unwrap();
        let mut acc = 0.0;
        for (i, x) in r.values().iter().enumerate() {
            acc += x;
            let rebuilt = prices[0] * acc.exp();
            prop_assert!((rebuilt / prices[i + 1] - 1.0).abs() < 1e-12);
        }
    }
}
