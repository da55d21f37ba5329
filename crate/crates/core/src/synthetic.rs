//! Return series that realize a prescribed pattern distribution exactly.
//!
//! Used to turn known pattern counts into input files for the analysis
//! pipeline. Each window gets fresh normal draws arranged so that its ordinal
//! pattern is the requested one; window order is shuffled by `seed`.

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::fgn::replication_rng;
use crate::patterns::{OrdinalPattern, PatternDistribution, PatternId};

const SCALE: f64 = 0.01;

/// Concatenated blocks of `order` values, one per counted window.
pub fn series_from_distribution(dist: &PatternDistribution, seed: u64) -> Result<Vec<f64>> {
    series_from_subperiods(std::slice::from_ref(dist), seed)
}

/// As [`series_from_distribution`], one segment per distribution, in order.
pub fn series_from_subperiods(parts: &[PatternDistribution], seed: u64) -> Result<Vec<f64>> {
    let normal = Normal::new(0.0, SCALE).expect("positive scale");
    let mut out = Vec::new();
    for (i, dist) in parts.iter().enumerate() {
        let order = dist.order();
        let mut rng = replication_rng(seed, i as u64);
        let mut weeks: Vec<OrdinalPattern> = Vec::with_capacity(dist.windows() as usize);
        for (k, &c) in dist.counts().iter().enumerate() {
            let p = OrdinalPattern::unrank(PatternId::from_index(k), order)?;
            weeks.extend(std::iter::repeat(p).take(c as usize));
        }
        weeks.shuffle(&mut rng);
        let mut draws = vec![0.0; order];
        let mut block = vec![0.0; order];
        for p in &weeks {
            loop {
                draws.iter_mut().for_each(|d| *d = normal.sample(&mut rng));
                draws.sort_by(f64::total_cmp);
                if draws.windows(2).all(|w| w[0] < w[1]) {
                    break;
                }
            }
            for (j, &day) in p.digits().iter().enumerate() {
                block[day as usize] = draws[j];
            }
            out.extend_from_slice(&block);
        }
    }
    Ok(out)
}
