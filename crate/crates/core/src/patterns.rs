//! Ordinal pattern encoding, ranking and counting.
//!
//! A window of `D` returns is mapped to the permutation that sorts it: digit
//! `j` of the pattern is the day index holding the `j`-th smallest return, so
//! the first digit is the worst day of the window and the last digit the best.
//! Patterns are numbered 1..=D! in lexicographic order of their digit strings,
//! which for `D = 5` gives `01234` id 1 and `43210` id 120.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 10;

/// Pattern length used throughout the trading-week analysis.
pub const WEEK: usize = 5;

/// Fraction of tied windows above which a distribution is flagged as unreliable.
pub const DEFAULT_TIE_WARNING: f64 = 0.01;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn check_order(order: usize) -> Result<()> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::invalid(format!(
            "pattern order must lie in {MIN_ORDER}..={MAX_ORDER}, got {order}"
        )));
    }
    Ok(())
}

/// How equal values inside a window are ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    /// The earlier day receives the lower position.
    #[default]
    EarlierFirst,
    /// The later day receives the lower position.
    LaterFirst,
}

/// 1-based lexicographic rank of an ordinal pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PatternId(u32);

impl PatternId {
    pub fn new(id: u32, order: usize) -> Result<Self> {
        check_order(order)?;
        if id == 0 || id as usize > factorial(order) {
            return Err(Error::invalid(format!(
                "pattern id {id} outside 1..={} for order {order}",
                factorial(order)
            )));
        }
        Ok(PatternId(id))
    }

    pub(crate) fn from_index(index: usize) -> Self {
        PatternId(index as u32 + 1)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based slot in a count array.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OrdinalPattern {
    digits: Vec<u8>,
}

impl OrdinalPattern {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        check_order(digits.len())?;
        let mut seen = [false; MAX_ORDER];
        for &d in &digits {
            let d = d as usize;
            if d >= digits.len() || seen[d] {
                return Err(Error::invalid(format!(
                    "{digits:?} is not a permutation of 0..{}",
                    digits.len()
                )));
            }
            seen[d] = true;
        }
        Ok(OrdinalPattern { digits })
    }

    pub fn identity(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(OrdinalPattern {
            digits: (0..order as u8).collect(),
        })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn order(&self) -> usize {
        self.digits.len()
    }

    /// Day index holding rank position `position` (0 = worst).
    pub fn day_at(&self, position: usize) -> usize {
        self.digits[position] as usize
    }

    pub fn rank(&self) -> PatternId {
        PatternId::from_index(lehmer_rank(&self.digits))
    }

    pub fn unrank(id: PatternId, order: usize) -> Result<Self> {
        PatternId::new(id.get(), order)?;
        let mut digits = vec![0u8; order];
        lehmer_unrank(id.index(), &mut digits);
        Ok(OrdinalPattern { digits })
    }
}

impl fmt::Display for OrdinalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for OrdinalPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::invalid(format!("bad pattern digit {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        OrdinalPattern::new(digits)
    }
}

impl TryFrom<String> for OrdinalPattern {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<OrdinalPattern> for String {
    fn from(p: OrdinalPattern) -> String {
        p.to_string()
    }
}

/// Zero-based lexicographic rank of a permutation of `0..n`.
fn lehmer_rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank = rank * (n - i) + smaller_after;
    }
    rank
}

fn lehmer_unrank(mut rank: usize, out: &mut [u8]) {
    let n = out.len();
    let mut pool: Vec<u8> = (0..n as u8).collect();
    for (i, slot) in out.iter_mut().enumerate() {
        let weight = factorial(n - 1 - i);
        let pick = rank / weight;
        rank %= weight;
        *slot = pool.remove(pick);
    }
}

/// Sorted day order of `window`, written into `out`. Returns whether any two
/// values compared equal.
fn argsort_into(window: &[f64], tie_rule: TieRule, out: &mut [u8]) -> bool {
    let n = window.len();
    for (i, slot) in out.iter_mut().enumerate().take(n) {
        *slot = i as u8;
    }
    let out = &mut out[..n];
    // insertion sort: windows are tiny and the sort must be stable
    for i in 1..n {
        let mut j = i;
        while j > 0 {
            let a = window[out[j - 1] as usize];
            let b = window[out[j] as usize];
            let swap = a > b || (a == b && tie_rule == TieRule::LaterFirst && out[j - 1] < out[j]);
            if !swap {
                break;
            }
            out.swap(j - 1, j);
            j -= 1;
        }
    }
    // equal values always end up adjacent
    out.windows(2).any(|w| window[w[0] as usize] == window[w[1] as usize])
}

fn check_window(window: &[f64]) -> Result<()> {
    check_order(window.len())?;
    if let Some(pos) = window.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "non-finite value {} at window offset {pos}",
            window[pos]
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedWindow {
    pub pattern: OrdinalPattern,
    pub has_ties: bool,
}

pub fn encode_window(window: &[f64], tie_rule: TieRule) -> Result<EncodedWindow> {
    check_window(window)?;
    let mut digits = vec![0u8; window.len()];
    let has_ties = argsort_into(window, tie_rule, &mut digits);
    Ok(EncodedWindow {
        pattern: OrdinalPattern { digits },
        has_ties,
    })
}

/// Absolute frequency of each of the D! patterns over a set of windows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternDistribution {
    order: usize,
    counts: Vec<u64>,
    windows: u64,
    tied_windows: u64,
    /// Trailing observations that did not fill a complete window.
    discarded_tail: usize,
}

impl PatternDistribution {
    pub fn empty(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(PatternDistribution {
            order,
            counts: vec![0; factorial(order)],
            windows: 0,
            tied_windows: 0,
            discarded_tail: 0,
        })
    }

    /// Builds a distribution directly from counts indexed by `id - 1`.
    pub fn from_counts(order: usize, counts: Vec<u64>) -> Result<Self> {
        check_order(order)?;
        if counts.len() != factorial(order) {
            return Err(Error::invalid(format!(
                "expected {} counts for order {order}, got {}",
                factorial(order),
                counts.len()
            )));
        }
        let windows = counts.iter().sum();
        Ok(PatternDistribution {
            order,
            counts,
            windows,
            tied_windows: 0,
            discarded_tail: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, id: PatternId) -> u64 {
        self.counts[id.index()]
    }

    pub fn windows(&self) -> u64 {
        self.windows
    }

    pub fn tied_windows(&self) -> u64 {
        self.tied_windows
    }

    pub fn discarded_tail(&self) -> usize {
        self.discarded_tail
    }

    pub fn tie_fraction(&self) -> f64 {
        if self.windows == 0 {
            0.0
        } else {
            self.tied_windows as f64 / self.windows as f64
        }
    }

    pub fn ties_exceed(&self, threshold: f64) -> bool {
        self.tie_fraction() > threshold
    }

    pub fn relative_frequency(&self, id: PatternId) -> f64 {
        self.count(id) as f64 / self.windows as f64
    }

    /// Patterns that never occur.
    pub fn forbidden(&self) -> Vec<PatternId> {
        self.iter()
            .filter(|&(_, c)| c == 0)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PatternId, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (PatternId::from_index(i), c))
    }

    /// Sum of counts over a set of pattern ids.
    pub fn family_count(&self, ids: &[PatternId]) -> u64 {
        ids.iter().map(|&id| self.count(id)).sum()
    }

    /// Adds the counts of `other`, which must share the same order.
    pub fn merge(&mut self, other: &PatternDistribution) -> Result<()> {
        if self.order != other.order {
            return Err(Error::invalid(format!(
                "cannot merge order {} into order {}",
                other.order, self.order
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.windows += other.windows;
        self.tied_windows += other.tied_windows;
        self.discarded_tail += other.discarded_tail;
        Ok(())
    }

    fn record(&mut self, window: &[f64], tie_rule: TieRule, scratch: &mut [u8]) -> Result<()> {
        check_window(window)?;
        let tied = argsort_into(window, tie_rule, scratch);
        self.counts[lehmer_rank(&scratch[..window.len()])] += 1;
        self.windows += 1;
        if tied {
            self.tied_windows += 1;
        }
        Ok(())
    }
}

/// Counts patterns over windows `values[k*stride .. k*stride + order]`.
///
/// With `stride == order` the windows partition the series into consecutive
/// blocks; `stride == 1` gives fully overlapping windows.
pub fn count_patterns(
    values: &[f64],
    order: usize,
    stride: usize,
    tie_rule: TieRule,
) -> Result<PatternDistribution> {
    check_order(order)?;
    if stride == 0 {
        return Err(Error::invalid("stride must be at least 1"));
    }
    if values.len() < order {
        return Err(Error::invalid(format!(
            "series of length {} is shorter than the pattern order {order}",
            values.len()
        )));
    }
    let n_windows = (values.len() - order) / stride + 1;
    let mut dist = PatternDistribution::empty(order)?;
    let mut scratch = [0u8; MAX_ORDER];
    for k in 0..n_windows {
        let start = k * stride;
        dist.record(&values[start..start + order], tie_rule, &mut scratch)?;
    }
    dist.discarded_tail = values.len() - ((n_windows - 1) * stride + order);
    Ok(dist)
}

/// Counts patterns over pre-built windows, e.g. calendar weeks.
pub fn count_windows<'a, I>(windows: I, order: usize, tie_rule: TieRule) -> Result<PatternDistribution>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut dist = PatternDistribution::empty(order)?;
    let mut scratch = [0u8; MAX_ORDER];
    for (i, w) in windows.into_iter().enumerate() {
        if w.len() != order {
            return Err(Error::invalid(format!(
                "window {i} has length {}, expected {order}",
                w.len()
            )));
        }
        dist.record(w, tie_rule, &mut scratch)?;
    }
    Ok(dist)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternFamily {
    /// Day 0 holds the best return of the window.
    MondayLargest,
    /// Day 0 holds the worst return and day D-1 the best.
    MondayWorstFridayBest,
}

impl PatternFamily {
    /// Expected share of the family under uniformly distributed patterns.
    pub fn expected_share(self, order: usize) -> f64 {
        let free = match self {
            PatternFamily::MondayLargest => order - 1,
            PatternFamily::MondayWorstFridayBest => order - 2,
        };
        factorial(free) as f64 / factorial(order) as f64
    }
}

/// Rearranges `xs` into the next lexicographic permutation; false when `xs`
/// was already the last one.
fn next_permutation(xs: &mut [u8]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Ids of the patterns making up `family`, in increasing order.
pub fn pattern_family(family: PatternFamily, order: usize) -> Result<Vec<PatternId>> {
    check_order(order)?;
    if order < 3 {
        return Err(Error::invalid("pattern families need order >= 3"));
    }
    let last = order as u8 - 1;
    // fixed (position, day) pairs; the free days fill the remaining positions
    let (fixed, mut free): (Vec<(usize, u8)>, Vec<u8>) = match family {
        PatternFamily::MondayLargest => (vec![(order - 1, 0)], (1..=last).collect()),
        PatternFamily::MondayWorstFridayBest => {
            (vec![(0, 0), (order - 1, last)], (1..last).collect())
        }
    };
    let mut ids = Vec::with_capacity(factorial(free.len()));
    let mut digits = vec![0u8; order];
    loop {
        let mut it = free.iter();
        for (pos, slot) in digits.iter_mut().enumerate() {
            *slot = match fixed.iter().find(|(p, _)| *p == pos) {
                Some(&(_, day)) => day,
                None => *it.next().expect("free digits fill the open slots"),
            };
        }
        ids.push(PatternId::from_index(lehmer_rank(&digits)));
        if !next_permutation(&mut free) {
            break;
        }
    }
    ids.sort();
    Ok(ids)
}

/// All patterns of the given order in id order.
pub fn all_patterns(order: usize) -> Result<impl Iterator<Item = OrdinalPattern>> {
    check_order(order)?;
    let mut current: Option<Vec<u8>> = Some((0..order as u8).collect());
    Ok(std::iter::from_fn(move || {
        let digits = current.take()?;
        let mut next = digits.clone();
        if next_permutation(&mut next) {
            current = Some(next);
        }
        Some(OrdinalPattern { digits })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> OrdinalPattern {
        s.parse().unwrap()
    }

    #[test]
    fn encode_examples() {
        let p = encode_window(&[-2.0, 0.5, 3.0, 1.0, -1.0], TieRule::default()).unwrap();
        assert_eq!(p.pattern, pat("04132"));
        assert!(!p.has_ties);
        let p = encode_window(&[1.0, 2.0, 3.0, 4.0, 5.0], TieRule::default()).unwrap();
        assert_eq!(p.pattern, pat("01234"));
        let p = encode_window(&[5.0, 4.0, 3.0, 2.0, 1.0], TieRule::default()).unwrap();
        assert_eq!(p.pattern, pat("43210"));
    }

    #[test]
    fn ties_follow_rule() {
        let w = [1.0, 1.0, 2.0, 3.0, 4.0];
        let p = encode_window(&w, TieRule::EarlierFirst).unwrap();
        assert_eq!(p.pattern, pat("01234"));
        assert!(p.has_ties);
        let p = encode_window(&w, TieRule::LaterFirst).unwrap();
        assert_eq!(p.pattern, pat("10234"));
        assert!(p.has_ties);

        let w = [3.0, 1.0, 3.0, 0.0, 3.0];
        assert_eq!(encode_window(&w, TieRule::EarlierFirst).unwrap().pattern, pat("31024"));
        assert_eq!(encode_window(&w, TieRule::LaterFirst).unwrap().pattern, pat("31420"));
    }

    #[test]
    fn encode_rejects_bad_windows() {
        assert!(matches!(
            encode_window(&[1.0, f64::NAN, 2.0], TieRule::default()),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            encode_window(&[1.0, f64::INFINITY], TieRule::default()),
            Err(Error::InvalidInput(_))
        ));
        assert!(encode_window(&[1.0], TieRule::default()).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(pat("01234").rank().get(), 1);
        assert_eq!(pat("43210").rank().get(), 120);
        assert_eq!(pat("04132").rank().get(), 20);
        assert_eq!(pat("12340").rank().get(), 34);
    }

    #[test]
    fn unrank_examples() {
        let id = |n| PatternId::new(n, 5).unwrap();
        assert_eq!(OrdinalPattern::unrank(id(7), 5).unwrap(), pat("02134"));
        assert_eq!(OrdinalPattern::unrank(id(1), 5).unwrap(), pat("01234"));
        assert!(PatternId::new(0, 5).is_err());
        assert!(PatternId::new(121, 5).is_err());
        assert!(OrdinalPattern::unrank(id(7), 3).is_err());
    }

    #[test]
    fn pattern_validation() {
        assert!(OrdinalPattern::new(vec![0, 0, 1]).is_err());
        assert!(OrdinalPattern::new(vec![0, 3, 1]).is_err());
        assert!(OrdinalPattern::new(vec![0]).is_err());
        assert!("0a1".parse::<OrdinalPattern>().is_err());
    }

    #[test]
    fn count_increasing_series() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let d = count_patterns(&xs, 5, 5, TieRule::default()).unwrap();
        assert_eq!(d.windows(), 2);
        assert_eq!(d.counts()[0], 2);
        assert_eq!(d.counts().iter().sum::<u64>(), 2);
        assert_eq!(d.discarded_tail(), 0);
    }

    #[test]
    fn count_window_arithmetic() {
        let xs: Vec<f64> = (0..13550).map(|i| ((i * 7919) % 104729) as f64).collect();
        let d = count_patterns(&xs, 5, 5, TieRule::default()).unwrap();
        assert_eq!(d.windows(), 2710);

        let d = count_patterns(&xs[..13], 5, 5, TieRule::default()).unwrap();
        assert_eq!(d.windows(), 2);
        assert_eq!(d.discarded_tail(), 3);

        let d = count_patterns(&xs[..13], 5, 1, TieRule::default()).unwrap();
        assert_eq!(d.windows(), 9);
        assert_eq!(d.discarded_tail(), 0);

        assert!(count_patterns(&xs[..4], 5, 5, TieRule::default()).is_err());
        assert!(count_patterns(&xs, 5, 0, TieRule::default()).is_err());
    }

    #[test]
    fn tie_counter() {
        let xs = [1.0, 1.0, 2.0, 3.0, 4.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let d = count_patterns(&xs, 5, 5, TieRule::default()).unwrap();
        assert_eq!(d.tied_windows(), 1);
        assert!((d.tie_fraction() - 0.5).abs() < 1e-15);
        assert!(d.ties_exceed(DEFAULT_TIE_WARNING));
    }

    #[test]
    fn families_d5() {
        let ml: Vec<u32> = pattern_family(PatternFamily::MondayLargest, 5)
            .unwrap()
            .into_iter()
            .map(PatternId::get)
            .collect();
        assert_eq!(
            ml,
            vec![
                34, 36, 40, 42, 46, 48, 58, 60, 64, 66, 70, 72, 82, 84, 88, 90, 94, 96, 106, 108,
                112, 114, 118, 120
            ]
        );
        let mf: Vec<u32> = pattern_family(PatternFamily::MondayWorstFridayBest, 5)
            .unwrap()
            .into_iter()
            .map(PatternId::get)
            .collect();
        assert_eq!(mf, vec![1, 3, 7, 9, 13, 15]);
    }

    #[test]
    fn family_d3() {
        let ml: Vec<u32> = pattern_family(PatternFamily::MondayLargest, 3)
            .unwrap()
            .into_iter()
            .map(PatternId::get)
            .collect();
        assert_eq!(ml, vec![4, 6]);
        assert!(pattern_family(PatternFamily::MondayLargest, 2).is_err());
    }

    #[test]
    fn expected_shares() {
        assert!((PatternFamily::MondayLargest.expected_share(5) - 0.2).abs() < 1e-15);
        assert!((PatternFamily::MondayWorstFridayBest.expected_share(5) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn merge_is_additive() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64 + i as f64 * 0.01).collect();
        let whole = count_patterns(&xs, 5, 5, TieRule::default()).unwrap();
        let mut a = count_patterns(&xs[..25], 5, 5, TieRule::default()).unwrap();
        let b = count_patterns(&xs[25..], 5, 5, TieRule::default()).unwrap();
        a.merge(&b).unwrap();
        assert_eq!(a.counts(), whole.counts());
        assert_eq!(a.windows(), whole.windows());
        assert!(a.merge(&PatternDistribution::empty(4).unwrap()).is_err());
    }

    #[test]
    fn serde_pattern_as_string() {
        let p = pat("04132");
        let s: String = p.clone().into();
        assert_eq!(s, "04132");
        assert_eq!(OrdinalPattern::try_from(s).unwrap(), p);
    }
}
