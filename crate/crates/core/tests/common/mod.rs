//! Reference NYSE tables and loaders for the reconstructed pattern fixtures.
#![allow(dead_code)]

pub mod checks;
pub mod oracle;

use std::path::{Path, PathBuf};

use ordinal_seasonality::{OrdinalPattern, PatternDistribution};

/// Day-by-position counts, rows Monday..Friday, columns worst..best.
pub type Matrix = [[u64; 5]; 5];

/// Row and column Q statistics with their significance markers.
pub struct ReferenceTable {
    pub name: &'static str,
    pub matrix: Matrix,
    pub row_q: [(f64, &'static str); 5],
    pub col_q: [(f64, &'static str); 5],
}

pub const WHOLE_PERIOD: ReferenceTable = ReferenceTable {
    name: "whole period",
    matrix: [
        [637, 503, 537, 501, 532],
        [557, 572, 475, 509, 597],
        [479, 540, 564, 564, 563],
        [570, 505, 564, 581, 490],
        [467, 590, 570, 555, 528],
    ],
    row_q: [
        (22.78967, "***"),
        (17.94834, "***"),
        (9.92989, "**"),
        (12.66052, "**"),
        (16.74908, "***"),
    ],
    col_q: [
        (36.21402, "***"),
        (11.25092, "**"),
        (11.56089, "**"),
        (9.12177, "*"),
        (11.92989, "**"),
    ],
};

pub const SHUFFLED: ReferenceTable = ReferenceTable {
    name: "shuffled",
    matrix: [
        [506, 469, 501, 484, 480],
        [488, 508, 472, 498, 474],
        [513, 475, 491, 471, 490],
        [479, 491, 509, 482, 479],
        [454, 497, 467, 505, 517],
    ],
    row_q: [
        (1.91393, ""),
        (1.95082, ""),
        (2.24590, ""),
        (1.32787, ""),
        (5.75410, ""),
    ],
    col_q: [
        (4.47951, ""),
        (2.09016, ""),
        (2.69672, ""),
        (1.49590, ""),
        (2.43033, ""),
    ],
};

pub const SUBPERIODS: [ReferenceTable; 5] = [
    ReferenceTable {
        name: "subperiod 1",
        matrix: [
            [182, 121, 105, 97, 105],
            [108, 145, 107, 124, 126],
            [108, 99, 120, 142, 141],
            [116, 119, 138, 132, 105],
            [96, 126, 140, 115, 133],
        ],
        row_q: [
            (39.37705, "***"),
            (7.95082, "*"),
            (12.21311, "**"),
            (5.65574, ""),
            (9.72131, "**"),
        ],
        col_q: [
            (38.55738, "***"),
            (8.88525, "*"),
            (9.00000, "*"),
            (9.65574, "**"),
            (8.81967, "*"),
        ],
    },
    ReferenceTable {
        name: "subperiod 2",
        matrix: [
            [165, 111, 110, 107, 117],
            [138, 117, 111, 104, 140],
            [100, 125, 129, 131, 125],
            [112, 119, 129, 148, 102],
            [95, 138, 131, 120, 126],
        ],
        row_q: [
            (19.37705, "***"),
            (8.60656, "*"),
            (5.18033, ""),
            (10.11475, "**"),
            (8.90164, "*"),
        ],
        col_q: [
            (28.01639, "***"),
            (3.44262, ""),
            (3.63934, ""),
            (10.73770, "**"),
            (6.34426, ""),
        ],
    },
    ReferenceTable {
        name: "subperiod 3",
        matrix: [
            [109, 105, 133, 126, 137],
            [136, 124, 103, 119, 128],
            [89, 141, 147, 125, 108],
            [154, 117, 108, 123, 108],
            [122, 123, 119, 117, 129],
        ],
        row_q: [
            (6.72131, ""),
            (4.96721, ""),
            (18.68852, "***"),
            (11.81967, "**"),
            (0.68852, ""),
        ],
        col_q: [
            (20.31148, "***"),
            (5.57377, ""),
            (10.75410, "**"),
            (0.49180, ""),
            (5.75410, ""),
        ],
    },
    ReferenceTable {
        name: "subperiod 4",
        matrix: [
            [134, 106, 121, 128, 121],
            [112, 139, 117, 106, 136],
            [126, 115, 125, 115, 129],
            [131, 105, 121, 125, 128],
            [107, 145, 126, 136, 96],
        ],
        row_q: [
            (3.59016, ""),
            (7.09836, ""),
            (1.40984, ""),
            (3.40984, ""),
            (13.45902, "***"),
        ],
        col_q: [
            (4.63934, ""),
            (11.57377, "**"),
            (0.42623, ""),
            (4.47541, ""),
            (7.85246, "*"),
        ],
    },
    ReferenceTable {
        name: "subperiod 5",
        matrix: [
            [47, 60, 68, 43, 52],
            [63, 47, 37, 56, 67],
            [56, 60, 43, 51, 60],
            [57, 45, 68, 53, 47],
            [47, 58, 54, 67, 44],
        ],
        row_q: [
            (7.51852, ""),
            (10.96296, "**"),
            (3.81481, ""),
            (6.22222, ""),
            (6.18519, ""),
        ],
        col_q: [
            (3.55556, ""),
            (4.03704, ""),
            (14.85185, "***"),
            (5.62963, ""),
            (6.62963, ""),
        ],
    },
];

/// Subperiod lengths in returns.
pub const SUBPERIOD_LENGTHS: [usize; 5] = [3050, 3050, 3050, 3050, 1350];

/// Monday-largest ids as listed with the hypothesis.
pub const MONDAY_LARGEST_IDS: [u32; 24] = [
    34, 36, 40, 42, 46, 48, 58, 60, 64, 66, 70, 72, 82, 84, 88, 90, 94, 96, 106, 108, 112, 114,
    118, 120,
];

/// Monday-worst, Friday-best ids as listed with the hypothesis.
pub const MONDAY_WORST_FRIDAY_BEST_IDS: [u32; 6] = [1, 3, 7, 9, 13, 15];

/// Works from either crate of the workspace.
pub fn fixtures_dir() -> PathBuf {
    let here = Path::new(env!("CARGO_MANIFEST_DIR"));
    let own = here.join("tests/fixtures");
    if own.is_dir() {
        own
    } else {
        here.join("../core/tests/fixtures")
    }
}

/// Reads a `pattern,<count columns...>` file into one distribution per column.
fn read_count_columns(path: &Path) -> Vec<PatternDistribution> {
    let mut reader = csv::Reader::from_path(path).expect("fixture readable");
    let width = reader.headers().unwrap().len() - 1;
    let mut columns = vec![vec![0u64; 120]; width];
    let mut seen = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let p: OrdinalPattern = rec[0].parse().unwrap();
        for (c, col) in columns.iter_mut().enumerate() {
            col[p.rank().index()] = rec[c + 1].parse().unwrap();
        }
        seen += 1;
    }
    assert_eq!(seen, 120, "fixture must list every pattern");
    columns
        .into_iter()
        .map(|c| PatternDistribution::from_counts(5, c).unwrap())
        .collect()
}

/// One distribution per subperiod, in chronological order.
pub fn subperiod_distributions() -> Vec<PatternDistribution> {
    read_count_columns(&fixtures_dir().join("nyse_subperiod_counts.csv"))
}

pub fn whole_period_distribution() -> PatternDistribution {
    let mut parts = subperiod_distributions().into_iter();
    let mut whole = parts.next().unwrap();
    for p in parts {
        whole.merge(&p).unwrap();
    }
    whole
}

pub fn shuffled_distribution() -> PatternDistribution {
    read_count_columns(&fixtures_dir().join("nyse_shuffled_counts.csv"))
        .pop()
        .unwrap()
}

/// Independent position matrix: tally digits directly from pattern strings.
pub fn tally_matrix(dist: &PatternDistribution) -> Matrix {
    let mut m = [[0u64; 5]; 5];
    for (id, count) in dist.iter() {
        let p = OrdinalPattern::unrank(id, 5).unwrap();
        let s = p.to_string();
        for (pos, ch) in s.chars().enumerate() {
            m[ch.to_digit(10).unwrap() as usize][pos] += count;
        }
    }
    m
}

/// Pearson statistic against a uniform expectation, computed from scratch.
pub fn pearson(xs: &[u64]) -> f64 {
    let fe = xs.iter().sum::<u64>() as f64 / xs.len() as f64;
    xs.iter().map(|&x| (x as f64 - fe).powi(2) / fe).sum()
}
