//! Statistical machinery: two-sample KS tests between delivery years,
//! significance flags, z-scored yearly means and quadratic smoothing.

mod ks;
mod trend;

pub use ks::{kolmogorov_q, ks_gap_scaled, ks_p_value, ks_two_sample, KsResult};
pub use trend::{build_trend, polyfit2, zscore_series, QuadFit, TrendSeries, ZScores};

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::format::{p4, sig6};
use crate::lexicon::MoodScale;
use crate::scoring::Buckets;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("input contains NaN or infinite values")]
    NonFinite,
    #[error("series needs at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("quadratic fit needs at least 3 distinct x values, got {got}")]
    TooFewDistinct { got: usize },
    #[error("x and y lengths differ ({xs} vs {ys})")]
    LengthMismatch { xs: usize, ys: usize },
    #[error("need at least {needed} non-empty year buckets, got {got}")]
    TooFewBuckets { needed: usize, got: usize },
    #[error("thresholds must satisfy 0 < significant ({significant}) < marginal ({marginal}) < 1")]
    InvalidThresholds { significant: f64, marginal: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Significance {
    None,
    Marginal,
    Significant,
}

impl Significance {
    pub fn label(self) -> &'static str {
        match self {
            Significance::None => "none",
            Significance::Marginal => "marginal",
            Significance::Significant => "significant",
        }
    }

    /// Figure annotation: `*` marginal, `**` significant.
    pub fn stars(self) -> &'static str {
        match self {
            Significance::None => "",
            Significance::Marginal => "*",
            Significance::Significant => "**",
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub significant: f64,
    pub marginal: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            significant: 0.05,
            marginal: 0.1,
        }
    }
}

impl Thresholds {
    pub fn new(significant: f64, marginal: f64) -> Result<Self, StatsError> {
        if !(0.0 < significant && significant < marginal && marginal < 1.0) {
            return Err(StatsError::InvalidThresholds { significant, marginal });
        }
        Ok(Thresholds { significant, marginal })
    }

    pub fn classify(&self, p: f64) -> Significance {
        if p < self.significant {
            Significance::Significant
        } else if p < self.marginal {
            Significance::Marginal
        } else {
            Significance::None
        }
    }
}

/// KS results for every pair of delivery years, for one scale.
///
/// Pairs are stored once with `year_a < year_b`; lookups accept either
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceMatrix {
    pub dimension: MoodScale,
    cells: BTreeMap<(i32, i32), (KsResult, Significance)>,
    /// Years skipped because their bucket holds no vectors.
    pub skipped: Vec<i32>,
}

impl SignificanceMatrix {
    fn key(a: i32, b: i32) -> (i32, i32) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn get(&self, a: i32, b: i32) -> Option<&KsResult> {
        self.cells.get(&Self::key(a, b)).map(|(r, _)| r)
    }

    pub fn flag(&self, a: i32, b: i32) -> Option<Significance> {
        self.cells.get(&Self::key(a, b)).map(|&(_, f)| f)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `(year_a, year_b, result, flag)` with `year_a < year_b`, ordered.
    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, &KsResult, Significance)> {
        self.cells.iter().map(|(&(a, b), (r, f))| (a, b, r, *f))
    }

    pub fn count(&self, flag: Significance) -> usize {
        self.cells.values().filter(|(_, f)| *f == flag).count()
    }

    /// `year_a,year_b,dimension,d,p,flag`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["year_a", "year_b", "dimension", "d", "p", "flag"])?;
        for (a, b, r, f) in self.iter() {
            w.write_record([
                a.to_string(),
                b.to_string(),
                self.dimension.label().to_owned(),
                sig6(r.d_statistic),
                p4(r.p_value),
                f.label().to_owned(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn pairwise_ks(buckets: &Buckets, dimension: MoodScale) -> Result<SignificanceMatrix, StatsError> {
    pairwise_ks_with(buckets, dimension, Thresholds::default(), Exec::default())
}

/// Runs the KS test on the `dimension` components of every pair of
/// non-empty year buckets.
pub fn pairwise_ks_with(
    buckets: &Buckets,
    dimension: MoodScale,
    thresholds: Thresholds,
    exec: Exec,
) -> Result<SignificanceMatrix, StatsError> {
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for b in buckets.values() {
        if b.is_empty() {
            skipped.push(b.year);
        } else {
            samples.push((b.year, b.sample(dimension)));
        }
    }
    if samples.len() < 2 {
        return Err(StatsError::TooFewBuckets {
            needed: 2,
            got: samples.len(),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..samples.len())
        .flat_map(|i| (i + 1..samples.len()).map(move |j| (i, j)))
        .collect();
    let results = exec.map(&pairs, |&(i, j)| ks_two_sample(&samples[i].1, &samples[j].1));

    let mut cells = BTreeMap::new();
    for (&(i, j), r) in pairs.iter().zip(results) {
        let r = r?;
        cells.insert((samples[i].0, samples[j].0), (r, thresholds.classify(r.p_value)));
    }
    Ok(SignificanceMatrix {
        dimension,
        cells,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{normalize, MoodVector, YearBucket};

    fn bucket(year: i32, depression: &[f64]) -> YearBucket {
        let mut b = YearBucket::new(year);
        for &d in depression {
            let v = MoodVector::raw([1.0, d, 0.0, 0.0, 0.0, 0.0]);
            b.push(normalize(&v).unwrap());
        }
        b
    }

    #[test]
    fn thresholds_classify() {
        let t = Thresholds::default();
        assert_eq!(t.classify(0.049), Significance::Significant);
        assert_eq!(t.classify(0.05), Significance::Marginal);
        assert_eq!(t.classify(0.0999), Significance::Marginal);
        assert_eq!(t.classify(0.1), Significance::None);
        assert!(Thresholds::new(0.1, 0.05).is_err());
        assert!(Thresholds::new(0.0, 0.05).is_err());
        assert!(Thresholds::new(0.05, 1.0).is_err());
    }

    #[test]
    fn identical_buckets_are_unflagged() {
        let buckets = Buckets::from([
            (2010, bucket(2010, &[1.0, 2.0, 3.0])),
            (2011, bucket(2011, &[3.0, 1.0, 2.0])),
        ]);
        let m = pairwise_ks(&buckets, MoodScale::Depression).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.get(2011, 2010).unwrap().p_value, 1.0);
        assert_eq!(m.flag(2010, 2011), Some(Significance::None));
    }

    #[test]
    fn separated_buckets_are_significant() {
        let low: Vec<f64> = (0..50).map(|i| 0.1 + 0.001 * f64::from(i)).collect();
        let high: Vec<f64> = (0..50).map(|i| 9.0 + 0.01 * f64::from(i)).collect();
        let buckets = Buckets::from([(2007, bucket(2007, &low)), (2012, bucket(2012, &high))]);
        let m = pairwise_ks(&buckets, MoodScale::Depression).unwrap();
        assert_eq!(m.flag(2007, 2012), Some(Significance::Significant));
        assert_eq!(m.get(2007, 2012).unwrap().d_statistic, 1.0);
    }

    #[test]
    fn empty_buckets_skipped_and_minimum_enforced() {
        let mut empty = YearBucket::new(2020);
        empty.zero_match_count = 4;
        let buckets = Buckets::from([
            (2010, bucket(2010, &[1.0])),
            (2011, bucket(2011, &[2.0])),
            (2020, empty.clone()),
        ]);
        let m = pairwise_ks(&buckets, MoodScale::Anger).unwrap();
        assert_eq!(m.skipped, [2020]);
        assert_eq!(m.len(), 1);

        let one = Buckets::from([(2010, bucket(2010, &[1.0])), (2020, empty)]);
        assert_eq!(
            pairwise_ks(&one, MoodScale::Anger),
            Err(StatsError::TooFewBuckets { needed: 2, got: 1 })
        );
    }

    #[test]
    fn csv_layout() {
        let buckets = Buckets::from([(2010, bucket(2010, &[1.0, 2.0])), (2011, bucket(2011, &[5.0, 6.0]))]);
        let m = pairwise_ks(&buckets, MoodScale::Depression).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("year_a,year_b,dimension,d,p,flag"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("2010,2011,depression,1,0."), "{row}");
    }

    #[test]
    fn trend_on_constant_buckets_is_degenerate() {
        let buckets: Buckets = (2010..2015).map(|y| (y, bucket(y, &[2.0, 2.0]))).collect();
        let t = build_trend(&buckets, MoodScale::Depression).unwrap();
        assert!(t.degenerate);
        assert!(t.z_scores.iter().all(|&z| z == 0.0));
        assert!(t.fitted.iter().all(|&f| f.abs() < 1e-12));
    }

    #[test]
    fn trend_rising_means_fit_monotone() {
        let buckets: Buckets = (0..8)
            .map(|i| {
                (
                    2006 + i,
                    bucket(2006 + i, &[0.1 + 0.05 * f64::from(i), 0.12 + 0.05 * f64::from(i)]),
                )
            })
            .collect();
        let t = build_trend(&buckets, MoodScale::Depression).unwrap();
        assert!(t.fitted.windows(2).all(|w| w[1] > w[0]), "{:?}", t.fitted);
        for (i, x) in t.x_centered.iter().enumerate() {
            let [c0, c1, c2] = t.fit_coeffs;
            assert!((t.fitted[i] - (c0 + c1 * x + c2 * x * x)).abs() < 1e-9);
        }
        assert!((t.fit_at_year(2006.0) - t.fitted[0]).abs() < 1e-9);
    }

    #[test]
    fn trend_needs_three_buckets() {
        let buckets: Buckets = (2010..2012).map(|y| (y, bucket(y, &[1.0]))).collect();
        assert_eq!(
            build_trend(&buckets, MoodScale::Vigor),
            Err(StatsError::TooFewBuckets { needed: 3, got: 2 })
        );
    }
}
