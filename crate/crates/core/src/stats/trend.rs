use std::io::Write;

use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::format::sig6;
use crate::lexicon::MoodScale;
use crate::scoring::Buckets;

/// Relative size below which a standard deviation counts as zero.
const DEGENERATE_STD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ZScores {
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// The input was constant; `values` are all zero.
    pub degenerate: bool,
}

/// `(v - mean) / std` with the sample (n - 1) standard deviation.
pub fn zscore_series(values: &[f64]) -> Result<ZScores, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooShort {
            needed: 2,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if std <= DEGENERATE_STD * scale.max(f64::MIN_POSITIVE) {
        return Ok(ZScores {
            values: vec![0.0; values.len()],
            mean,
            std,
            degenerate: true,
        });
    }
    Ok(ZScores {
        values: values.iter().map(|v| (v - mean) / std).collect(),
        mean,
        std,
        degenerate: false,
    })
}

/// Least-squares quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadFit {
    /// `(c0, c1, c2)` in the coordinates of the `xs` passed in.
    pub coeffs: [f64; 3],
    pub fitted: Vec<f64>,
}

impl QuadFit {
    pub fn eval(&self, x: f64) -> f64 {
        let [c0, c1, c2] = self.coeffs;
        c0 + x * (c1 + x * c2)
    }
}

/// Fits `y = c0 + c1 x + c2 x^2` by least squares.
///
/// The xs are centered and scaled, the fit is done in a discrete orthogonal
/// polynomial basis over those points, and the result is mapped back to
/// monomial coefficients in the original x.
pub fn polyfit2(xs: &[f64], ys: &[f64]) -> Result<QuadFit, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch {
            xs: xs.len(),
            ys: ys.len(),
        });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(StatsError::TooFewDistinct { got: distinct.len() });
    }

    let n = xs.len() as f64;
    let mu = xs.iter().sum::<f64>() / n;
    let s = xs.iter().fold(0.0f64, |acc, x| acc.max((x - mu).abs()));
    let v: Vec<f64> = xs.iter().map(|x| (x - mu) / s).collect();

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    // p0 = 1, p1 = v - a1, p2 = (v - a2) p1 - b1
    let a1 = v.iter().sum::<f64>() / n;
    let p1: Vec<f64> = v.iter().map(|x| x - a1).collect();
    let p1p1 = dot(&p1, &p1);
    let vp1p1: f64 = v.iter().zip(&p1).map(|(x, p)| x * p * p).sum();
    let a2 = vp1p1 / p1p1;
    let b1 = p1p1 / n;
    let p2: Vec<f64> = v.iter().zip(&p1).map(|(x, p)| (x - a2) * p - b1).collect();
    let p2p2 = dot(&p2, &p2);

    let g0 = ys.iter().sum::<f64>() / n;
    let g1 = dot(ys, &p1) / p1p1;
    let g2 = dot(ys, &p2) / p2p2;

    let fitted: Vec<f64> = p1.iter().zip(&p2).map(|(q1, q2)| g0 + g1 * q1 + g2 * q2).collect();

    // Expand to y = A + B v + C v^2, then substitute v = (x - mu) / s.
    let c = g2;
    let b = g1 - g2 * (a1 + a2);
    let a = g0 - g1 * a1 + g2 * (a1 * a2 - b1);
    let (b, c) = (b / s, c / (s * s));
    let coeffs = [a - b * mu + c * mu * mu, b - 2.0 * c * mu, c];

    Ok(QuadFit { coeffs, fitted })
}

/// Yearly trend of one mood scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub dimension: MoodScale,
    pub years: Vec<i32>,
    /// Year index (`year - first year`) minus its mean; the fit's x.
    pub x_centered: Vec<f64>,
    pub raw_means: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub degenerate: bool,
    pub fit_coeffs: [f64; 3],
    pub fitted: Vec<f64>,
}

impl TrendSeries {
    /// Fitted value at a (possibly fractional) calendar year.
    pub fn fit_at_year(&self, year: f64) -> f64 {
        let first = f64::from(self.years[0]);
        let mean_idx = self.years.iter().map(|&y| f64::from(y) - first).sum::<f64>() / self.years.len() as f64;
        let x = year - first - mean_idx;
        let [c0, c1, c2] = self.fit_coeffs;
        c0 + x * (c1 + x * c2)
    }

    /// `year,raw_mean,z,fitted`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["year", "raw_mean", "z", "fitted"])?;
        for i in 0..self.years.len() {
            w.write_record([
                self.years[i].to_string(),
                sig6(self.raw_means[i]),
                sig6(self.z_scores[i]),
                sig6(self.fitted[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-year means of one scale, z-scored across years, with a global
/// quadratic fit over the z-scores.
pub fn build_trend(buckets: &Buckets, dimension: MoodScale) -> Result<TrendSeries, StatsError> {
    let filled: Vec<_> = buckets.values().filter(|b| !b.is_empty()).collect();
    if filled.len() < 3 {
        return Err(StatsError::TooFewBuckets {
            needed: 3,
            got: filled.len(),
        });
    }
    let years: Vec<i32> = filled.iter().map(|b| b.year).collect();
    let raw_means: Vec<f64> = filled
        .iter()
        .map(|b| b.mean(dimension).expect("non-empty bucket"))
        .collect();
    let z = zscore_series(&raw_means)?;

    let first = years[0];
    let idx: Vec<f64> = years.iter().map(|&y| f64::from(y - first)).collect();
    let mean_idx = idx.iter().sum::<f64>() / idx.len() as f64;
    let x_centered: Vec<f64> = idx.iter().map(|i| i - mean_idx).collect();
    let fit = polyfit2(&x_centered, &z.values)?;

    Ok(TrendSeries {
        dimension,
        years,
        x_centered,
        raw_means,
        z_scores: z.values,
        degenerate: z.degenerate,
        fit_coeffs: fit.coeffs,
        fitted: fit.fitted,
    })
}
