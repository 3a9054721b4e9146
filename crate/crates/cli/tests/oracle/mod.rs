//! Reference implementations of the two-sample KS statistic and its
//! permutation distribution, written independently of the library.

use rand::seq::SliceRandom;
use rand::Rng;

/// `n*m*D` by direct evaluation of both empirical CDFs at every pooled
/// value (quadratic, no merging tricks).
pub fn gap_brute(a: &[f64], b: &[f64]) -> u64 {
    let (n, m) = (a.len() as i64, b.len() as i64);
    a.iter()
        .chain(b)
        .map(|&x| {
            let fa = a.iter().filter(|&&v| v <= x).count() as i64;
            let fb = b.iter().filter(|&&v| v <= x).count() as i64;
            (fa * m - fb * n).unsigned_abs()
        })
        .max()
        .unwrap_or(0)
}

/// Exact permutation p-value `P(gap >= observed)` for tie-free samples,
/// by counting monotone lattice paths from (0,0) to (n,m) that stay
/// strictly inside `|i*m - j*n| < observed`.
pub fn exact_perm_p(n: usize, m: usize, observed: u64) -> f64 {
    let inside = |i: usize, j: usize| ((i * m) as i64 - (j * n) as i64).unsigned_abs() < observed;
    let mut row = vec![0u128; m + 1];
    for i in 0..=n {
        for j in 0..=m {
            row[j] = if !inside(i, j) {
                0
            } else if i == 0 && j == 0 {
                1
            } else {
                let up = if i > 0 { row[j] } else { 0 };
                let left = if j > 0 { row[j - 1] } else { 0 };
                up + left
            };
        }
    }
    let total = binomial(n + m, n);
    1.0 - row[m] as f64 / total as f64
}

pub fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Monte-Carlo permutation p-value: relabels the pooled sample `resamples`
/// times and counts gaps at least as large as the observed one.
pub fn mc_perm_p<R: Rng>(a: &[f64], b: &[f64], resamples: usize, rng: &mut R) -> f64 {
    let (n, m) = (a.len(), b.len());
    let observed = gap_brute(a, b);
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let mut labels: Vec<bool> = (0..n + m).map(|k| k < n).collect();
    let mut hits = 0usize;
    for _ in 0..resamples {
        labels.shuffle(rng);
        let (mut i, mut j, mut best) = (0i64, 0i64, 0u64);
        for k in 0..pooled.len() {
            if labels[k] {
                i += 1;
            } else {
                j += 1;
            }
            // Evaluate only after the last of a run of tied values.
            if k + 1 == pooled.len() || pooled[k + 1] != pooled[k] {
                best = best.max((i * m as i64 - j * n as i64).unsigned_abs());
            }
        }
        if best >= observed {
            hits += 1;
        }
    }
    hits as f64 / resamples as f64
}
