use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::StatsError;

/// Series terms below this magnitude end the summation.
const SERIES_EPS: f64 = 1e-10;

/// Outcome of a two-sample, two-sided Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d_statistic: f64,
    pub p_value: f64,
    pub n: usize,
    pub m: usize,
}

/// Largest gap between the two empirical CDFs, as the integer
/// `max |i*m - j*n|` over all sample points (D times `n*m`).
///
/// Both samples must be sorted ascending.
pub fn ks_gap_scaled(a: &[f64], b: &[f64]) -> u64 {
    let (n, m) = (a.len() as i64, b.len() as i64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0i64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as i64 * m - j as i64 * n).abs());
    }
    best as u64
}

fn sorted(sample: &[f64]) -> Result<Vec<f64>, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample two-sided KS test with the asymptotic p-value.
///
/// D is exact (ties handled by stepping over equal values together). The
/// p-value is `Q_KS(lambda)` with `lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D`
/// and `ne = n*m/(n+m)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    let sa = sorted(a)?;
    let sb = sorted(b)?;
    let (n, m) = (sa.len(), sb.len());
    let d = ks_gap_scaled(&sa, &sb) as f64 / (n as f64 * m as f64);
    Ok(KsResult {
        d_statistic: d,
        p_value: ks_p_value(d, n, m),
        n,
        m,
    })
}

/// Asymptotic two-sided p-value for statistic `d` with sample sizes `n`, `m`.
pub fn ks_p_value(d: f64, n: usize, m: usize) -> f64 {
    let ne = (n as f64 * m as f64) / (n + m) as f64;
    let sq = ne.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// Kolmogorov survival function
/// `Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2)`.
///
/// That alternating series converges slowly for small lambda, so below
/// 1.18 the equivalent form `1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))`
/// is summed instead.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        let y = (-PI * PI / (8.0 * lambda * lambda)).exp();
        let mut sum = 0.0;
        for k in 1..=100u32 {
            let odd = f64::from(2 * k - 1);
            let term = y.powf(odd * odd);
            sum += term;
            if term < SERIES_EPS {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let a = -2.0 * lambda * lambda;
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100u32 {
            let kf = f64::from(k);
            let term = 2.0 * sign * (a * kf * kf).exp();
            sum += term;
            if term.abs() < SERIES_EPS {
                break;
            }
            sign = -sign;
        }
        sum
    };
    q.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_samples() {
        let a = [0.3, 0.1, 0.2, 0.2];
        let r = ks_two_sample(&a, &[0.2, 0.1, 0.3, 0.2]).unwrap();
        assert_eq!(r.d_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn disjoint_supports() {
        let r = ks_two_sample(&[0.1, 0.2], &[0.8, 0.9]).unwrap();
        assert_eq!(r.d_statistic, 1.0);
        assert!(r.p_value < 1.0);
        assert_eq!((r.n, r.m), (2, 2));
    }

    #[test]
    fn interleaved_shift() {
        let r = ks_two_sample(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.5, 2.5, 3.5, 4.5, 5.5]).unwrap();
        assert!((r.d_statistic - 0.2).abs() < 1e-15);
    }

    #[test]
    fn ties_across_samples() {
        // F_a jumps to 1 at 1.0 while F_b is 2/3 there.
        let r = ks_two_sample(&[1.0, 1.0], &[0.5, 1.0, 1.0]).unwrap();
        assert!((r.d_statistic - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_and_nan_are_errors() {
        assert_eq!(ks_two_sample(&[], &[1.0]), Err(StatsError::EmptySample));
        assert_eq!(ks_two_sample(&[1.0], &[f64::NAN]), Err(StatsError::NonFinite));
    }

    #[test]
    fn q_reference_values() {
        // Q(1.0) and Q(0.5) from the alternating series summed to convergence.
        assert!((kolmogorov_q(1.0) - 0.26999967167735456).abs() < 1e-9);
        assert!((kolmogorov_q(0.5) - 0.9639452436648751).abs() < 1e-9);
        assert!((kolmogorov_q(1.36) - 0.04947).abs() < 1e-4);
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(10.0) < 1e-80);
    }

    #[test]
    fn branches_meet_smoothly() {
        let below = kolmogorov_q(1.18 - 1e-12);
        let above = kolmogorov_q(1.18);
        assert!((below - above).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn symmetric(a in prop::collection::vec(-5.0f64..5.0, 1..40), b in prop::collection::vec(-5.0f64..5.0, 1..40)) {
            prop_assert_eq!(ks_two_sample(&a, &b).unwrap().d_statistic, ks_two_sample(&b, &a).unwrap().d_statistic);
            prop_assert_eq!(ks_two_sample(&a, &b).unwrap().p_value, ks_two_sample(&b, &a).unwrap().p_value);
        }

        #[test]
        fn p_non_increasing_in_d(n in 1usize..200, m in 1usize..200, d1 in 0.0f64..1.0, d2 in 0.0f64..1.0) {
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(ks_p_value(hi, n, m) <= ks_p_value(lo, n, m));
        }

        #[test]
        fn large_shift_gives_d_one(a in prop::collection::vec(-5.0f64..5.0, 1..30), extra in 0.001f64..3.0) {
            let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let delta = hi - lo + extra;
            let b: Vec<f64> = a.iter().map(|x| x + delta).collect();
            prop_assert_eq!(ks_two_sample(&a, &b).unwrap().d_statistic, 1.0);
        }

        #[test]
        fn bounds(a in prop::collection::vec(-5.0f64..5.0, 1..30), b in prop::collection::vec(-5.0f64..5.0, 1..30)) {
            let r = ks_two_sample(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.d_statistic));
            prop_assert!((0.0..=1.0).contains(&r.p_value));
        }
    }
}
