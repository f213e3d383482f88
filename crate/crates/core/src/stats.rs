//! Small statistics helpers for the Monte Carlo reports.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Sample mean, unbiased variance and the standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { n, mean: f64::NAN, variance: f64::NAN, se: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self { n, mean, variance, se: (variance / n as f64).sqrt() }
    }

    /// Standard error of the sample variance, from the fourth central moment.
    pub fn variance_se(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let s = Self::of(xs);
        let m4 = xs.iter().map(|x| (x - s.mean).powi(4)).sum::<f64>() / n;
        ((m4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Cells left after pooling sparse ones.
    pub cells: usize,
}

/// Goodness of fit of `observed` counts to cell probabilities `probs`.
/// Adjacent cells are pooled until each expected count is at least 5.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(Error::Parameter("observed and expected cells differ".into()));
    }
    let n: u64 = observed.iter().sum();
    let total_p: f64 = probs.iter().sum();
    if n == 0 || (total_p - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter("need samples and a probability vector".into()));
    }
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&c, &p) in observed.iter().zip(probs) {
        o += c as f64;
        e += p * n as f64;
        if e >= 5.0 {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    let statistic: f64 = pooled.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = pooled.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    Ok(ChiSquare { statistic, dof, p_value, cells: pooled.len() })
}

pub fn chi_square_uniform(observed: &[u64]) -> Result<ChiSquare> {
    let k = observed.len();
    chi_square(observed, &vec![1.0 / k as f64; k])
}

/// Wilson score interval for a binomial proportion at `z` standard errors.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Law of a sum of `k` independent fair signs on its support `-k, -k+2, .., k`.
pub fn sign_sum_law(k: usize) -> Vec<(i64, f64)> {
    let mut row = vec![1.0f64];
    for _ in 0..k {
        let mut next = vec![0.0; row.len() + 1];
        for (i, &c) in row.iter().enumerate() {
            next[i] += c / 2.0;
            next[i + 1] += c / 2.0;
        }
        row = next;
    }
    row.into_iter().enumerate().map(|(j, p)| (2 * j as i64 - k as i64, p)).collect()
}

/// Total variation distance between two empirical laws given as counts.
pub fn tv_distance<K: Ord>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let pa = |k: &K| a.get(k).map_or(0.0, |&c| c as f64 / na as f64);
    let pb = |k: &K| b.get(k).map_or(0.0, |&c| c as f64 / nb as f64);
    let mut sum = 0.0;
    for k in a.keys() {
        sum += (pa(k) - pb(k)).abs();
    }
    for k in b.keys().filter(|k| !a.contains_key(*k)) {
        sum += pb(k);
    }
    sum / 2.0
}

/// Ordinary least squares line with the standard error of the slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return Err(Error::Parameter("line fit needs at least three paired points".into()));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("line fit needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_se = (rss / (n - 2) as f64 / sxx).sqrt();
    Ok(LineFit { slope, intercept, slope_se })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_small_sample() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn chi_square_perfect_fit_and_bad_fit() {
        let good = chi_square_uniform(&[100, 100, 100]).unwrap();
        assert_eq!(good.statistic, 0.0);
        assert!((good.p_value - 1.0).abs() < 1e-12);
        let bad = chi_square_uniform(&[150, 100, 50]).unwrap();
        assert!(bad.p_value < 1e-9);
        // sparse tail cells are pooled
        let pooled = chi_square(&[50, 48, 2], &[0.5, 0.49, 0.01]).unwrap();
        assert_eq!(pooled.cells, 2);
    }

    #[test]
    fn wilson_interval_covers_estimate() {
        let (lo, hi) = wilson_interval(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 100, 1.96).0, 0.0);
    }

    #[test]
    fn sign_sums() {
        assert_eq!(sign_sum_law(0), vec![(0, 1.0)]);
        assert_eq!(sign_sum_law(2), vec![(-2, 0.25), (0, 0.5), (2, 0.25)]);
    }

    #[test]
    fn tv_and_line() {
        let a = BTreeMap::from([(0, 1u64), (1, 1)]);
        let b = BTreeMap::from([(1, 1u64), (2, 1)]);
        assert_eq!(tv_distance(&a, &b), 0.5);
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.slope_se < 1e-12);
    }
}
