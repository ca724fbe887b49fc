//! Kolmogorov–Smirnov statistics with fixed α ≈ 0.01 thresholds.

use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::math::Float;
use crate::{Error, Result};

/// Asymptotic KS critical coefficient at α ≈ 0.01.
pub const KS_C_ALPHA: f64 = 1.63;

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("NaN in sample"));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup |F_n − F|` against a continuous CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d
            .max(((i + 1) as f64 / n - f).abs())
            .max((f - i as f64 / n).abs());
    }
    Ok(d)
}

/// `sup |F_n − G_m|` between two empirical distributions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Rejection threshold `1.63/√n` for the one-sample statistic.
pub fn one_sample_threshold(n: usize) -> f64 {
    KS_C_ALPHA / (n as f64).sqrt()
}

/// Rejection threshold `1.63·√((n + m)/(n·m))` for the two-sample statistic.
pub fn two_sample_threshold(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    KS_C_ALPHA * ((n + m) / (n * m)).sqrt()
}
