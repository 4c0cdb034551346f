use serde::{Deserialize, Serialize};

use super::EmpiricalSample;
use crate::error::{Error, Result};

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    /// Whether `target` lies within `k` standard errors.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }
}

fn mean_and_stderr(xs: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0) / n).sqrt())
}

/// Sample mean of `f(value)` with an iid or batch-means standard error.
pub(crate) fn sample_mean<F: Fn(f64) -> f64>(sample: &EmpiricalSample, f: F) -> Result<Estimate> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let (value, stderr) = match sample.batch_len {
        Some(len) if len > 0 && sample.len() / len >= 2 => {
            let batches: Vec<f64> = sample
                .values
                .chunks(len)
                .map(|c| c.iter().map(|&x| f(x)).sum::<f64>() / c.len() as f64)
                .collect();
            mean_and_stderr(batches.iter().copied())
        }
        _ => mean_and_stderr(sample.values.iter().map(|&x| f(x))),
    };
    Ok(Estimate { value, stderr })
}

/// Mean and standard error of `e^{-α X}` over the sample.
pub fn empirical_lst(sample: &EmpiricalSample, alpha: f64) -> Result<Estimate> {
    if !(alpha >= 0.0) {
        return Err(Error::domain("empirical_lst", alpha, "α >= 0"));
    }
    sample_mean(sample, |x| (-alpha * x).exp())
}

/// Fraction of the sample strictly above `u`, with its standard error.
pub fn empirical_ccdf(sample: &EmpiricalSample, u: f64) -> Result<Estimate> {
    sample_mean(sample, |x| if x > u { 1.0 } else { 0.0 })
}

/// Two-sample Kolmogorov–Smirnov statistic and the asymptotic critical value
/// `sqrt(-ln(level/2)/2) · sqrt((n+m)/(nm))`.
pub fn ks_two_sample(a: &[f64], b: &[f64], level: f64) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Step past every copy of the smallest remaining value in both samples
        // before comparing, so ties never open a spurious gap.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    Ok((d, c * ((n + m) / (n * m)).sqrt()))
}
