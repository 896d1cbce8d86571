//! Empirical distributions and Kolmogorov–Smirnov tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample summary with the standard error of the mean and the sorted sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    sorted: Vec<f64>,
}

impl EmpiricalStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "at least one sample is required"));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("samples", "samples must be finite"));
        }
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            n,
            mean,
            std_error,
            sorted,
        })
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Percentile `p ∈ [0, 100]` with linear interpolation between order
    /// statistics (the "type 7" rule).
    pub fn percentile(&self, p: f64) -> Result<f64> {
        if !(0.0..=100.0).contains(&p) {
            return Err(Error::invalid("p", "percentile must lie in [0, 100]"));
        }
        let h = (self.n - 1) as f64 * p / 100.0;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(self.n - 1);
        Ok(self.sorted[lo] + (h - lo as f64) * (self.sorted[hi] - self.sorted[lo]))
    }

    /// Empirical CDF `#{x_i ≤ x} / n`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|v| *v <= x) as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

impl KsResult {
    pub fn rejects_at(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

// asymptotic p-value with Stephens' small-sample correction
fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let sn = n_eff.sqrt();
    kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)
}

fn sorted_finite(x: &[f64], name: &'static str) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::invalid(name, "sample must be non-empty"));
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid(name, "sample contains NaN"));
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let a = sorted_finite(a, "a")?;
    let b = sorted_finite(b, "b")?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_p_value(d, na * nb / (na + nb)),
    })
}

/// One-sample test against a continuous CDF.
pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let x = sorted_finite(x, "x")?;
    let n = x.len() as f64;
    let d = x.iter().enumerate().fold(0.0f64, |d, (i, &v)| {
        let f = cdf(v);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    });
    Ok(KsResult {
        statistic: d,
        p_value: ks_p_value(d, n),
    })
}
