//! Small statistical toolkit: sample moments, OLS, Kolmogorov–Smirnov.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Asymptotic two-sided 5% Kolmogorov–Smirnov coefficient.
pub const KS_C_ALPHA_5PCT: f64 = 1.358;

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    pub fn new(value: f64, se: f64) -> Self {
        Self { value, se }
    }

    /// |value - target| in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.value - target).abs();
        if self.se > 0.0 {
            d / self.se
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within(&self, target: f64, n_se: f64) -> bool {
        (self.value - target).abs() <= n_se * self.se
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; NaN for fewer than two samples.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Sample mean with standard error s/√n.
pub fn mean_se(xs: &[f64]) -> Estimate {
    let n = xs.len();
    let m = mean(xs);
    let se = if n > 1 {
        (sample_variance(xs) / n as f64).sqrt()
    } else {
        f64::NAN
    };
    Estimate::new(m, se)
}

/// Linear-interpolation quantile (type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub residuals: Vec<f64>,
}

/// Unweighted least squares y = intercept + slope x.
pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::DegenerateFit("x and y differ in length".into()));
    }
    if n < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {n}")));
    }
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all abscissae are equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - (intercept + slope * a)).collect();
    let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / (n - 2) as f64;
    let slope_se = (s2 / sxx).sqrt();
    let intercept_se = (s2 * (1.0 / n as f64 + mx * mx / sxx)).sqrt();
    Ok(LinearFit {
        slope,
        intercept,
        slope_se,
        intercept_se,
        residuals,
    })
}

/// OLS slope weights: slope = Σ w_i y_i.
pub fn ols_slope_weights(x: &[f64]) -> Vec<f64> {
    let mx = mean(x);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    x.iter().map(|v| (v - mx) / sxx).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    pub critical_value: f64,
    pub n1: usize,
    pub n2: usize,
}

impl KsTest {
    /// True when the statistic reaches the 5% critical value.
    pub fn rejects(&self) -> bool {
        self.statistic >= self.critical_value
    }
}

/// Two-sample critical value c(α) √((n1 + n2) / (n1 n2)) at the 5% level.
pub fn ks_critical_two_sample(n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    KS_C_ALPHA_5PCT * ((a + b) / (a * b)).sqrt()
}

/// Asymptotic two-sided coefficient c(α) = sqrt(-ln(α/2) / 2).
pub fn ks_c_alpha(alpha: f64) -> f64 {
    (-(0.5 * alpha).ln() / 2.0).sqrt()
}

/// Two-sample critical value at level `alpha`.
pub fn ks_critical_two_sample_at(alpha: f64, n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    ks_c_alpha(alpha) * ((a + b) / (a * b)).sqrt()
}

pub fn ks_critical_one_sample(n: usize) -> f64 {
    KS_C_ALPHA_5PCT / (n as f64).sqrt()
}

/// Two-sample Kolmogorov–Smirnov statistic sup |F1 - F2|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientSamples {
            needed: 1,
            got: a.len().min(b.len()),
        });
    }
    let a = sorted(a);
    let b = sorted(b);
    let (n1, n2) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let v = a[i].min(b[j]);
        while i < n1 && a[i] <= v {
            i += 1;
        }
        while j < n2 && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    Ok(KsTest {
        statistic: d,
        critical_value: ks_critical_two_sample(n1, n2),
        n1,
        n2,
    })
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsTest> {
    if xs.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let s = sorted(xs);
    let n = s.len() as f64;
    let d = s
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    Ok(KsTest {
        statistic: d,
        critical_value: ks_critical_one_sample(s.len()),
        n1: s.len(),
        n2: 0,
    })
}

pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    (-0.5 * d * d / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

pub fn normal_cdf(x: f64, mean: f64, var: f64) -> f64 {
    0.5 * erfc(-(x - mean) / (2.0 * var).sqrt())
}
