use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{mean, ols, ols_slope_weights};

/// Power-law fit log M(t) = log ĉ + n Ĥ log t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstFit {
    pub h_hat: f64,
    /// Standard error of `h_hat`. Fits built from an ensemble propagate the
    /// sampling covariance of the per-time estimates; fits of a bare curve
    /// use the OLS residual scatter.
    pub h_se: f64,
    pub c_hat: f64,
    pub per_point_log_residuals: Vec<f64>,
    pub times_used: Vec<f64>,
    /// n for ⟨|x|ⁿ⟩; 2 for a variance fit.
    pub moment_order: u32,
}

/// Unbiased sample variance at each grid time, with the estimated
/// covariance between the estimates at different times.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceCurve {
    pub times: Vec<f64>,
    pub variances: Vec<f64>,
    /// cov(σ̂²(t_i), σ̂²(t_j)), row-major.
    pub estimator_cov: Vec<f64>,
}

impl VarianceCurve {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.variances.iter().copied()).collect()
    }

    /// Standard error of σ̂²(t_i).
    pub fn se(&self, i: usize) -> f64 {
        self.estimator_cov[i * self.times.len() + i].sqrt()
    }

    /// Variance fit over the positive times, with `h_se` propagated from the
    /// estimator covariance by the delta method.
    pub fn fit(&self) -> Result<HurstFit> {
        let keep: Vec<usize> = (0..self.times.len()).filter(|&i| self.times[i] > 0.0).collect();
        fit_with_covariance(&self.times, &self.variances, &self.estimator_cov, &keep, 2)
    }
}

/// Sample variance curve of an ensemble.
pub fn variance_curve(e: &Ensemble) -> Result<VarianceCurve> {
    e.require_paths(2)?;
    let columns: Vec<Vec<f64>> = (0..e.grid().len())
        .map(|k| {
            let col = e.column(k);
            let m = mean(&col);
            col.iter().map(|x| (x - m) * (x - m)).collect()
        })
        .collect();
    let n = e.n_paths() as f64;
    let correction = n / (n - 1.0);
    let variances = columns.iter().map(|sq| mean(sq) * correction).collect();
    let estimator_cov = covariance_of_means(&columns)
        .into_iter()
        .map(|v| v * correction * correction)
        .collect();
    Ok(VarianceCurve {
        times: e.grid().times().to_vec(),
        variances,
        estimator_cov,
    })
}

/// Least squares on log σ² = log c + 2H log t.
pub fn fit_hurst_variance(curve: &[(f64, f64)]) -> Result<HurstFit> {
    fit_power_law(curve, 2)
}

/// Fits ⟨|x - x0|ⁿ(t)⟩ ∝ t^(nH) over the positive grid times.
///
/// Order 2 uses the unbiased variance curve, so it coincides exactly with
/// fitting [`variance_curve`].
pub fn moment_scaling(e: &Ensemble, order: u32) -> Result<HurstFit> {
    if order == 0 {
        return Err(Error::InvalidParameter("moment order must be >= 1".into()));
    }
    if order == 2 {
        return variance_curve(e)?.fit();
    }
    e.require_paths(2)?;
    let origin = e.origin();
    let times = e.grid().times();
    let columns: Vec<Vec<f64>> = (0..times.len())
        .map(|k| {
            e.column(k)
                .iter()
                .map(|x| (x - origin).abs().powi(order as i32))
                .collect()
        })
        .collect();
    let moments: Vec<f64> = columns.iter().map(|c| mean(c)).collect();
    let cov = covariance_of_means(&columns);
    let keep: Vec<usize> = (0..times.len()).filter(|&i| times[i] > 0.0).collect();
    fit_with_covariance(times, &moments, &cov, &keep, order)
}

fn fit_power_law(curve: &[(f64, f64)], order: u32) -> Result<HurstFit> {
    check_curve(curve.iter().copied())?;
    let x: Vec<f64> = curve.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = curve.iter().map(|p| p.1.ln()).collect();
    let fit = ols(&x, &y)?;
    let n = f64::from(order);
    Ok(HurstFit {
        h_hat: fit.slope / n,
        h_se: fit.slope_se / n,
        c_hat: fit.intercept.exp(),
        per_point_log_residuals: fit.residuals,
        times_used: curve.iter().map(|p| p.0).collect(),
        moment_order: order,
    })
}

fn fit_with_covariance(
    times: &[f64],
    values: &[f64],
    cov: &[f64],
    keep: &[usize],
    order: u32,
) -> Result<HurstFit> {
    let curve: Vec<(f64, f64)> = keep.iter().map(|&i| (times[i], values[i])).collect();
    let mut fit = fit_power_law(&curve, order)?;
    let m = times.len();
    let w = ols_slope_weights(&curve.iter().map(|p| p.0.ln()).collect::<Vec<_>>());
    // var(slope) = wᵀ C_log w with C_log = C_ij / (M_i M_j)
    let mut var = 0.0;
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            var += w[a] * w[b] * cov[i * m + j] / (values[i] * values[j]);
        }
    }
    fit.h_se = var.max(0.0).sqrt() / f64::from(order);
    Ok(fit)
}

fn check_curve(points: impl Iterator<Item = (f64, f64)> + Clone) -> Result<()> {
    let n = points.clone().count();
    if n < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {n}")));
    }
    if let Some((t, v)) = points.clone().find(|&(t, v)| !(t > 0.0 && v > 0.0) || !t.is_finite() || !v.is_finite()) {
        return Err(Error::DegenerateFit(format!(
            "log-log fit needs positive finite points, got ({t}, {v})"
        )));
    }
    Ok(())
}

/// Covariance matrix of the column means: cov(X̄_i, X̄_j) = s_ij / N.
fn covariance_of_means(columns: &[Vec<f64>]) -> Vec<f64> {
    let m = columns.len();
    let n = columns[0].len() as f64;
    let means: Vec<f64> = columns.iter().map(|c| mean(c)).collect();
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let s: f64 = columns[i]
                .iter()
                .zip(&columns[j])
                .map(|(a, b)| (a - means[i]) * (b - means[j]))
                .sum::<f64>()
                / (n - 1.0);
            out[i * m + j] = s / n;
            out[j * m + i] = s / n;
        }
    }
    out
}
