use serde::{Deserialize, Serialize};

use super::density::{histogram, Binning};
use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{ks_critical_one_sample, ks_critical_two_sample, mean, normal_pdf, quantile_sorted, sample_variance, sorted};

/// Number of points on the common scaling-variable grid.
pub const U_GRID_POINTS: usize = 101;
/// Central fraction of pooled rescaled samples spanned by the u grid.
pub const U_GRID_COVERAGE: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledCurve {
    pub t: f64,
    /// F̂(u) = t^h f₁(u t^h, t) on the report's u grid.
    pub values: Vec<f64>,
    /// Histogram bin width expressed in u.
    pub bin_width_u: f64,
}

/// Rescaled one-point densities and how well they superpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub h: f64,
    pub u_grid: Vec<f64>,
    pub rescaled_curves: Vec<RescaledCurve>,
    pub mean_curve: Vec<f64>,
    /// Mean over u of the across-time standard deviation of F̂(u), divided
    /// by the peak of the mean curve.
    pub collapse_error: f64,
    /// Mean |mean curve - N(0, c) density| over u, divided by the Gaussian peak.
    pub reference_gaussian_error: f64,
    /// c used for the Gaussian reference (process spec, else pooled u variance).
    pub reference_c: f64,
    pub n_samples: usize,
}

impl CollapseReport {
    pub fn times(&self) -> Vec<f64> {
        self.rescaled_curves.iter().map(|c| c.t).collect()
    }

    /// Mean collapsed curve evaluated at u by linear interpolation.
    pub fn mean_at(&self, u: f64) -> f64 {
        interp(&self.u_grid, &self.mean_curve, u)
    }

    pub fn reference_density(&self, u: f64) -> f64 {
        normal_pdf(u, 0.0, self.reference_c)
    }

    /// Tolerance for comparing the mean curve with a density value `f` near
    /// a smooth peak: three counting-noise standard errors at the narrowest
    /// bin plus the histogram-and-interpolation bias bound |f''| h²/6, with
    /// |f''| = f / c for a Gaussian peak.
    pub fn binning_tolerance(&self, f: f64) -> f64 {
        let (mut h_min, mut h_max) = (f64::INFINITY, 0.0_f64);
        for c in &self.rescaled_curves {
            h_min = h_min.min(c.bin_width_u);
            h_max = h_max.max(c.bin_width_u);
        }
        3.0 * (f / (self.n_samples as f64 * h_min)).sqrt() + f / self.reference_c * h_max * h_max / 6.0
    }

    /// Kolmogorov–Smirnov distance between the CDFs implied by the two mean
    /// curves, each normalized over its own u grid.
    pub fn ks_distance(&self, other: &CollapseReport) -> f64 {
        let mine = cdf_on_grid(&self.u_grid, &self.mean_curve);
        let theirs_on_mine: Vec<f64> = self.u_grid.iter().map(|&u| other.mean_at(u)).collect();
        let theirs = cdf_on_grid(&self.u_grid, &theirs_on_mine);
        sup_diff(&mine, &theirs)
    }

    /// Kolmogorov–Smirnov distance between the mean curve and N(0, c), both
    /// normalized over the u grid.
    pub fn gaussian_ks_distance(&self) -> f64 {
        let reference: Vec<f64> = self.u_grid.iter().map(|&u| self.reference_density(u)).collect();
        sup_diff(
            &cdf_on_grid(&self.u_grid, &self.mean_curve),
            &cdf_on_grid(&self.u_grid, &reference),
        )
    }

    pub fn ks_critical_vs(&self, other: &CollapseReport) -> f64 {
        ks_critical_two_sample(self.n_samples, other.n_samples)
    }

    pub fn ks_critical_gaussian(&self) -> f64 {
        ks_critical_one_sample(self.n_samples)
    }
}

/// Rescales the one-point densities at `times` by F̂(u) = t^h f₁(u t^h, t)
/// and measures their spread on a common u grid.
pub fn data_collapse(e: &Ensemble, h: f64, times: &[f64]) -> Result<CollapseReport> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("data collapse needs at least one time".into()));
    }
    if times.len() < 2 {
        return Err(Error::InvalidParameter("data collapse needs at least 2 times".into()));
    }
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidParameter(format!("h must lie in (0, 1), got {h}")));
    }
    let origin = e.origin();
    let mut pooled = Vec::with_capacity(times.len() * e.n_paths());
    let mut densities = Vec::with_capacity(times.len());
    for &t in times {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("collapse times must be > 0, got {t}")));
        }
        let xs: Vec<f64> = e.values_at(t)?.iter().map(|x| x - origin).collect();
        let scale = t.powf(h);
        pooled.extend(xs.iter().map(|x| x / scale));
        densities.push((t, scale, histogram(t, &xs, Binning::FreedmanDiaconis)?));
    }

    let s = sorted(&pooled);
    let tail = 0.5 * (1.0 - U_GRID_COVERAGE);
    let (lo, hi) = (quantile_sorted(&s, tail), quantile_sorted(&s, 1.0 - tail));
    let u_grid: Vec<f64> = (0..U_GRID_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / (U_GRID_POINTS - 1) as f64)
        .collect();

    let rescaled_curves: Vec<RescaledCurve> = densities
        .iter()
        .map(|(t, scale, d)| RescaledCurve {
            t: *t,
            values: u_grid.iter().map(|&u| scale * d.interp_at(u * scale)).collect(),
            bin_width_u: d.max_width() / scale,
        })
        .collect();

    let k = rescaled_curves.len() as f64;
    let mut mean_curve = Vec::with_capacity(u_grid.len());
    let mut spread = 0.0;
    for j in 0..u_grid.len() {
        let m = rescaled_curves.iter().map(|c| c.values[j]).sum::<f64>() / k;
        let var = rescaled_curves.iter().map(|c| (c.values[j] - m).powi(2)).sum::<f64>() / k;
        mean_curve.push(m);
        spread += var.sqrt();
    }
    spread /= u_grid.len() as f64;
    let peak = mean_curve.iter().copied().fold(0.0, f64::max);
    let collapse_error = if peak > 0.0 { spread / peak } else { f64::INFINITY };

    let reference_c = e.spec().map_or_else(|| sample_variance(&pooled), |s| s.c);
    let ref_peak = normal_pdf(0.0, 0.0, reference_c);
    let reference_gaussian_error = mean(
        &u_grid
            .iter()
            .zip(&mean_curve)
            .map(|(&u, m)| (m - normal_pdf(u, 0.0, reference_c)).abs())
            .collect::<Vec<_>>(),
    ) / ref_peak;

    Ok(CollapseReport {
        h,
        u_grid,
        rescaled_curves,
        mean_curve,
        collapse_error,
        reference_gaussian_error,
        reference_c,
        n_samples: e.n_paths(),
    })
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return if x == xs[0] { ys[0] } else { 0.0 };
    }
    if x >= xs[n - 1] {
        return if x == xs[n - 1] { ys[n - 1] } else { 0.0 };
    }
    let k = xs.partition_point(|&v| v <= x).clamp(1, n - 1);
    let w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    ys[k - 1] + w * (ys[k] - ys[k - 1])
}

/// Cumulative trapezoid of a density on a grid, normalized to end at 1.
fn cdf_on_grid(grid: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..grid.len() {
        acc += 0.5 * (f[i] + f[i - 1]) * (grid[i] - grid[i - 1]);
        out.push(acc);
    }
    if acc > 0.0 {
        for v in &mut out {
            *v /= acc;
        }
    }
    out
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
