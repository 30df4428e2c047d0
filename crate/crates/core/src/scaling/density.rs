use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{quantile_sorted, sorted};

/// Minimum sample count for the data-driven default binning.
pub const MIN_SAMPLES_DEFAULT_BINNING: usize = 100;
const MAX_BINS: usize = 100_000;

/// Histogram bin selection.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binning {
    /// Width 2·IQR·n^(-1/3).
    #[default]
    FreedmanDiaconis,
    Count(usize),
    Width(f64),
}

/// Normalized histogram estimate of f₁(x, t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub t: f64,
    pub bin_edges: Vec<f64>,
    pub density: Vec<f64>,
    pub n_samples: usize,
    pub binning: Binning,
}

impl DensityEstimate {
    /// Builds a density from explicit edges and (unnormalized) weights.
    pub fn from_weights(t: f64, bin_edges: Vec<f64>, weights: &[f64], binning: Binning) -> Result<Self> {
        if bin_edges.len() != weights.len() + 1 || weights.is_empty() {
            return Err(Error::InvalidParameter("need one more edge than weights".into()));
        }
        if bin_edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("bin edges must increase".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("weights must be non-negative".into()));
        }
        let mass: f64 = weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * (bin_edges[i + 1] - bin_edges[i]))
            .sum();
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter("density has zero mass".into()));
        }
        Ok(Self {
            t,
            density: weights.iter().map(|w| w / mass).collect(),
            bin_edges,
            n_samples: 0,
            binning,
        })
    }

    pub fn n_bins(&self) -> usize {
        self.density.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.bin_edges[i + 1] - self.bin_edges[i]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn max_width(&self) -> f64 {
        (0..self.n_bins()).map(|i| self.width(i)).fold(0.0, f64::max)
    }

    pub fn min_width(&self) -> f64 {
        (0..self.n_bins()).map(|i| self.width(i)).fold(f64::INFINITY, f64::min)
    }

    /// ∑ density · width; 1 up to rounding.
    pub fn integral(&self) -> f64 {
        (0..self.n_bins()).map(|i| self.density[i] * self.width(i)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.centers()
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.density[i] * self.width(i))
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        // midpoint second moment plus the within-bin uniform spread
        (0..self.n_bins())
            .map(|i| {
                let c = 0.5 * (self.bin_edges[i] + self.bin_edges[i + 1]);
                let w = self.width(i);
                self.density[i] * w * ((c - m).powi(2) + w * w / 12.0)
            })
            .sum()
    }

    /// Histogram value at x (piecewise constant, 0 outside).
    pub fn value_at(&self, x: f64) -> f64 {
        let e = &self.bin_edges;
        if x < e[0] || x > e[e.len() - 1] {
            return 0.0;
        }
        let k = e.partition_point(|&v| v <= x).clamp(1, e.len() - 1);
        self.density[k - 1]
    }

    /// Linear interpolation between bin centers, 0 outside the outer centers.
    pub fn interp_at(&self, x: f64) -> f64 {
        let c = self.centers();
        let n = c.len();
        if n == 1 {
            return self.value_at(x);
        }
        if x < c[0] || x > c[n - 1] {
            return 0.0;
        }
        let k = c.partition_point(|&v| v <= x).clamp(1, n - 1);
        let w = (x - c[k - 1]) / (c[k] - c[k - 1]);
        self.density[k - 1] + w * (self.density[k] - self.density[k - 1])
    }

    /// CDF of the histogram (linear within bins).
    pub fn cdf_at(&self, x: f64) -> f64 {
        let e = &self.bin_edges;
        let mut acc = 0.0;
        for i in 0..self.n_bins() {
            if x >= e[i + 1] {
                acc += self.density[i] * self.width(i);
            } else {
                if x > e[i] {
                    acc += self.density[i] * (x - e[i]);
                }
                break;
            }
        }
        acc.min(1.0)
    }
}

/// Histogram of the sample values, normalized to unit mass.
pub fn histogram(t: f64, samples: &[f64], binning: Binning) -> Result<DensityEstimate> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    if binning == Binning::FreedmanDiaconis && n < MIN_SAMPLES_DEFAULT_BINNING {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES_DEFAULT_BINNING,
            got: n,
        });
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite sample {bad}")));
    }
    let s = sorted(samples);
    let (lo, hi) = (s[0], s[n - 1]);
    let edges = if hi == lo {
        vec![lo - 0.5, lo + 0.5]
    } else {
        let bins = match binning {
            Binning::FreedmanDiaconis => {
                let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
                if iqr > 0.0 {
                    let h = 2.0 * iqr * (n as f64).powf(-1.0 / 3.0);
                    ((hi - lo) / h).ceil() as usize
                } else {
                    (n as f64).sqrt().ceil() as usize
                }
            }
            Binning::Count(k) => k,
            Binning::Width(h) => {
                if !(h > 0.0) {
                    return Err(Error::InvalidParameter(format!("bin width must be positive, got {h}")));
                }
                ((hi - lo) / h).ceil() as usize
            }
        }
        .clamp(1, MAX_BINS);
        let h = match binning {
            Binning::Width(h) => h,
            _ => (hi - lo) / bins as f64,
        };
        let mut edges: Vec<f64> = (0..=bins).map(|k| lo + k as f64 * h).collect();
        edges[bins] = edges[bins].max(hi);
        edges
    };
    let nb = edges.len() - 1;
    let mut counts = vec![0usize; nb];
    for &x in &s {
        let k = edges.partition_point(|&e| e <= x).clamp(1, nb);
        counts[k - 1] += 1;
    }
    let density = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 / (n as f64 * (edges[i + 1] - edges[i])))
        .collect();
    Ok(DensityEstimate {
        t,
        bin_edges: edges,
        density,
        n_samples: n,
        binning,
    })
}

/// f₁(x, t) estimated from the ensemble values at grid time `t`.
pub fn one_point_density(e: &Ensemble, t: f64, binning: Binning) -> Result<DensityEstimate> {
    histogram(t, &e.values_at(t)?, binning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_fbm, gen_scaling_markov_exact};
    use crate::process::{make_grid, GridKind, ProcessSpec};
    use crate::stats::ks_two_sample;

    #[test]
    fn normalization() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64 / 37.0).collect();
        for b in [Binning::FreedmanDiaconis, Binning::Count(13), Binning::Width(0.7)] {
            let d = histogram(0.0, &xs, b).unwrap();
            assert!((d.integral() - 1.0).abs() < 1e-9, "{b:?}");
            assert!((d.cdf_at(1e9) - 1.0).abs() < 1e-9);
            assert_eq!(d.cdf_at(-1e9), 0.0);
        }
    }

    #[test]
    fn small_sample_needs_explicit_binning() {
        let xs = [1.0, 2.0, 3.0];
        assert!(histogram(0.0, &xs, Binning::FreedmanDiaconis).is_err());
        assert!(histogram(0.0, &xs, Binning::Count(2)).is_ok());
    }

    #[test]
    fn constant_sample() {
        let d = histogram(0.0, &[2.0; 200], Binning::FreedmanDiaconis).unwrap();
        assert!((d.integral() - 1.0).abs() < 1e-12);
        assert_eq!(d.value_at(2.0), 1.0);
    }

    #[test]
    fn gaussian_peak() {
        let g = make_grid(GridKind::Uniform, 0.0, 1.0, 2).unwrap();
        let n = 100_000;
        let e = gen_fbm(&ProcessSpec::fbm(0.7, 1.0).unwrap(), &g, n, 2).unwrap();
        let d = one_point_density(&e, 1.0, Binning::FreedmanDiaconis).unwrap();
        let peak = 0.398_942_280_401_432_7;
        let h = d.max_width();
        // counting noise at the peak plus interpolation/averaging bias
        let tol = 3.0 * (peak / (n as f64 * h)).sqrt() + peak * h * h / 6.0;
        assert!((d.interp_at(0.0) - peak).abs() < tol, "{} vs {peak} ± {tol}", d.interp_at(0.0));
    }

    #[test]
    fn markov_and_fbm_marginals_agree() {
        let g = make_grid(GridKind::Uniform, 0.0, 2.0, 3).unwrap();
        let n = 10_000;
        let a = gen_fbm(&ProcessSpec::fbm(0.7, 1.0).unwrap(), &g, n, 31).unwrap();
        let b = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.7, 1.0).unwrap(), &g, n, 32).unwrap();
        let ks = ks_two_sample(&a.values_at(2.0).unwrap(), &b.values_at(2.0).unwrap()).unwrap();
        assert!(!ks.rejects(), "{ks:?}");
    }

    #[test]
    fn off_grid() {
        let g = make_grid(GridKind::Uniform, 0.0, 1.0, 2).unwrap();
        let e = gen_fbm(&ProcessSpec::fbm(0.7, 1.0).unwrap(), &g, 200, 2).unwrap();
        assert!(one_point_density(&e, 0.5, Binning::FreedmanDiaconis).is_err());
    }
}
