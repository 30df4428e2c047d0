use serde::{Deserialize, Serialize};

use super::correlation::pearson;
use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::scaling::{histogram, Binning, DensityEstimate};
use crate::stats::{mean, sample_variance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointOptions {
    /// Per-axis bin rule.
    pub binning: Binning,
    pub min_samples: usize,
    /// When set, compare f₂ at (t1, t2) with f₂ at (λ t1, λ t2) after the
    /// rescaling x → λ^H x.
    pub scaling_lambda: Option<f64>,
    /// H for the scaling check; defaults to the ensemble's process spec.
    pub hurst: Option<f64>,
}

impl Default for TwoPointOptions {
    fn default() -> Self {
        Self {
            binning: Binning::FreedmanDiaconis,
            min_samples: 10_000,
            scaling_lambda: None,
            hurst: None,
        }
    }
}

/// Rescaled comparison of f₂ at (t1, t2) and (λ t1, λ t2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub lambda: f64,
    pub hurst: f64,
    /// L1 distance between the two rescaled joint histograms.
    pub l1_distance: f64,
    /// L1 distance between the two halves of the base sample, divided by √2:
    /// the distance expected from sampling noise alone.
    pub noise_floor: f64,
}

/// Joint histogram estimate of f₂(x1, t1; x2, t2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPointDensity {
    pub times: (f64, f64),
    pub edges_x1: Vec<f64>,
    pub edges_x2: Vec<f64>,
    /// Row-major, rows indexed by the x1 bin.
    pub density: Vec<f64>,
    pub n_samples: usize,
    /// cov(x1, x2) / var(x1): slope of E[x2 | x1] for a Gaussian pair.
    pub regression_slope: f64,
    pub correlation: f64,
    pub scaling_check: Option<ScalingCheck>,
}

impl TwoPointDensity {
    fn n1(&self) -> usize {
        self.edges_x1.len() - 1
    }

    fn n2(&self) -> usize {
        self.edges_x2.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.density[i * self.n2() + j]
    }

    /// Σ f₂ · bin area.
    pub fn integral(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n1() {
            for j in 0..self.n2() {
                s += self.get(i, j) * w(&self.edges_x1, i) * w(&self.edges_x2, j);
            }
        }
        s
    }

    pub fn marginal_x1(&self) -> DensityEstimate {
        let dens = (0..self.n1())
            .map(|i| (0..self.n2()).map(|j| self.get(i, j) * w(&self.edges_x2, j)).sum())
            .collect();
        self.marginal(self.times.0, self.edges_x1.clone(), dens)
    }

    pub fn marginal_x2(&self) -> DensityEstimate {
        let dens = (0..self.n2())
            .map(|j| (0..self.n1()).map(|i| self.get(i, j) * w(&self.edges_x1, i)).sum())
            .collect();
        self.marginal(self.times.1, self.edges_x2.clone(), dens)
    }

    fn marginal(&self, t: f64, bin_edges: Vec<f64>, density: Vec<f64>) -> DensityEstimate {
        DensityEstimate {
            t,
            bin_edges,
            density,
            n_samples: self.n_samples,
            binning: Binning::FreedmanDiaconis,
        }
    }

    /// Empirical g(x2, t2 | x1 bin i) = f₂ / f₁ along x2, or `None` for an
    /// empty x1 bin.
    pub fn conditional_slice(&self, i: usize) -> Option<Vec<f64>> {
        let f1: f64 = (0..self.n2()).map(|j| self.get(i, j) * w(&self.edges_x2, j)).sum();
        (f1 > 0.0).then(|| (0..self.n2()).map(|j| self.get(i, j) / f1).collect())
    }

    /// Mean of x2 under the conditional slice of x1 bin i.
    pub fn conditional_mean(&self, i: usize) -> Option<f64> {
        self.conditional_slice(i).map(|slice| {
            slice
                .iter()
                .enumerate()
                .map(|(j, g)| g * w(&self.edges_x2, j) * 0.5 * (self.edges_x2[j] + self.edges_x2[j + 1]))
                .sum()
        })
    }

    pub fn x1_centers(&self) -> Vec<f64> {
        self.edges_x1.windows(2).map(|v| 0.5 * (v[0] + v[1])).collect()
    }

    pub fn x2_centers(&self) -> Vec<f64> {
        self.edges_x2.windows(2).map(|v| 0.5 * (v[0] + v[1])).collect()
    }
}

fn w(edges: &[f64], i: usize) -> f64 {
    edges[i + 1] - edges[i]
}

pub fn two_point_density(e: &Ensemble, t1: f64, t2: f64, opts: &TwoPointOptions) -> Result<TwoPointDensity> {
    if !(t1 < t2) {
        return Err(Error::InvalidParameter(format!("need t1 < t2, got {t1} and {t2}")));
    }
    e.require_paths(opts.min_samples.max(2))?;
    let x1 = e.values_at(t1)?;
    let x2 = e.values_at(t2)?;
    // per-axis edges follow the one-point rule, so marginals match it exactly
    let edges_x1 = histogram(t1, &x1, opts.binning)?.bin_edges;
    let edges_x2 = histogram(t2, &x2, opts.binning)?.bin_edges;
    let density = joint_histogram(&x1, &x2, &edges_x1, &edges_x2);

    let origin = e.origin();
    let c1: Vec<f64> = x1.iter().map(|x| x - origin).collect();
    let c2: Vec<f64> = x2.iter().map(|x| x - origin).collect();
    let m1 = mean(&c1);
    let m2 = mean(&c2);
    let cov = c1.iter().zip(&c2).map(|(a, b)| (a - m1) * (b - m2)).sum::<f64>() / (c1.len() - 1) as f64;

    let scaling_check = match opts.scaling_lambda {
        None => None,
        Some(lambda) => {
            let hurst = opts
                .hurst
                .or_else(|| e.spec().map(|s| s.hurst))
                .ok_or_else(|| Error::InvalidParameter("scaling check needs H".into()))?;
            Some(scaling_check(e, t1, t2, lambda, hurst, opts.binning)?)
        }
    };

    Ok(TwoPointDensity {
        times: (t1, t2),
        edges_x1,
        edges_x2,
        density,
        n_samples: x1.len(),
        regression_slope: cov / sample_variance(&c1),
        correlation: pearson(&c1, &c2),
        scaling_check,
    })
}

fn joint_histogram(x1: &[f64], x2: &[f64], e1: &[f64], e2: &[f64]) -> Vec<f64> {
    let (n1, n2) = (e1.len() - 1, e2.len() - 1);
    let mut counts = vec![0usize; n1 * n2];
    let bin = |edges: &[f64], x: f64, n: usize| -> Option<usize> {
        if x < edges[0] || x > edges[n] {
            return None;
        }
        Some(edges.partition_point(|&v| v <= x).clamp(1, n) - 1)
    };
    for (&a, &b) in x1.iter().zip(x2) {
        if let (Some(i), Some(j)) = (bin(e1, a, n1), bin(e2, b, n2)) {
            counts[i * n2 + j] += 1;
        }
    }
    let total = x1.len() as f64;
    let mut out = vec![0.0; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            out[i * n2 + j] = counts[i * n2 + j] as f64 / (total * w(e1, i) * w(e2, j));
        }
    }
    out
}

fn scaling_check(e: &Ensemble, t1: f64, t2: f64, lambda: f64, hurst: f64, binning: Binning) -> Result<ScalingCheck> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let origin = e.origin();
    let rescaled = |ta: f64, tb: f64| -> Result<(Vec<f64>, Vec<f64>)> {
        let s = ta.powf(hurst);
        let a = e.values_at(ta)?.iter().map(|x| (x - origin) / s).collect();
        let b = e.values_at(tb)?.iter().map(|x| (x - origin) / s).collect();
        Ok((a, b))
    };
    let (a1, a2) = rescaled(t1, t2)?;
    let (b1, b2) = rescaled(lambda * t1, lambda * t2)?;
    let pooled1: Vec<f64> = a1.iter().chain(&b1).copied().collect();
    let pooled2: Vec<f64> = a2.iter().chain(&b2).copied().collect();
    let e1 = histogram(t1, &pooled1, binning)?.bin_edges;
    let e2 = histogram(t2, &pooled2, binning)?.bin_edges;
    let l1 = |p: (&[f64], &[f64]), q: (&[f64], &[f64])| -> f64 {
        let fp = joint_histogram(p.0, p.1, &e1, &e2);
        let fq = joint_histogram(q.0, q.1, &e1, &e2);
        let n2 = e2.len() - 1;
        fp.iter()
            .zip(&fq)
            .enumerate()
            .map(|(k, (x, y))| (x - y).abs() * w(&e1, k / n2) * w(&e2, k % n2))
            .sum()
    };
    let half = a1.len() / 2;
    Ok(ScalingCheck {
        lambda,
        hurst,
        l1_distance: l1((&a1, &a2), (&b1, &b2)),
        noise_floor: l1((&a1[..half], &a2[..half]), (&a1[half..], &a2[half..])) / 2f64.sqrt(),
    })
}
