use std::sync::Arc;

use rayon::prelude::*;

use super::{check_request, finish};
use crate::error::{Error, Result};
use crate::process::{DiffusionShape, Ensemble, ProcessKind, ProcessSpec, SamplePath, TimeGrid};
use crate::rng::NoiseStream;

/// Scaling Gaussian Markov process with constant D(u) = 2Hc, sampled exactly
/// as a Wiener process under the time change τ = c t^(2H).
///
/// The process starts from x0 at t = 0; increments between successive grid
/// points are independent with variance c (t_{k+1}^(2H) - t_k^(2H)).
pub fn gen_scaling_markov_exact(
    spec: &ProcessSpec,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<Ensemble> {
    check_request(spec, ProcessKind::ScalingMarkovExact, n_paths)?;
    let e = 2.0 * spec.hurst;
    let mut prev = 0.0;
    let scales: Vec<f64> = grid
        .times()
        .iter()
        .map(|&t| {
            let tau = spec.c * t.powf(e);
            let s = (tau - prev).sqrt();
            prev = tau;
            s
        })
        .collect();
    let grid = Arc::new(grid.clone());

    let paths: Vec<SamplePath> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut noise = NoiseStream::new(seed, i as u64);
            let mut x = spec.x0;
            let values = scales
                .iter()
                .map(|&s| {
                    if s > 0.0 {
                        x += s * noise.gaussian();
                    }
                    x
                })
                .collect();
            SamplePath::martingale(grid.clone(), values)
        })
        .collect();
    finish(spec, grid, paths, seed)
}

/// Output of the Euler–Maruyama generator.
#[derive(Debug, Clone)]
pub struct SdeEnsemble {
    pub ensemble: Ensemble,
    /// Ensemble mean of the accumulated Itô sum Σ D(x, s) ds at each grid
    /// time. For the scheme this equals the expected variance increment
    /// exactly, so it isolates discretization error from sampling noise.
    pub ito_variance: Vec<f64>,
}

/// Euler–Maruyama integration of dx = sqrt(D(x, t)) dB with
/// D(x, t) = t^(2H-1) D(u), u = x t^(-H).
///
/// Paths start at x0 at the first grid time; each grid interval is split
/// into `substeps` Itô (left-endpoint) steps.
pub fn gen_scaling_markov_sde(
    spec: &ProcessSpec,
    grid: &TimeGrid,
    substeps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<SdeEnsemble> {
    check_request(spec, ProcessKind::ScalingMarkovSde, n_paths)?;
    if substeps == 0 {
        return Err(Error::InvalidParameter("substeps must be >= 1".into()));
    }
    if spec.hurst < 0.5 && grid.start() <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "H = {} < 1/2 makes D(x, t) diverge at t = 0; start the grid at t > 0",
            spec.hurst
        )));
    }
    let shape = spec.diffusion();
    let hurst = spec.hurst;
    let grid = Arc::new(grid.clone());
    let times = grid.times();

    let results: Vec<(Vec<f64>, Vec<f64>)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut noise = NoiseStream::new(seed, i as u64);
            let mut x = spec.x0;
            let mut ito = 0.0;
            let mut values = Vec::with_capacity(times.len());
            let mut ito_acc = Vec::with_capacity(times.len());
            values.push(x);
            ito_acc.push(0.0);
            for w in times.windows(2) {
                let ds = (w[1] - w[0]) / substeps as f64;
                for j in 0..substeps {
                    let s = w[0] + j as f64 * ds;
                    let d = diffusion(&shape, hurst, x, s).map_err(|(u, value)| {
                        Error::NonPositiveDiffusion { path: i, t: s, u, value }
                    })?;
                    ito += d * ds;
                    x += (d * ds).sqrt() * noise.gaussian();
                }
                values.push(x);
                ito_acc.push(ito);
            }
            Ok((values, ito_acc))
        })
        .collect::<Result<_>>()?;

    let mut ito_variance = vec![0.0; times.len()];
    for (_, acc) in &results {
        for (total, v) in ito_variance.iter_mut().zip(acc) {
            *total += v;
        }
    }
    for v in &mut ito_variance {
        *v /= n_paths as f64;
    }
    let paths = results
        .into_iter()
        .map(|(values, _)| SamplePath::martingale(grid.clone(), values))
        .collect();
    Ok(SdeEnsemble {
        ensemble: finish(spec, grid, paths, seed)?,
        ito_variance,
    })
}

/// D(x, s), or the offending (u, D(u)) when the shape is not positive.
#[inline]
fn diffusion(shape: &DiffusionShape, hurst: f64, x: f64, s: f64) -> std::result::Result<f64, (f64, f64)> {
    let time_factor = if hurst == 0.5 { 1.0 } else { s.powf(2.0 * hurst - 1.0) };
    if time_factor == 0.0 {
        // H > 1/2 at s = 0: the coefficient vanishes whatever D(u) is
        return Ok(0.0);
    }
    let du = match shape {
        DiffusionShape::Constant(d) => *d,
        DiffusionShape::Custom(f) => {
            let u = if s > 0.0 {
                x * s.powf(-hurst)
            } else if x == 0.0 {
                0.0
            } else {
                x.signum() * f64::INFINITY
            };
            let v = f(u);
            if !(v > 0.0 && v.is_finite()) {
                return Err((u, v));
            }
            v
        }
    };
    Ok(time_factor * du)
}
