use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaling::{Binning, DensityEstimate};
use crate::stats::normal_pdf;

/// Standard deviations of the widest kernel a quadrature grid must span.
pub const COVERAGE_SDS: f64 = 8.0;
const MAX_PROPAGATED_BINS: usize = 20_000;

/// A transition density g(x, t; x0, t0).
pub trait Kernel: Sync {
    fn density(&self, x: f64, t: f64, x0: f64, t0: f64) -> f64;
    /// Variance of x(t) given x(t0).
    fn variance(&self, t0: f64, t: f64) -> f64;
}

/// Gaussian Green function of the scaling Markov process: mean x0, variance
/// c (t^(2H) - t0^(2H)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionKernel {
    pub hurst: f64,
    pub c: f64,
}

impl TransitionKernel {
    pub fn new(hurst: f64, c: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) || !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel needs 0 < H < 1 and c > 0, got H = {hurst}, c = {c}"
            )));
        }
        Ok(Self { hurst, c })
    }
}

impl Kernel for TransitionKernel {
    fn density(&self, x: f64, t: f64, x0: f64, t0: f64) -> f64 {
        normal_pdf(x, x0, self.variance(t0, t))
    }

    fn variance(&self, t0: f64, t: f64) -> f64 {
        let e = 2.0 * self.hurst;
        self.c * (t.powf(e) - t0.powf(e))
    }
}

/// g(x, t; x0, t0) for t > t0 >= 0.
pub fn kernel_density(k: &TransitionKernel, x: f64, t: f64, x0: f64, t0: f64) -> Result<f64> {
    check_order(&[t0, t])?;
    if t0 < 0.0 {
        return Err(Error::InvalidParameter(format!("t0 must be >= 0, got {t0}")));
    }
    Ok(k.density(x, t, x0, t0))
}

/// f(x, t_target) = ∫ g(x, t_target; y, f.t) f(y) dy.
///
/// The inner integral uses the midpoint rule over the input bins; the output
/// lives on a uniform grid covering the input support widened by eight
/// kernel standard deviations, and is renormalized to unit mass.
pub fn propagate_density(k: &dyn Kernel, f: &DensityEstimate, t_target: f64) -> Result<DensityEstimate> {
    check_order(&[f.t, t_target])?;
    let sd = k.variance(f.t, t_target).sqrt();
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "kernel variance from {} to {t_target} is not positive",
            f.t
        )));
    }
    let lo = f.bin_edges[0] - COVERAGE_SDS * sd;
    let hi = f.bin_edges[f.bin_edges.len() - 1] + COVERAGE_SDS * sd;
    let target_width = f.max_width().min(sd / 10.0);
    let bins = (((hi - lo) / target_width).ceil() as usize).clamp(1, MAX_PROPAGATED_BINS);
    let h = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|j| lo + j as f64 * h).collect();

    let sources: Vec<(f64, f64)> = f
        .centers()
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| f.density[i] > 0.0)
        .map(|(i, y)| (y, f.density[i] * f.width(i)))
        .collect();
    let weights: Vec<f64> = edges
        .windows(2)
        .map(|w| {
            let x = 0.5 * (w[0] + w[1]);
            sources
                .iter()
                .map(|&(y, mass)| mass * k.density(x, t_target, y, f.t))
                .sum()
        })
        .collect();
    let mut out = DensityEstimate::from_weights(t_target, edges, &weights, f.binning)?;
    out.n_samples = f.n_samples;
    Ok(out)
}

/// Chapman–Kolmogorov residual for a Gaussian kernel; see [`ck_residual_parts`].
pub fn ck_residual(k: &TransitionKernel, t0: f64, t_mid: f64, t: f64, x_grid: &[f64]) -> Result<f64> {
    ck_residual_parts(k, k, k, t0, t_mid, t, x_grid)
}

/// sup |g(x, t; x0, t0) - ∫ g(x, t; x', t') g(x', t'; x0, t0) dx'| over
/// sample pairs (x, x0), with the integral done by the trapezoidal rule on
/// `x_grid`.
///
/// `late` supplies g(·, t; ·, t'), `early` supplies g(·, t'; ·, t0). Sample
/// points are taken from the central quarter of the grid so the composed
/// integrand is never truncated by the grid ends.
pub fn ck_residual_parts(
    direct: &dyn Kernel,
    early: &dyn Kernel,
    late: &dyn Kernel,
    t0: f64,
    t_mid: f64,
    t: f64,
    x_grid: &[f64],
) -> Result<f64> {
    check_order(&[t0, t_mid, t])?;
    if x_grid.len() < 2 || x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("x grid must be strictly increasing".into()));
    }
    let span = x_grid[x_grid.len() - 1] - x_grid[0];
    let needed = COVERAGE_SDS * direct.variance(t0, t).sqrt();
    if span < needed {
        return Err(Error::GridCoverage { span, needed });
    }
    let center = 0.5 * (x_grid[0] + x_grid[x_grid.len() - 1]);
    let central: Vec<f64> = x_grid
        .iter()
        .copied()
        .filter(|x| (x - center).abs() <= span / 8.0)
        .collect();
    let stride = central.len().div_ceil(17).max(1);
    let samples: Vec<f64> = central.iter().copied().step_by(stride).collect();

    let mut worst: f64 = 0.0;
    for &x0 in &samples {
        let first: Vec<f64> = x_grid.iter().map(|&xm| early.density(xm, t_mid, x0, t0)).collect();
        for &x in &samples {
            let integrand: Vec<f64> = x_grid
                .iter()
                .zip(&first)
                .map(|(&xm, g1)| late.density(x, t, xm, t_mid) * g1)
                .collect();
            let composed: f64 = x_grid
                .windows(2)
                .zip(integrand.windows(2))
                .map(|(xs, fs)| 0.5 * (fs[0] + fs[1]) * (xs[1] - xs[0]))
                .sum();
            worst = worst.max((direct.density(x, t, x0, t0) - composed).abs());
        }
    }
    Ok(worst)
}

/// Point mass at `x` represented as a single narrow bin.
pub fn point_mass(t: f64, x: f64, width: f64) -> Result<DensityEstimate> {
    DensityEstimate::from_weights(t, vec![x - 0.5 * width, x + 0.5 * width], &[1.0], Binning::Count(1))
}

fn check_order(times: &[f64]) -> Result<()> {
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(format!(
            "times must be strictly increasing, got {times:?}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::normal_cdf;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn density_values() {
        let k = TransitionKernel::new(0.5, 1.0).unwrap();
        let v = kernel_density(&k, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
        let k = TransitionKernel::new(0.7, 1.0).unwrap();
        let var = 2f64.powf(1.4) - 1.0;
        assert!((k.variance(1.0, 2.0) - 1.639_015_821_545_788_4).abs() < 1e-12);
        let v = kernel_density(&k, 0.3, 2.0, 0.3, 1.0).unwrap();
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI * var).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn density_order_error() {
        let k = TransitionKernel::new(0.5, 1.0).unwrap();
        assert!(kernel_density(&k, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(kernel_density(&k, 0.0, 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn point_mass_propagates_to_standard_normal() {
        let k = TransitionKernel::new(0.5, 1.0).unwrap();
        let f = point_mass(0.0, 0.0, 1e-6).unwrap();
        let out = propagate_density(&k, &f, 1.0).unwrap();
        assert!((out.integral() - 1.0).abs() < 1e-6);
        for x in [-2.0, -0.5, 0.0, 1.0, 2.5] {
            assert!((out.cdf_at(x) - normal_cdf(x, 0.0, 1.0)).abs() < 1e-3, "x={x}");
        }
        assert!((out.variance() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gaussian_convolution() {
        // N(0, 1) at t = 1 through the H = 0.7 kernel to t = 2 is N(0, 2^1.4)
        let edges = grid(-8.0, 8.0, 1601);
        let weights: Vec<f64> = edges.windows(2).map(|w| normal_pdf(0.5 * (w[0] + w[1]), 0.0, 1.0)).collect();
        let f = DensityEstimate::from_weights(1.0, edges, &weights, Binning::Width(0.01)).unwrap();
        let k = TransitionKernel::new(0.7, 1.0).unwrap();
        let out = propagate_density(&k, &f, 2.0).unwrap();
        let target = 2f64.powf(1.4);
        assert!((out.variance() - target).abs() < 1e-3, "{}", out.variance());
        assert!((out.integral() - 1.0).abs() < 1e-6);
        assert!((out.value_at(0.0) - normal_pdf(0.0, 0.0, target)).abs() < 1e-4);
    }

    #[test]
    fn propagate_order_error() {
        let k = TransitionKernel::new(0.5, 1.0).unwrap();
        let f = point_mass(1.0, 0.0, 1e-3).unwrap();
        assert!(propagate_density(&k, &f, 1.0).is_err());
        assert!(propagate_density(&k, &f, 0.5).is_err());
    }

    #[test]
    fn chapman_kolmogorov_holds_for_gaussian_kernel() {
        for h in [0.3, 0.5, 0.7] {
            for c in [1.0, 2.0] {
                let k = TransitionKernel::new(h, c).unwrap();
                let sd = k.variance(1.0, 4.0).sqrt();
                let r = ck_residual(&k, 1.0, 2.0, 4.0, &grid(-6.0 * sd, 6.0 * sd, 2048)).unwrap();
                assert!(r < 1e-6, "H={h} c={c}: {r}");
            }
        }
    }

    #[test]
    fn finer_grid_reduces_residual() {
        let k = TransitionKernel::new(0.7, 1.0).unwrap();
        let sd = k.variance(1.0, 4.0).sqrt();
        let coarse = ck_residual(&k, 1.0, 2.0, 4.0, &grid(-6.0 * sd, 6.0 * sd, 17)).unwrap();
        let fine = ck_residual(&k, 1.0, 2.0, 4.0, &grid(-6.0 * sd, 6.0 * sd, 33)).unwrap();
        assert!(coarse > 1e-6);
        assert!(fine < coarse, "{fine} vs {coarse}");
    }

    /// Early factor with exponent 2H + 0.1 in place of 2H.
    struct Corrupted(TransitionKernel);

    impl Kernel for Corrupted {
        fn density(&self, x: f64, t: f64, x0: f64, t0: f64) -> f64 {
            normal_pdf(x, x0, self.variance(t0, t))
        }
        fn variance(&self, t0: f64, t: f64) -> f64 {
            let e = 2.0 * self.0.hurst + 0.1;
            self.0.c * (t.powf(e) - t0.powf(e))
        }
    }

    #[test]
    fn corrupted_kernel_is_detected() {
        let k = TransitionKernel::new(0.7, 1.0).unwrap();
        let bad = Corrupted(k);
        // composed variance v1' + v2 against the direct variance v: the
        // mismatch of the two Gaussian peaks bounds the residual from below
        let v = k.variance(1.0, 4.0);
        let v_bad = bad.variance(1.0, 2.0) + k.variance(2.0, 4.0);
        let peak_gap = (normal_pdf(0.0, 0.0, v) - normal_pdf(0.0, 0.0, v_bad)).abs();
        assert!(peak_gap > 2e-3, "{peak_gap}");
        let sd = v_bad.sqrt();
        let r = ck_residual_parts(&k, &bad, &k, 1.0, 2.0, 4.0, &grid(-6.0 * sd, 6.0 * sd, 2048)).unwrap();
        assert!(r >= peak_gap * 0.999 && r > 1e-3, "{r}");
    }

    #[test]
    fn ck_argument_errors() {
        let k = TransitionKernel::new(0.7, 1.0).unwrap();
        let g = grid(-50.0, 50.0, 256);
        assert!(ck_residual(&k, 2.0, 1.0, 4.0, &g).is_err());
        assert!(ck_residual(&k, 1.0, 4.0, 4.0, &g).is_err());
        assert!(matches!(
            ck_residual(&k, 1.0, 2.0, 4.0, &grid(-1.0, 1.0, 256)),
            Err(Error::GridCoverage { .. })
        ));
    }
}
