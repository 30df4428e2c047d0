use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{mean, mean_se, Estimate};

/// Default number of equal-count x(t) bins in the conditional-mean check.
pub const DEFAULT_CONDITIONAL_BINS: usize = 20;

/// Correlation of x(t1) - x(t1 - lag1) with x(t2 + lag2) - x(t2).
///
/// The intervals [t1 - lag1, t1] and [t2, t2 + lag2] may touch but must not
/// overlap. The standard error is the asymptotic 1/√N.
pub fn increment_autocorrelation(
    e: &Ensemble,
    t1: f64,
    lag1: f64,
    t2: f64,
    lag2: f64,
) -> Result<Estimate> {
    if !(lag1 > 0.0 && lag2 > 0.0) {
        return Err(Error::InvalidParameter("lags must be positive".into()));
    }
    let (a0, a1) = (t1 - lag1, t1);
    let (b0, b1) = (t2, t2 + lag2);
    if !(a1 <= b0 || b1 <= a0) {
        return Err(Error::OverlappingIntervals(format!(
            "[{a0}, {a1}] and [{b0}, {b1}] share more than an endpoint"
        )));
    }
    e.require_paths(2)?;
    let g = e.grid();
    let (ia0, ia1, ib0, ib1) = (g.require(a0)?, g.require(a1)?, g.require(b0)?, g.require(b1)?);
    let first: Vec<f64> = e.paths().iter().map(|p| p.values()[ia1] - p.values()[ia0]).collect();
    let second: Vec<f64> = e.paths().iter().map(|p| p.values()[ib1] - p.values()[ib0]).collect();
    let n = first.len() as f64;
    Ok(Estimate::new(pearson(&first, &second), 1.0 / n.sqrt()))
}

/// ⟨(x(t) - x0)(x(t + T) - x0)⟩ with its standard error; T = 0 gives ⟨x²(t)⟩.
pub fn process_autocorrelation(e: &Ensemble, t: f64, lag: f64) -> Result<Estimate> {
    if !(lag >= 0.0) {
        return Err(Error::InvalidParameter(format!("lag must be >= 0, got {lag}")));
    }
    e.require_paths(2)?;
    let i0 = e.grid().require(t)?;
    let i1 = e.grid().require(t + lag)?;
    let origin = e.origin();
    let products: Vec<f64> = e
        .paths()
        .iter()
        .map(|p| (p.values()[i0] - origin) * (p.values()[i1] - origin))
        .collect();
    Ok(mean_se(&products))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalBin {
    /// Mean of x(t) within the bin.
    pub center: f64,
    /// Mean of x(t + T) within the bin.
    pub conditional_mean: Estimate,
    pub count: usize,
}

impl ConditionalBin {
    pub fn z_score(&self) -> f64 {
        self.conditional_mean.z_score(self.center)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleCheck {
    pub t: f64,
    pub lag: f64,
    /// ⟨x(t) x(t + T)⟩ - ⟨x²(t)⟩
    pub residual: Estimate,
    pub bins: Vec<ConditionalBin>,
}

impl MartingaleCheck {
    pub fn max_bin_z(&self) -> f64 {
        self.bins.iter().map(ConditionalBin::z_score).fold(0.0, f64::max)
    }

    /// Least-squares slope of the bin conditional means on the bin centers;
    /// 1 for a martingale.
    pub fn conditional_slope(&self) -> f64 {
        let x: Vec<f64> = self.bins.iter().map(|b| b.center).collect();
        let y: Vec<f64> = self.bins.iter().map(|b| b.conditional_mean.value).collect();
        let (mx, my) = (mean(&x), mean(&y));
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        sxy / sxx
    }
}

/// Martingale reduction check with the default bin count.
pub fn martingale_residual(e: &Ensemble, t: f64, lag: f64) -> Result<MartingaleCheck> {
    martingale_residual_with_bins(e, t, lag, DEFAULT_CONDITIONAL_BINS)
}

/// ⟨x(t) x(t + T)⟩ - ⟨x²(t)⟩, estimated as the mean of x(t)(x(t + T) - x(t))
/// so the standard error accounts for the correlation of the two terms,
/// plus the binned conditional mean of x(t + T) given x(t).
pub fn martingale_residual_with_bins(e: &Ensemble, t: f64, lag: f64, bins: usize) -> Result<MartingaleCheck> {
    if !(lag > 0.0) {
        return Err(Error::InvalidParameter(format!("lag must be positive, got {lag}")));
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one conditional bin".into()));
    }
    e.require_paths(2 * bins)?;
    let i0 = e.grid().require(t)?;
    let i1 = e.grid().require(t + lag)?;
    let origin = e.origin();
    let mut pairs: Vec<(f64, f64)> = e
        .paths()
        .iter()
        .map(|p| (p.values()[i0] - origin, p.values()[i1] - origin))
        .collect();
    let products: Vec<f64> = pairs.iter().map(|(a, b)| a * (b - a)).collect();
    let residual = mean_se(&products);

    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pairs.len();
    let bins = (0..bins)
        .map(|k| {
            let chunk = &pairs[k * n / bins..(k + 1) * n / bins];
            let xs: Vec<f64> = chunk.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = chunk.iter().map(|p| p.1).collect();
            ConditionalBin {
                center: mean(&xs) + origin,
                conditional_mean: {
                    let m = mean_se(&ys);
                    Estimate::new(m.value + origin, m.se)
                },
                count: chunk.len(),
            }
        })
        .collect();
    Ok(MartingaleCheck {
        t,
        lag,
        residual,
        bins,
    })
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    sab / (saa * sbb).sqrt()
}
