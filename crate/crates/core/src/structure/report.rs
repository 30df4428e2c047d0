use serde::{Deserialize, Serialize};

use super::correlation::{increment_autocorrelation, martingale_residual, MartingaleCheck};
use super::kernel::{ck_residual, Kernel, TransitionKernel};
use super::stationarity::{stationarity_test, StationarityResult};
use crate::error::Result;
use crate::process::Ensemble;
use crate::stats::Estimate;

/// Half-width, in standard deviations of the widest kernel, of the default
/// Chapman–Kolmogorov quadrature grid.
pub const CK_GRID_HALF_WIDTH_SDS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub t: f64,
    pub lag: f64,
}

/// Increments over [t1 - lag1, t1] and [t2, t2 + lag2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalPair {
    pub t1: f64,
    pub lag1: f64,
    pub t2: f64,
    pub lag2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkProbe {
    pub t0: f64,
    pub t_mid: f64,
    pub t: f64,
    pub grid_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureProbes {
    pub correlation: IntervalPair,
    pub stationarity: Probe,
    pub martingale: Probe,
    pub ck: CkProbe,
}

impl Default for StructureProbes {
    fn default() -> Self {
        Self {
            correlation: IntervalPair {
                t1: 1.0,
                lag1: 1.0,
                t2: 1.0,
                lag2: 1.0,
            },
            stationarity: Probe { t: 8.0, lag: 1.0 },
            martingale: Probe { t: 1.0, lag: 1.0 },
            ck: CkProbe {
                t0: 1.0,
                t_mid: 2.0,
                t: 4.0,
                grid_points: 2048,
            },
        }
    }
}

impl StructureProbes {
    /// Grid times the ensemble-based probes need.
    pub fn required_times(&self) -> Vec<f64> {
        let c = self.correlation;
        let s = self.stationarity;
        let m = self.martingale;
        vec![
            c.t1 - c.lag1,
            c.t1,
            c.t2,
            c.t2 + c.lag2,
            s.t,
            s.t + s.lag,
            s.lag,
            m.t,
            m.t + m.lag,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementCorrelation {
    pub intervals: IntervalPair,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CkCheck {
    pub probe: CkProbe,
    pub kernel: TransitionKernel,
    pub residual: f64,
}

/// Increment-level discriminators for one ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub increment_corr: IncrementCorrelation,
    pub stationarity: StationarityResult,
    pub martingale: MartingaleCheck,
    pub ck: CkCheck,
}

/// Uniform quadrature grid spanning ±6 standard deviations of g(·, t; ·, t0).
pub fn ck_grid(k: &dyn Kernel, t0: f64, t: f64, points: usize) -> Vec<f64> {
    let half = CK_GRID_HALF_WIDTH_SDS * k.variance(t0, t).sqrt();
    let n = points.max(2);
    (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
}

pub fn structure_report(e: &Ensemble, probes: &StructureProbes, kernel: TransitionKernel) -> Result<StructureReport> {
    let c = probes.correlation;
    let estimate = increment_autocorrelation(e, c.t1, c.lag1, c.t2, c.lag2)?;
    let stationarity = stationarity_test(e, probes.stationarity.t, probes.stationarity.lag)?;
    let martingale = martingale_residual(e, probes.martingale.t, probes.martingale.lag)?;
    let ck = probes.ck;
    let grid = ck_grid(&kernel, ck.t0, ck.t, ck.grid_points);
    let residual = ck_residual(&kernel, ck.t0, ck.t_mid, ck.t, &grid)?;
    Ok(StructureReport {
        increment_corr: IncrementCorrelation {
            intervals: c,
            estimate,
        },
        stationarity,
        martingale,
        ck: CkCheck {
            probe: ck,
            kernel,
            residual,
        },
    })
}
