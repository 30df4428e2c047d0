use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use super::path::SamplePath;
use crate::error::{Error, Result};

/// Deterministic drift rate R(t), independent of x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftSpec {
    Constant(f64),
    /// Piecewise-linear interpolation through `(time, rate)` pairs.
    Tabulated { times: Vec<f64>, rates: Vec<f64> },
}

impl DriftSpec {
    pub fn tabulated(times: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if times.len() != rates.len() || times.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated drift needs >= 2 (time, rate) pairs of equal length".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated drift times must be strictly increasing".into(),
            ));
        }
        if times.iter().chain(&rates).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated drift must be finite".into()));
        }
        Ok(DriftSpec::Tabulated { times, rates })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DriftSpec::Constant(r) => *r == 0.0,
            DriftSpec::Tabulated { rates, .. } => rates.iter().all(|&r| r == 0.0),
        }
    }

    pub fn rate(&self, t: f64) -> f64 {
        match self {
            DriftSpec::Constant(r) => *r,
            DriftSpec::Tabulated { times, rates } => {
                let k = times.partition_point(|&x| x <= t).clamp(1, times.len() - 1);
                let (t0, t1) = (times[k - 1], times[k]);
                let w = (t - t0) / (t1 - t0);
                rates[k - 1] + w * (rates[k] - rates[k - 1])
            }
        }
    }

    fn check_covers(&self, grid: &TimeGrid) -> Result<()> {
        if let DriftSpec::Tabulated { times, .. } = self {
            let (lo, hi) = (times[0], times[times.len() - 1]);
            if lo > grid.start() || hi < grid.end() {
                return Err(Error::DriftCoverage(format!(
                    "table spans [{lo}, {hi}], grid spans [{}, {}]",
                    grid.start(),
                    grid.end()
                )));
            }
        }
        Ok(())
    }

    /// Cumulative integral of R from the first grid time to every grid time.
    ///
    /// Tabulated rates are integrated by the trapezoidal rule over the union
    /// of table breakpoints and grid points, which is exact for the
    /// piecewise-linear interpolant.
    pub fn cumulative_integral(&self, grid: &TimeGrid) -> Result<Vec<f64>> {
        self.check_covers(grid)?;
        let times = grid.times();
        let t0 = times[0];
        Ok(match self {
            DriftSpec::Constant(r) => times.iter().map(|&t| r * (t - t0)).collect(),
            DriftSpec::Tabulated { times: knots, .. } => {
                let mut out = Vec::with_capacity(times.len());
                let mut acc = 0.0;
                out.push(0.0);
                for w in times.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let mut prev = a;
                    let mut prev_rate = self.rate(a);
                    let inner = knots.iter().copied().filter(|&k| k > a && k < b);
                    for s in inner.chain(std::iter::once(b)) {
                        let rate = self.rate(s);
                        acc += 0.5 * (prev_rate + rate) * (s - prev);
                        prev = s;
                        prev_rate = rate;
                    }
                    out.push(acc);
                }
                out
            }
        })
    }
}

/// Adds the integrated drift to a path, clearing its detrended flag.
pub fn apply_drift(path: &SamplePath, drift: &DriftSpec) -> Result<SamplePath> {
    let integral = drift.cumulative_integral(path.grid())?;
    let values = path
        .values()
        .iter()
        .zip(&integral)
        .map(|(v, i)| v + i)
        .collect();
    Ok(SamplePath::with_undo(path, values, drift.clone()))
}

/// Subtracts the integrated drift, yielding the martingale variable.
///
/// When `path` was produced by [`apply_drift`] with the same drift the
/// original values are restored bit for bit.
pub fn remove_drift(path: &SamplePath, drift: &DriftSpec) -> Result<SamplePath> {
    if let Some(prior) = path.undo_for(drift) {
        let mut restored = prior.clone();
        restored.set_detrended(true);
        return Ok(restored);
    }
    let integral = drift.cumulative_integral(path.grid())?;
    let values = path
        .values()
        .iter()
        .zip(&integral)
        .map(|(v, i)| v - i)
        .collect();
    let mut out = SamplePath::new(path.grid_arc(), values)?;
    out.set_detrended(true);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::process::grid::{make_grid, GridKind};

    fn path(values: Vec<f64>, grid: TimeGrid) -> SamplePath {
        SamplePath::new(Arc::new(grid), values).unwrap()
    }

    #[test]
    fn zero_drift_is_identity() {
        let g = make_grid(GridKind::Uniform, 0.0, 3.0, 4).unwrap();
        let p = path(vec![0.0, 1.5, -2.0, 0.25], g);
        let q = apply_drift(&p, &DriftSpec::Constant(0.0)).unwrap();
        assert_eq!(q.values(), p.values());
        assert!(!q.detrended());
    }

    #[test]
    fn constant_drift_gains_rate_times_elapsed() {
        let g = make_grid(GridKind::Uniform, 0.0, 4.0, 5).unwrap();
        let p = path(vec![0.0; 5], g);
        let q = apply_drift(&p, &DriftSpec::Constant(0.5)).unwrap();
        assert_eq!(q.values(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn linear_tabulated_rate_integrates_exactly() {
        let d = DriftSpec::tabulated(vec![0.0, 2.0], vec![0.0, 2.0]).unwrap();
        let g = make_grid(GridKind::Uniform, 0.0, 2.0, 3).unwrap();
        let q = apply_drift(&path(vec![0.0; 3], g), &d).unwrap();
        assert!((q.values()[2] - 2.0).abs() < 1e-15);
        assert!((q.values()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_converges_for_curved_rate() {
        // R(s) = s^2 tabulated finely; exact integral to 2 is 8/3.
        let knots: Vec<f64> = (0..=2000).map(|k| k as f64 * 1e-3).collect();
        let rates = knots.iter().map(|s| s * s).collect();
        let d = DriftSpec::tabulated(knots, rates).unwrap();
        let g = make_grid(GridKind::Uniform, 0.0, 2.0, 3).unwrap();
        let q = apply_drift(&path(vec![0.0; 3], g), &d).unwrap();
        assert!((q.values()[2] - 8.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn removal_of_unit_rate_from_zero_path() {
        let g = make_grid(GridKind::Uniform, 0.0, 3.0, 4).unwrap();
        let q = remove_drift(&path(vec![0.0; 4], g), &DriftSpec::Constant(1.0)).unwrap();
        assert_eq!(q.values()[3], -3.0);
        assert!(q.detrended());
    }

    #[test]
    fn round_trip_restores_values() {
        let g = make_grid(GridKind::Uniform, 0.0, 3.0, 4).unwrap();
        let p = path(vec![0.0, 1e-20, 0.1, 7.3], g);
        let d = DriftSpec::Constant(0.3);
        let back = remove_drift(&apply_drift(&p, &d).unwrap(), &d).unwrap();
        assert_eq!(back.values(), p.values());
    }

    #[test]
    fn uncovered_table_is_rejected() {
        let d = DriftSpec::tabulated(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let g = make_grid(GridKind::Uniform, 0.0, 2.0, 3).unwrap();
        let p = path(vec![0.0; 3], g);
        assert!(matches!(apply_drift(&p, &d), Err(Error::DriftCoverage(_))));
        assert!(matches!(remove_drift(&p, &d), Err(Error::DriftCoverage(_))));
    }
}
