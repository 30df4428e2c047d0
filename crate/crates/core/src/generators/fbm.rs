use std::sync::Arc;

use rayon::prelude::*;

use super::covariance::CovarianceMatrix;
use super::{check_request, finish};
use crate::error::Result;
use crate::process::{Ensemble, ProcessKind, ProcessSpec, SamplePath, TimeGrid};
use crate::rng::NoiseStream;

/// Exact fBm ensemble: each path is L z with L the Cholesky factor of the
/// covariance on the positive grid times.
///
/// A grid point at t = 0 carries the deterministic initial value x0.
pub fn gen_fbm(spec: &ProcessSpec, grid: &TimeGrid, n_paths: usize, seed: u64) -> Result<Ensemble> {
    check_request(spec, ProcessKind::Fbm, n_paths)?;
    let grid = Arc::new(grid.clone());
    let offset = usize::from(grid.start() == 0.0);
    let positive = &grid.times()[offset..];
    let factor = CovarianceMatrix::fbm(positive, spec.hurst, spec.c)?.factorize()?;
    let n = grid.len();

    let paths: Vec<SamplePath> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut noise = NoiseStream::new(seed, i as u64);
            let mut z = vec![0.0; factor.dim()];
            noise.fill(&mut z);
            let mut values = vec![spec.x0; n];
            factor.apply(&z, &mut values[offset..]);
            for v in &mut values[offset..] {
                *v += spec.x0;
            }
            SamplePath::martingale(grid.clone(), values)
        })
        .collect();
    finish(spec, grid, paths, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{make_grid, GridKind};

    #[test]
    fn wrong_kind_is_rejected() {
        let g = make_grid(GridKind::Uniform, 0.0, 1.0, 3).unwrap();
        let spec = ProcessSpec::markov_exact(0.7, 1.0).unwrap();
        assert!(gen_fbm(&spec, &g, 10, 1).is_err());
    }

    #[test]
    fn zero_time_carries_x0() {
        let g = make_grid(GridKind::Uniform, 0.0, 2.0, 3).unwrap();
        let spec = ProcessSpec::fbm(0.7, 1.0).unwrap().with_x0(1.5);
        let e = gen_fbm(&spec, &g, 5, 3).unwrap();
        assert!(e.paths().iter().all(|p| p.values()[0] == 1.5));
    }

    #[test]
    fn single_path_rejected() {
        let g = make_grid(GridKind::Uniform, 0.0, 2.0, 3).unwrap();
        let spec = ProcessSpec::fbm(0.7, 1.0).unwrap();
        assert!(gen_fbm(&spec, &g, 1, 3).is_err());
    }

    #[test]
    fn wiener_variance_at_h_half() {
        let g = make_grid(GridKind::Uniform, 0.0, 4.0, 5).unwrap();
        let spec = ProcessSpec::fbm(0.5, 2.0).unwrap();
        let n = 20_000;
        let e = gen_fbm(&spec, &g, n, 5).unwrap();
        for (k, &t) in g.times().iter().enumerate().skip(1) {
            let col = e.column(k);
            let var = col.iter().map(|x| x * x).sum::<f64>() / n as f64;
            let expected = 2.0 * t;
            let se = expected * (2.0 / n as f64).sqrt();
            assert!((var - expected).abs() < 3.0 * se, "t={t} var={var}");
        }
    }
}
