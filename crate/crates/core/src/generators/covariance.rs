use crate::error::{Error, Result};
use crate::process::TimeGrid;

const JITTER_START: f64 = 1e-12;
const JITTER_MAX: f64 = 1e-8;

/// ⟨x(s) x(t)⟩ for fractional Brownian motion with ⟨x²(t)⟩ = c t^(2H).
///
/// Follows from stationary increments, ⟨(x(t) - x(s))²⟩ = c |t - s|^(2H),
/// by polarization.
pub fn fbm_covariance(s: f64, t: f64, hurst: f64, c: f64) -> Result<f64> {
    if !(s >= 0.0 && t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "times must be non-negative, got s = {s}, t = {t}"
        )));
    }
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidParameter(format!("hurst must lie in (0, 1), got {hurst}")));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    Ok(fbm_cov_unchecked(s, t, hurst, c))
}

#[inline]
pub(crate) fn fbm_cov_unchecked(s: f64, t: f64, hurst: f64, c: f64) -> f64 {
    let e = 2.0 * hurst;
    0.5 * c * (s.powf(e) + t.powf(e) - (t - s).abs().powf(e))
}

/// Dense symmetric covariance of a process sampled on a grid.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    times: Vec<f64>,
    entries: Vec<f64>,
}

/// Lower Cholesky factor, row-major, plus the diagonal jitter that was needed.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    lower: Vec<f64>,
    jitter: f64,
}

impl CovarianceMatrix {
    /// fBm covariance at the given times.
    pub fn fbm(times: &[f64], hurst: f64, c: f64) -> Result<Self> {
        // validates the parameters once
        fbm_covariance(0.0, 0.0, hurst, c)?;
        let n = times.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = fbm_cov_unchecked(times[i], times[j], hurst, c);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self {
            times: times.to_vec(),
            entries,
        })
    }

    pub fn for_grid(grid: &TimeGrid, hurst: f64, c: f64) -> Result<Self> {
        Self::fbm(grid.times(), hurst, c)
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    /// Cholesky factorization, escalating a relative diagonal jitter from
    /// 1e-12 by factors of 10 up to 1e-8 when a pivot is not positive.
    pub fn factorize(&self) -> Result<CholeskyFactor> {
        let n = self.dim();
        let scale = (0..n).map(|i| self.get(i, i)).fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
        let mut jitter = 0.0;
        loop {
            match cholesky(&self.entries, n, jitter * scale) {
                Ok(lower) => return Ok(CholeskyFactor { n, lower, jitter }),
                Err(pivot) => {
                    jitter = if jitter == 0.0 { JITTER_START } else { jitter * 10.0 };
                    if jitter > JITTER_MAX * 1.000_001 {
                        return Err(Error::Factorization {
                            pivot,
                            time: self.times[pivot],
                            jitter: jitter / 10.0,
                        });
                    }
                }
            }
        }
    }
}

fn cholesky(a: &[f64], n: usize, jitter: f64) -> std::result::Result<Vec<f64>, usize> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                let d = sum + jitter;
                if !(d > 0.0) || !d.is_finite() {
                    return Err(i);
                }
                l[i * n + i] = d.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.n + j]
    }

    /// out = L z
    pub fn apply(&self, z: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i + 1];
            out[i] = row.iter().zip(&z[..=i]).map(|(a, b)| a * b).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_case_is_min() {
        assert!((fbm_covariance(1.0, 2.0, 0.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((fbm_covariance(3.0, 1.5, 0.5, 2.0).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_is_variance() {
        assert!((fbm_covariance(1.0, 1.0, 0.7, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let v = fbm_covariance(4.0, 4.0, 0.3, 2.5).unwrap();
        assert!((v - 2.5 * 4f64.powf(0.6)).abs() < 1e-12);
    }

    #[test]
    fn off_diagonal_closed_form() {
        let v = fbm_covariance(1.0, 2.0, 0.7, 1.0).unwrap();
        assert!((v - 2f64.powf(0.4)).abs() < 1e-12);
        assert!((v - 1.319_507_910_772_894).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(fbm_covariance(-1.0, 1.0, 0.5, 1.0).is_err());
        assert!(fbm_covariance(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(fbm_covariance(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(fbm_covariance(1.0, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn factor_reproduces_matrix() {
        let times: Vec<f64> = (1..=20).map(|k| k as f64 * 0.5).collect();
        let cov = CovarianceMatrix::fbm(&times, 0.8, 1.3).unwrap();
        let f = cov.factorize().unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let llt: f64 = (0..20).map(|k| f.get(i, k) * f.get(j, k)).sum();
                assert!((llt - cov.get(i, j)).abs() < 1e-9 * cov.get(i, i).max(1.0));
            }
        }
    }

    #[test]
    fn singular_matrix_uses_jitter() {
        // duplicate point makes the matrix exactly singular
        let cov = CovarianceMatrix::fbm(&[1.0, 1.0, 2.0], 0.5, 1.0).unwrap();
        let f = cov.factorize().unwrap();
        assert!(f.jitter() >= 1e-12 && f.jitter() <= 1e-8);
    }

    #[test]
    fn hopeless_matrix_reports_pivot() {
        let cov = CovarianceMatrix {
            times: vec![1.0, 2.0],
            entries: vec![1.0, 2.0, 2.0, 1.0],
        };
        match cov.factorize() {
            Err(Error::Factorization { pivot, time, .. }) => {
                assert_eq!(pivot, 1);
                assert_eq!(time, 2.0);
            }
            other => panic!("expected factorization failure, got {other:?}"),
        }
    }
}
