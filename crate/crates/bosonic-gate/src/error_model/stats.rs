// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Ensemble statistics and the empirical intrinsic-error fit.

use serde::Serialize;

use crate::error::{Error, Result};

/// Sample statistics of a gate ensemble.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnsembleStats {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std_dev: f64,
    /// Relative standard deviation std_dev / mean.
    pub rsd: f64,
}

pub fn ensemble_stats(values: &[f64]) -> Result<EnsembleStats> {
    if values.len() < 2 {
        return Err(Error::invalid(
            "ensemble statistics need at least two values",
        ));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let std_dev = var.sqrt();
    Ok(EnsembleStats {
        mean,
        std_dev,
        rsd: std_dev / mean,
    })
}

/// Fits ln(r0) against the gate time in microseconds and returns the decay
/// constant, i.e. the magnitude of the least-squares slope of
/// r0(T) ~ exp(-a T[us]).
///
/// Requires at least three points with strictly positive r0.
pub fn fit_intrinsic_decay(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::invalid("intrinsic-error fit needs >= 3 points"));
    }
    if let Some(&(t, r)) = points.iter().find(|&&(_, r)| r <= 0.0) {
        return Err(Error::invalid(format!(
            "intrinsic-error fit rejects nonpositive r0 = {r:.3e} at T = {t:.3e} s"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(t, _)| t * 1e6).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - x_mean) * (y - y_mean);
        den += (x - x_mean) * (x - x_mean);
    }
    if den == 0.0 {
        return Err(Error::invalid("intrinsic-error fit needs distinct gate times"));
    }
    Ok((num / den).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stats_trivial_cases() {
        let s = ensemble_stats(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!((s.mean, s.std_dev, s.rsd), (2.0, 0.0, 0.0));

        let s = ensemble_stats(&[0.3, 0.5]).unwrap();
        assert_relative_eq!(s.mean, 0.4, epsilon = 1e-15);
        // sample standard deviation
        assert_relative_eq!(s.std_dev, 0.1414213562373095, epsilon = 1e-12);
        assert_relative_eq!(s.rsd, s.std_dev / 0.4, epsilon = 1e-15);

        assert!(ensemble_stats(&[1.0]).is_err());
        assert!(ensemble_stats(&[]).is_err());
    }

    #[test]
    fn published_susceptibility_row_is_consistent() {
        // mean 2.038 with std 0.069 rounds to the quoted RSD 0.033
        let rsd: f64 = 0.069 / 2.038;
        assert!((rsd - 0.0339).abs() < 1e-4);
        assert!((rsd - 0.033).abs() < 1e-3);
    }

    #[test]
    fn fit_recovers_exact_exponential() {
        let a = 11.05;
        let points: Vec<(f64, f64)> = (2..10)
            .map(|k| {
                let t = k as f64 * 0.1e-6;
                (t, (-a * t * 1e6).exp())
            })
            .collect();
        let fitted = fit_intrinsic_decay(&points).unwrap();
        assert_relative_eq!(fitted, a, epsilon = 1e-6);
    }

    #[test]
    fn fit_zero_slope_and_rejections() {
        let flat = [(0.2e-6, 1e-3), (0.5e-6, 1e-3), (1.0e-6, 1e-3)];
        assert_relative_eq!(fit_intrinsic_decay(&flat).unwrap(), 0.0, epsilon = 1e-12);

        assert!(fit_intrinsic_decay(&[(1e-6, 1e-3), (2e-6, 1e-4)]).is_err());
        assert!(fit_intrinsic_decay(&[(1e-6, 1e-3), (2e-6, 0.0), (3e-6, 1e-4)]).is_err());
        assert!(fit_intrinsic_decay(&[(1e-6, 1e-3), (1e-6, 1e-3), (1e-6, 1e-3)]).is_err());
    }
}
