//! Least-squares extraction of expansion coefficients.
//!
//! Magnitudes at scales `R_i` are fitted to `Σ_{k≤K} m_k R^{n−k}`.  Each row is
//! multiplied by `R_i^{−p}` (default `p = n`) so that large scales do not
//! dominate, which turns the basis into `R^{−k}`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::linalg::thin_svd;
use crate::OracleError;

/// Largest accepted condition number of the weighted design matrix.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub n: u32,
    pub order: u32,
    /// `m_0..=m_K`.
    pub coeffs: Vec<f64>,
    /// Estimated covariance of `coeffs`; zero when the fit is exactly
    /// determined.
    pub covariance: Vec<Vec<f64>>,
    /// Euclidean norm of the weighted residual.
    pub residual: f64,
    pub cond: f64,
    pub weight_exponent: f64,
}

impl FitReport {
    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.coeffs.len()).map(|k| self.covariance[k][k].max(0.0).sqrt()).collect()
    }
}

/// `R` values from `start` to `end` in geometric progression.
pub fn geometric_ladder(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count).map(|i| start * (end / start).powf(i as f64 / (count - 1) as f64)).collect(),
    }
}

/// Fits `m_0..=m_K` with the default weights `R^{−n}`.
pub fn fit_coefficients(samples: &[(f64, f64)], n: u32, k: u32) -> Result<FitReport, OracleError> {
    fit_coefficients_weighted(samples, n, k, n as f64)
}

/// Fits `m_0..=m_K` with row weights `R^{−p}`.
pub fn fit_coefficients_weighted(samples: &[(f64, f64)], n: u32, k: u32, p: f64) -> Result<FitReport, OracleError> {
    let cols = k as usize + 1;
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < cols + 1 {
        return Err(OracleError::TooFewScales { order: k, needed: cols + 1, got: distinct.len() });
    }
    if let Some(bad) = distinct.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(OracleError::BadScale(*bad));
    }
    let rows = samples.len();
    let weight = |r: f64| r.powf(-p);
    let a = Mat::<f64>::from_fn(rows, cols, |i, j| {
        let r = samples[i].0;
        weight(r) * r.powi(n as i32 - j as i32)
    });
    let b: Vec<f64> = samples.iter().map(|(r, v)| weight(*r) * v).collect();
    let svd = thin_svd(a.as_ref())?;
    let cond = if svd.s[cols - 1] > 0.0 { svd.s[0] / svd.s[cols - 1] } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(OracleError::IllConditioned { cond, limit: MAX_CONDITION });
    }
    // c = V Σ⁻¹ Uᵀ b
    let utb: Vec<f64> = (0..cols).map(|j| (0..rows).map(|i| svd.u[(i, j)] * b[i]).sum::<f64>() / svd.s[j]).collect();
    let coeffs: Vec<f64> = (0..cols).map(|i| (0..cols).map(|j| svd.v[(i, j)] * utb[j]).sum()).collect();
    let residual = (0..rows)
        .map(|i| {
            let fit: f64 = (0..cols).map(|j| a[(i, j)] * coeffs[j]).sum();
            (fit - b[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    // σ² (AᵀA)⁻¹ = σ² V Σ⁻² Vᵀ with σ² = RSS/(rows − cols).
    let sigma2 = if rows > cols { residual * residual / (rows - cols) as f64 } else { 0.0 };
    let covariance = (0..cols)
        .map(|i| {
            (0..cols).map(|l| sigma2 * (0..cols).map(|j| svd.v[(i, j)] * svd.v[(l, j)] / (svd.s[j] * svd.s[j])).sum::<f64>()).collect()
        })
        .collect();
    Ok(FitReport { n, order: k, coeffs, covariance, residual, cond, weight_exponent: p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::ClosedForm;

    fn samples(f: impl Fn(f64) -> f64, rs: &[f64]) -> Vec<(f64, f64)> {
        rs.iter().map(|r| (*r, f(*r))).collect()
    }

    #[test]
    fn recovers_ball_polynomial() {
        let ball = ClosedForm::Ball3 { r: 1.0 };
        let fit = fit_coefficients(&samples(|r| ball.eval(r), &geometric_ladder(2.0, 40.0, 8)), 3, 3).unwrap();
        for (got, e) in fit.coeffs.iter().zip([1.0 / 6.0, 1.0, 2.0, 1.0]) {
            assert!((got - e).abs() < 1e-9, "{:?}", fit.coeffs);
        }
    }

    #[test]
    fn interval_line() {
        let iv = ClosedForm::Interval { length: 3.0 };
        let fit = fit_coefficients(&samples(|r| iv.eval(r), &[1.0, 2.0, 5.0]), 1, 1).unwrap();
        assert!((fit.coeffs[0] - 1.5).abs() < 1e-12 && (fit.coeffs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_leading_coefficient() {
        // Relative noise of 1e-4 on the ball magnitude, alternating in sign.
        let ball = ClosedForm::Ball3 { r: 1.0 };
        let rs = geometric_ladder(5.0, 60.0, 10);
        let noisy: Vec<(f64, f64)> = rs.iter().enumerate().map(|(i, r)| (*r, ball.eval(*r) * (1.0 + 1e-4 * if i % 2 == 0 { 1.0 } else { -1.0 }))).collect();
        let fit = fit_coefficients(&noisy, 3, 3).unwrap();
        assert!((fit.coeffs[0] - 1.0 / 6.0).abs() < 1e-3);
        assert!(fit.std_errors()[0] > 0.0);
    }

    #[test]
    fn rejects_degenerate_ladders() {
        let s = samples(|r| r, &[1.0, 1.0, 2.0]);
        assert!(matches!(fit_coefficients(&s, 1, 1), Err(OracleError::TooFewScales { .. })));
        let close = samples(|r| r, &geometric_ladder(10.0, 10.0 + 1e-6, 6));
        assert!(matches!(fit_coefficients(&close, 3, 4), Err(OracleError::IllConditioned { .. })));
    }
}
