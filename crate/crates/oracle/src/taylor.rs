//! The power series of the magnitude at `R = 0` and the function `e(t)`.
//!
//! With quadrature weights `Δ_j`, let `Z_k = [d_ij^k/k!·Δ_j]`.  Expanding
//! `e^{−Rd}` in the weight equation gives a recursion that needs only
//! solves with `Z_1`:
//!
//! ```text
//! g = Z_1⁻¹·1,  λ_1 = 1/⟨Δ, g⟩,  u_0 = λ_1 g
//! s = Σ_{l=0..k} (−1)^{k−l} Z_1⁻¹ Z_{k+2−l} u_l
//! λ_{k+2} = (λ_{k+1} − ⟨Δ, s⟩)/⟨Δ, g⟩,  u_{k+1} = s + λ_{k+2} g
//! ```
//!
//! and then `𝓜(R) = 1 + Σ λ_k R^k` near 0.

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::linalg::{condition_number, Lu};
use crate::OracleError;

/// Largest accepted condition number of `Z_1`.
pub const MAX_Z1_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    /// `λ_1..=λ_K`.
    pub lambdas: Vec<f64>,
    /// Condition number of `Z_1`.
    pub cond: f64,
    pub points: usize,
}

/// `λ_1..=λ_K` of the magnitude at `R = 0`.
pub fn taylor_zero(cloud: &PointCloud, k: u32) -> Result<TaylorReport, OracleError> {
    let delta = cloud.quad_weights.as_ref().ok_or(OracleError::MissingQuadrature)?;
    let m = cloud.len();
    if m < 2 {
        return Err(OracleError::TooFewPoints { needed: 2, got: m });
    }
    let d = cloud.distance_matrix();
    let z1 = Mat::<f64>::from_fn(m, m, |i, j| d[i * m + j] * delta[j]);
    let cond = condition_number(z1.as_ref())?;
    if !(cond <= MAX_Z1_CONDITION) {
        return Err(OracleError::SingularZ1 { cond, limit: MAX_Z1_CONDITION });
    }
    let lu = Lu::new(z1);
    let dot = |a: &[f64]| a.iter().zip(delta).map(|(x, w)| x * w).sum::<f64>();
    // Z_j u with Z_j = [d^j/j!·Δ]
    let apply = |j: u32, u: &[f64]| -> Vec<f64> {
        let fact: f64 = (1..=j).map(f64::from).product();
        d.par_chunks(m)
            .map(|row| row.iter().zip(delta).zip(u).map(|((dij, w), ui)| dij.powi(j as i32) * w * ui).sum::<f64>() / fact)
            .collect()
    };

    let g = lu.solve(&vec![1.0; m]);
    let dg = dot(&g);
    let mut lambdas = Vec::with_capacity(k as usize);
    if k == 0 {
        return Ok(TaylorReport { lambdas, cond, points: m });
    }
    lambdas.push(1.0 / dg);
    let mut u: Vec<Vec<f64>> = vec![g.iter().map(|x| x / dg).collect()];
    for step in 0..k.saturating_sub(1) {
        let mut acc = vec![0.0; m];
        for l in 0..=step {
            let sign = if (step - l) % 2 == 0 { 1.0 } else { -1.0 };
            let zu = apply(step + 2 - l, &u[l as usize]);
            for (a, v) in acc.iter_mut().zip(zu) {
                *a += sign * v;
            }
        }
        let s = lu.solve(&acc);
        let next = (lambdas[step as usize] - dot(&s)) / dg;
        lambdas.push(next);
        u.push(s.iter().zip(&g).map(|(si, gi)| si + next * gi).collect());
    }
    Ok(TaylorReport { lambdas, cond, points: m })
}

/// `e(t) = Σ_ij e^{−t d_ij} Δ_i Δ_j`.
pub fn expectation_e(cloud: &PointCloud, t: f64) -> Result<f64, OracleError> {
    let delta = cloud.quad_weights.as_ref().ok_or(OracleError::MissingQuadrature)?;
    // Row sums in parallel, total in a fixed order so the result does not
    // depend on the thread count.
    let rows: Vec<f64> = (0..cloud.len())
        .into_par_iter()
        .map(|i| delta[i] * (0..cloud.len()).map(|j| (-t * cloud.distance(i, j)).exp() * delta[j]).sum::<f64>())
        .collect();
    Ok(rows.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_match_the_series_of_the_exact_magnitude() {
        // 2/(1 + e^{−x}) = 1 + x/2 − x³/24 + …
        let d = 0.8;
        let c = PointCloud::two_point(d).with_quad_weights(vec![1.0, 1.0]);
        let t = taylor_zero(&c, 3).unwrap();
        assert!((t.lambdas[0] - d / 2.0).abs() < 1e-15);
        assert!(t.lambdas[1].abs() < 1e-15);
        assert!((t.lambdas[2] + d.powi(3) / 24.0).abs() < 1e-15);
    }

    #[test]
    fn e_at_zero_is_volume_squared() {
        let c = PointCloud::euclidean("x", 1, 1, vec![0.0, 0.5, 1.0]).with_quad_weights(vec![0.25, 0.5, 0.25]);
        assert!((expectation_e(&c, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation_e(&c, 1.0).unwrap() < 1.0);
    }

    #[test]
    fn requires_quadrature() {
        assert!(matches!(taylor_zero(&PointCloud::two_point(1.0), 2), Err(OracleError::MissingQuadrature)));
    }
}
