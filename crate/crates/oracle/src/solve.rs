//! Weightings of finite samples.
//!
//! The kernel matrix `Z_ij = e^{−R d_ij}` is assembled in parallel (lower
//! triangle only) and factorized in place by a sequential Cholesky
//! decomposition, so repeated runs produce bit-identical weights.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::llt::factor::{cholesky_in_place, cholesky_in_place_scratch, LltError, LltRegularization};
use faer::linalg::cholesky::llt::solve::{solve_in_place_scratch, solve_in_place_with_conj};
use faer::{Conj, Mat, Par};
use rayon::prelude::*;

use crate::cloud::PointCloud;
use crate::OracleError;

/// Relative pivot floor: the factorization is refused when some
/// `L_kk² < PIVOT_FLOOR · trace(Z)`.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// The solution of `Σ_j e^{−R d_ij} w_j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting {
    pub r: f64,
    pub weights: Vec<f64>,
    pub magnitude: f64,
    /// `max_i |Σ_j Z_ij w_j − 1|`.
    pub residual: f64,
    /// Smallest `L_kk²` of the Cholesky factor.
    pub min_pivot: f64,
}

fn check_scale(r: f64) -> Result<(), OracleError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(OracleError::BadScale(r))
    }
}

/// Lower triangle of the kernel matrix; the strict upper part is zero.
fn kernel_lower(cloud: &PointCloud, r: f64) -> Mat<f64> {
    let m = cloud.len();
    let mut z = Mat::<f64>::zeros(m, m);
    z.par_col_iter_mut().enumerate().for_each(|(j, mut col)| {
        for i in j..m {
            col[i] = (-r * cloud.distance(i, j)).exp();
        }
    });
    z
}

/// Solves the weight equation at scale `r`.
pub fn weighting(cloud: &PointCloud, r: f64) -> Result<Weighting, OracleError> {
    check_scale(r)?;
    let m = cloud.len();
    if m == 0 {
        return Err(OracleError::TooFewPoints { needed: 1, got: 0 });
    }
    let mut z = kernel_lower(cloud, r);
    let floor = PIVOT_FLOOR * m as f64;
    let par = Par::Seq;
    let mut buf = MemBuffer::new(cholesky_in_place_scratch::<f64>(m, par, Default::default()));
    let factored = cholesky_in_place(z.as_mut(), LltRegularization::default(), par, MemStack::new(&mut buf), Default::default());
    if let Err(LltError::NonPositivePivot { index }) = factored {
        return Err(OracleError::NotPositiveDefinite { r, index, pivot: 0.0, floor });
    }
    let (mut min_pivot, mut min_index) = (f64::INFINITY, 0);
    for k in 0..m {
        let p = z[(k, k)] * z[(k, k)];
        if p < min_pivot {
            (min_pivot, min_index) = (p, k);
        }
    }
    if min_pivot < floor {
        return Err(OracleError::NotPositiveDefinite { r, index: min_index, pivot: min_pivot, floor });
    }
    let mut rhs = Mat::<f64>::from_fn(m, 1, |_, _| 1.0);
    let mut buf = MemBuffer::new(solve_in_place_scratch::<f64>(m, 1, par));
    solve_in_place_with_conj(z.as_ref(), Conj::No, rhs.as_mut(), par, MemStack::new(&mut buf));
    drop(z);
    let weights: Vec<f64> = (0..m).map(|i| rhs[(i, 0)]).collect();
    let residual = kernel_residual(cloud, r, &weights);
    let magnitude = weights.iter().sum();
    Ok(Weighting { r, weights, magnitude, residual, min_pivot })
}

/// `max_i |Σ_j e^{−R d_ij} w_j − 1|`, recomputing kernel entries.
fn kernel_residual(cloud: &PointCloud, r: f64, w: &[f64]) -> f64 {
    (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let s: f64 = w.iter().enumerate().map(|(j, wj)| (-r * cloud.distance(i, j)).exp() * wj).sum();
            (s - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// `mag(Ξ)` at scale `r`.
pub fn finite_magnitude(cloud: &PointCloud, r: f64) -> Result<f64, OracleError> {
    weighting(cloud, r).map(|w| w.magnitude)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_has_magnitude_one() {
        let c = PointCloud::euclidean("pt", 0, 1, vec![0.3]);
        for r in [0.1, 1.0, 50.0] {
            assert_eq!(finite_magnitude(&c, r).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_points() {
        for (d, r) in [(1.0, 1.0), (0.3, 7.0), (2.5, 0.2)] {
            let got = finite_magnitude(&PointCloud::two_point(d), r).unwrap();
            let expected = 2.0 / (1.0 + (-r * d).exp());
            assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
        }
    }

    #[test]
    fn coincident_points_are_refused() {
        let c = PointCloud::euclidean("dup", 0, 1, vec![0.0, 0.0, 1.0]);
        assert!(matches!(weighting(&c, 1.0), Err(OracleError::NotPositiveDefinite { .. })));
        assert!(matches!(weighting(&c, -1.0), Err(OracleError::BadScale(_))));
    }

    #[test]
    fn residual_is_small() {
        let xs: Vec<f64> = (0..200).map(|i| (i as f64 * 0.61803).fract()).collect();
        let w = weighting(&PointCloud::euclidean("x", 1, 1, xs), 30.0).unwrap();
        assert!(w.residual < 1e-9, "{}", w.residual);
    }
}
