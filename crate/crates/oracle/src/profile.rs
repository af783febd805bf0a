//! Interior localization of the weight density.
//!
//! Away from the boundary the weight density of a domain approaches
//! `R^n/(n!ω_n)` as `R` grows, while excess weight accumulates near the
//! boundary.  The empirical density is `u_i = w_i/Δ_i` for quadrature weights
//! `Δ_i`.

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::solve::weighting;
use crate::{unit_factor, OracleError};

/// Default interior margin as a fraction of the diameter.
pub const DEFAULT_DELTA_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    #[serde(rename = "R")]
    pub r: f64,
    /// Points at distance `≥ delta` from the boundary count as interior.
    pub delta: f64,
    pub interior_points: usize,
    /// `max |u·n!ω_n/R^n − 1|` over interior points.
    pub max_deviation: f64,
    /// Mean of the same quantity.
    pub mean_deviation: f64,
    /// Mean density on the outermost layer of points over the mean interior
    /// density; above 1 when weight concentrates at the boundary.
    pub boundary_ratio: f64,
    pub magnitude: f64,
    pub residual: f64,
}

/// Statistics of the empirical weight density at scale `r`.
///
/// `delta` defaults to `0.2·diam`.
pub fn weight_profile(cloud: &PointCloud, r: f64, delta: Option<f64>) -> Result<WeightProfile, OracleError> {
    let quad = cloud.quad_weights.as_ref().ok_or(OracleError::MissingQuadrature)?;
    let bd = cloud.boundary_distance.as_ref().ok_or(OracleError::MissingBoundary)?;
    let delta = match delta {
        Some(d) => d,
        None => DEFAULT_DELTA_FRACTION * cloud.diameter(),
    };
    if !bd.iter().any(|d| *d >= delta) {
        return Err(OracleError::EmptyInterior(delta));
    }
    let w = weighting(cloud, r)?;
    let scale = unit_factor(cloud.n) / r.powi(cloud.n as i32);
    let density: Vec<f64> = w.weights.iter().zip(quad).map(|(wi, q)| wi / q).collect();

    let interior: Vec<f64> = density.iter().zip(bd).filter(|(_, d)| **d >= delta).map(|(u, _)| *u).collect();
    let deviations: Vec<f64> = interior.iter().map(|u| (u * scale - 1.0).abs()).collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    let mean_deviation = deviations.iter().sum::<f64>() / deviations.len() as f64;

    let spacing = (cloud.volume().unwrap_or(0.0) / cloud.len() as f64).powf(1.0 / cloud.n.max(1) as f64);
    let layer: Vec<f64> = density.iter().zip(bd).filter(|(_, d)| **d <= spacing).map(|(u, _)| *u).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let boundary_ratio = if layer.is_empty() { f64::NAN } else { mean(&layer) / mean(&interior) };

    Ok(WeightProfile {
        r,
        delta,
        interior_points: interior.len(),
        max_deviation,
        mean_deviation,
        boundary_ratio,
        magnitude: w.magnitude,
        residual: w.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::{sample_shape, NumericShape};
    use magnitude_core::expr::Rat;
    use magnitude_core::geometry::Shape;

    #[test]
    fn interval_interior_density_is_half_r() {
        let c = sample_shape(&NumericShape::Builtin(Shape::Interval { length: Rat::ONE }), 1001, 0).unwrap();
        let p = weight_profile(&c, 30.0, Some(0.2)).unwrap();
        assert!(p.max_deviation < 0.05, "{p:?}");
        assert!(p.boundary_ratio > 1.0, "{p:?}");
    }

    #[test]
    fn clouds_without_boundary_are_refused() {
        let c = sample_shape(&NumericShape::Builtin(Shape::SphereSubmanifold { r: Rat::ONE }), 50, 0).unwrap();
        assert!(matches!(weight_profile(&c, 5.0, None), Err(OracleError::MissingBoundary)));
    }
}
