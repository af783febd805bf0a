//! Numerical ground truth for magnitude functions.
//!
//! A finite sample `Ξ ⊂ X` has magnitude `Σ w` where `Σ_y e^{−R d(x,y)} w(y) = 1`.
//! For dense, quasi-uniform samples this approximates the magnitude function of
//! `X`, which is what the exact coefficient tables describe asymptotically.
//!
//! * [`cloud`] samples built-in shapes into point clouds.
//! * [`solve`] computes weightings and finite magnitudes.
//! * [`closed_form`] evaluates the known exact magnitude functions.
//! * [`fit`] extracts expansion coefficients from magnitudes at several scales.
//! * [`profile`] measures how the weight density localizes in the interior.
//! * [`taylor`] computes the power series of the magnitude at `R = 0`.
//! * [`report`] bundles runs into serializable reports.

pub mod closed_form;
pub mod cloud;
pub mod fit;
mod linalg;
pub mod profile;
pub mod report;
pub mod solve;
pub mod taylor;

pub use cloud::{sample_shape, NumericShape, PointCloud};
pub use solve::{finite_magnitude, weighting};

/// Errors of the numerical oracle.
#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("cannot sample {0}")]
    Unsupported(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("scale R must be positive and finite, got {0}")]
    BadScale(f64),
    #[error(
        "kernel matrix is not numerically positive definite at R = {r} (pivot {pivot:.3e} at row {index}, floor {floor:.3e}); R is below the positive-definiteness threshold of this sample"
    )]
    NotPositiveDefinite { r: f64, index: usize, pivot: f64, floor: f64 },
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("the cloud carries no quadrature weights")]
    MissingQuadrature,
    #[error("the cloud carries no boundary distances")]
    MissingBoundary,
    #[error("no sample points lie at distance ≥ {0} from the boundary")]
    EmptyInterior(f64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("design matrix has condition number {cond:.3e} > {limit:.0e}; use a wider, geometric R ladder")]
    IllConditioned { cond: f64, limit: f64 },
    #[error("fit of order {order} needs at least {needed} distinct R values, got {got}")]
    TooFewScales { order: u32, needed: usize, got: usize },
    #[error(
        "Z_1 is numerically singular (condition {cond:.3e} > {limit:.0e}); invertibility of Z_1 is an open problem in general"
    )]
    SingularZ1 { cond: f64, limit: f64 },
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

/// `n!·ω_n`, the normalizing constant of the leading term in dimension `n`.
pub fn unit_factor(n: u32) -> f64 {
    // ω_n = 2π/n · ω_{n−2}, ω_0 = 1, ω_1 = 2.
    let mut omega = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        omega *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    let fact: f64 = (1..=n).map(f64::from).product();
    fact * omega
}

#[cfg(test)]
mod tests {
    use super::unit_factor;
    use std::f64::consts::PI;

    #[test]
    fn unit_factors() {
        let expected = [1.0, 2.0, 2.0 * PI, 8.0 * PI, 12.0 * PI * PI];
        for (n, e) in expected.iter().enumerate() {
            assert!((unit_factor(n as u32) - e).abs() < 1e-12 * e, "n = {n}");
        }
    }
}
