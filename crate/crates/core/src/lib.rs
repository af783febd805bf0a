//! Exact computation of the asymptotic coefficients of magnitude functions.
//!
//! For a compact domain `X ⊂ ℝⁿ` (or a closed manifold with a distance
//! whose square is smooth near the diagonal) the magnitude function admits an
//! expansion `𝓜_X(R) ~ (1/(n!ω_n)) Σ_k c_k(X) R^{n−k}` as `R → ∞`.  Each
//! `c_k` is an integral of a local density built from the Taylor jets of the
//! distance at the diagonal and, for domains, from the boundary curvature.
//!
//! The crate computes those densities exactly:
//!
//! * [`expr`] holds the exact arithmetic and symbolic layer.
//! * [`geometry`] turns shapes, JSON specs and jets into distance charts.
//! * [`interior`] builds the full symbol of the magnitude operator and the
//!   interior parametrix densities.
//! * [`boundary`] factorizes boundary symbols into half-plane factors and
//!   evaluates boundary densities.
//! * [`assembly`] integrates densities into coefficient tables.
//! * [`render`] serializes tables deterministically.
//! * [`selftest`] runs exact consistency suites on random charts.

pub mod assembly;
pub mod boundary;
pub mod expr;
pub mod geometry;
pub mod interior;
pub mod render;
pub mod selftest;

pub use assembly::{coefficients, CoefficientTable};
pub use render::Format;
