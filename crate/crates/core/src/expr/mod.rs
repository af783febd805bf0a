//! Exact symbolic algebra for the expression class the symbol recursions
//! generate.
//!
//! The tower is `Rat` (ℚ) ⊂ `Cq` (ℚ(i)) ⊂ `Scalar` (ℚ(i)[√π^{±1}]) for
//! constants, `Series` for jet-dependent coefficients (truncated Taylor
//! series in base and cotangent variables), and `Expr` for boundary symbols
//! carrying fractional powers of the half-plane root factors.

pub mod decimal;
pub mod gauss;
pub mod rat;
pub mod scalar;
pub mod series;
pub mod symbol;

pub use decimal::to_decimal;
pub use gauss::Cq;
pub use rat::Rat;
pub use scalar::{n_fact_omega, omega, Scalar};
pub use series::{PrecisionError, Series, INF};
pub use symbol::{Expr, FactorKey, Homogeneity, PhaseSeries, Roots, SymbolError};
