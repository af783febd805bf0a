//! Coefficient tables from chart densities.
//!
//! With normalized densities (`â_k`, `B̂_k`, each divided by `n!ω_n`) the
//! `n!ω_n`-weighted integrals are `c_k = Σ_charts weight·density_k`, and the
//! magnitude-expansion coefficients are `m_k = c_k/(n!ω_n)`, so that
//! `𝓜(R) ~ Σ_k m_k R^{n−k}`.
//!
//! For Euclidean domains the interior density is `1` in degree zero and
//! vanishes above, so only boundary charts are processed.  For manifold kinds
//! every chart contributes interior densities and there is no boundary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{boundary_densities, BoundaryConventions, BoundaryError};
use crate::expr::{n_fact_omega, to_decimal, Cq, Rat, Scalar};
use crate::geometry::{jets_required_order, scale_spec, Chart, GeometryError, GeometrySpec, Kind};
use crate::interior::{interior_densities, InteriorError};

/// Significant digits of the decimal renderings stored in a table.
pub const DECIMAL_DIGITS: usize = 50;

/// Errors from coefficient assembly.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("chart `{chart}`: {source}")]
    Interior { chart: String, source: InteriorError },
    #[error("chart `{chart}`: {source}")]
    Boundary { chart: String, source: BoundaryError },
    #[error("`{0}` has corners; only the numeric oracle applies")]
    NotSmooth(String),
    #[error("coefficient c_{0} is not real")]
    NonReal(u32),
}

/// One row of a coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub k: u32,
    /// The power of `R` that `m_k` multiplies, `n − k`.
    pub power: i32,
    /// Interior contribution to `c_k`.
    pub interior: Scalar,
    /// Boundary contribution to `c_k`.
    pub boundary: Scalar,
    pub c: Scalar,
    pub m: Scalar,
    /// `m_k` rounded to [`DECIMAL_DIGITS`] significant digits.
    pub m_decimal: String,
}

impl CoefficientRow {
    /// `m_k` as the nearest double.
    pub fn m_f64(&self) -> f64 {
        self.m_decimal.parse().expect("decimal rendering parses")
    }
}

/// Exact coefficients `c_0, …, c_K` of one geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub label: String,
    pub kind: Kind,
    pub n: u32,
    pub k_max: u32,
    /// Jet order required by (and checked for) the computation.
    pub jet_order: u32,
    /// False when the spec carries rounded weights or jets.
    pub exact: bool,
    pub conventions: BoundaryConventions,
    pub rows: Vec<CoefficientRow>,
}

impl CoefficientTable {
    pub fn m(&self) -> Vec<Scalar> {
        self.rows.iter().map(|r| r.m.clone()).collect()
    }

    pub fn c(&self) -> Vec<Scalar> {
        self.rows.iter().map(|r| r.c.clone()).collect()
    }
}

fn rat(r: &Rat) -> Scalar {
    Scalar::from_rat(r.clone())
}

/// Per-chart densities, in chart order.
fn chart_densities(spec: &GeometrySpec, k_max: u32, conv: BoundaryConventions) -> Result<Vec<Vec<Rat>>, AssemblyError> {
    let n = spec.n as usize;
    spec.charts
        .par_iter()
        .map(|chart| match chart {
            Chart::Boundary(b) => {
                if k_max == 0 {
                    return Ok(Vec::new());
                }
                boundary_densities(&b.jets, n, k_max, conv)
                    .map_err(|source| AssemblyError::Boundary { chart: b.id.clone(), source })
            }
            other => interior_densities(other, n, k_max, conv.signs)
                .map_err(|source| AssemblyError::Interior { chart: other.id().to_string(), source }),
        })
        .collect()
}

/// The exact coefficient table of `spec` up to order `k_max`.
pub fn coefficients(spec: &GeometrySpec, k_max: u32, conv: BoundaryConventions) -> Result<CoefficientTable, AssemblyError> {
    if !spec.smooth {
        return Err(AssemblyError::NotSmooth(spec.label.clone()));
    }
    spec.validate()?;
    let jet_order = jets_required_order(k_max, spec.kind);
    spec.require_order(jet_order)?;
    let dens = chart_densities(spec, k_max, conv)?;

    let nfo = n_fact_omega(spec.n);
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let mut interior = Scalar::zero();
        let mut boundary = Scalar::zero();
        match spec.kind {
            Kind::EuclideanDomain => {
                if k == 0 {
                    interior = spec.interior_volume.clone();
                } else {
                    for (chart, d) in spec.charts.iter().zip(&dens) {
                        boundary = &boundary + &(chart.weight() * &rat(&d[k as usize - 1]));
                    }
                }
            }
            Kind::ClosedSubmanifold | Kind::DistanceJets => {
                for (chart, d) in spec.charts.iter().zip(&dens) {
                    interior = &interior + &(chart.weight() * &rat(&d[k as usize]));
                }
            }
        }
        let c = &interior + &boundary;
        if !c.is_real() {
            return Err(AssemblyError::NonReal(k));
        }
        let m = c.div_monomial(&nfo).expect("n!ω_n is a monomial");
        let m_decimal = to_decimal(&m, DECIMAL_DIGITS);
        rows.push(CoefficientRow { k, power: spec.n as i32 - k as i32, interior, boundary, c, m, m_decimal });
    }
    Ok(CoefficientTable {
        label: spec.label.clone(),
        kind: spec.kind,
        n: spec.n,
        k_max,
        jet_order,
        exact: spec.exact,
        conventions: conv,
        rows,
    })
}

/// One row of a scaling comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub k: u32,
    /// `r^{n−k}·c_k(X)`.
    pub expected: Scalar,
    /// `c_k(rX)`.
    pub actual: Scalar,
}

/// Result of comparing `c_k(rX)` with `r^{n−k}·c_k(X)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub label: String,
    pub r: Rat,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    /// The orders at which the scaling law fails.
    pub fn mismatches(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| r.expected != r.actual).map(|r| r.k).collect()
    }

    pub fn passed(&self) -> bool {
        self.mismatches().is_empty()
    }
}

/// Checks `c_k(rX) = r^{n−k}·c_k(X)` exactly for `k ≤ k_max`.
pub fn scaling_check(
    spec: &GeometrySpec,
    k_max: u32,
    r: &Rat,
    conv: BoundaryConventions,
) -> Result<ScalingReport, AssemblyError> {
    let base = coefficients(spec, k_max, conv)?;
    let scaled = coefficients(&scale_spec(spec, r), k_max, conv)?;
    let rows = base
        .rows
        .iter()
        .zip(&scaled.rows)
        .map(|(b, s)| ScalingRow { k: b.k, expected: b.c.scale(&Cq::real(r.pow(b.power))), actual: s.c.clone() })
        .collect();
    Ok(ScalingReport { label: spec.label.clone(), r: r.clone(), rows })
}

/// A truncated expansion evaluated at one `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionValue {
    pub r: f64,
    /// `(k, m_k R^{n−k})`.
    pub terms: Vec<(u32, f64)>,
    pub total: f64,
    /// The remainder is `O(R^{remainder_power})`.
    pub remainder_power: i32,
}

/// `Σ_k m_k R^{n−k}` for the orders in `table`.
pub fn evaluate_expansion(table: &CoefficientTable, r: f64) -> ExpansionValue {
    assert!(r > 0.0, "R must be positive");
    let terms: Vec<(u32, f64)> = table.rows.iter().map(|row| (row.k, row.m_f64() * r.powi(row.power))).collect();
    let total = terms.iter().map(|t| t.1).sum();
    ExpansionValue { r, terms, total, remainder_power: table.n as i32 - table.k_max as i32 - 1 }
}

/// `n·ω_n^{1/n}·vol_n(X)^{(n−1)/n} / vol_{n−1}(∂X)`, read off `c_0` and
/// `c_1 = μ·vol_{n−1}(∂X)`.
///
/// The isoperimetric inequality says this is at most 1, with equality only
/// for balls.  Needs a domain table with `K ≥ 1`.
pub fn isoperimetric_ratio(table: &CoefficientTable) -> f64 {
    assert!(table.kind == Kind::EuclideanDomain && table.k_max >= 1);
    let n = table.n as f64;
    let vol = table.rows[0].c.re_f64();
    let area = table.rows[1].c.re_f64() * 2.0 / (n + 1.0);
    let omega = crate::expr::omega(table.n).re_f64();
    n * omega.powf(1.0 / n) * vol.powf((n - 1.0) / n) / area
}

/// Coefficients `(a, b, c)` of `p(z) = a z² + b z + c = ∫_{∂X}(z − H)²`,
/// built from `c_1, c_2, c_3` of a domain table.
///
/// `unit_ball` is the table of the unit ball in the same dimension; its
/// boundary densities are the proportionality constants in
/// `c_j = κ_j ∫ H^{j−1}`.
pub fn cmc_polynomial(table: &CoefficientTable, unit_ball: &CoefficientTable) -> Result<[Scalar; 3], AssemblyError> {
    assert!(table.kind == Kind::EuclideanDomain && table.k_max >= 3 && unit_ball.k_max >= 3);
    let sphere = crate::expr::omega(table.n).scale(&Cq::real(Rat::int(table.n as i64)));
    let mut out = Vec::new();
    for (j, factor) in [(1usize, 1i64), (2, -2), (3, 1)] {
        // κ_j = c_j(unit ball) / |S^{n−1}|
        let kappa = unit_ball.rows[j].c.div_monomial(&sphere).and_then(|s| s.as_rat()).ok_or(AssemblyError::NonReal(j as u32))?;
        let coef = table.rows[j].c.scale(&Cq::real(&Rat::int(factor) / &kappa));
        out.push(coef);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{builtin_spec, Shape};

    fn table(shape: Shape, k: u32) -> CoefficientTable {
        let spec = builtin_spec(&shape, jets_required_order(k, Kind::EuclideanDomain).max(3)).unwrap();
        coefficients(&spec, k, BoundaryConventions::default()).unwrap()
    }

    fn rats(t: &CoefficientTable) -> Vec<Rat> {
        t.rows.iter().map(|r| r.m.as_rat().unwrap()).collect()
    }

    #[test]
    fn disk_expansion() {
        let t = table(Shape::Disk { r: Rat::ONE }, 2);
        assert_eq!(rats(&t), vec![Rat::new(1, 2), Rat::new(3, 2), Rat::new(9, 8)]);
        assert_eq!(t.rows[1].c, Scalar::monomial(Cq::real(Rat::int(3)), 2));
        let e = evaluate_expansion(&t, 10.0);
        assert_eq!(e.total, 50.0 + 15.0 + 1.125);
        assert_eq!(e.remainder_power, -1);
    }

    #[test]
    fn interval_is_exact() {
        let t = table(Shape::Interval { length: Rat::int(3) }, 2);
        assert_eq!(rats(&t), vec![Rat::new(3, 2), Rat::ONE, Rat::ZERO]);
    }

    #[test]
    fn ball3_low_orders() {
        let t = table(Shape::Ball3 { r: Rat::ONE }, 3);
        assert_eq!(rats(&t), vec![Rat::new(1, 6), Rat::ONE, Rat::int(2), Rat::ONE]);
        assert!((isoperimetric_ratio(&t) - 1.0).abs() < 1e-12);
        assert_eq!(evaluate_expansion(&t, 6.0).total, 85.0);
    }

    #[test]
    fn decimal_column() {
        let t = table(Shape::Disk { r: Rat::ONE }, 1);
        assert_eq!(t.rows[0].m_decimal, format!("0.5{}", "0".repeat(49)));
        assert_eq!(t.rows[0].m_f64(), 0.5);
    }
}
