//! Geometry specifications: jet charts, volumes and quadrature weights.
//!
//! A [`GeometrySpec`] lists charts of one of three kinds.  Euclidean domains
//! carry boundary charts (graph jets of the boundary in adapted coordinates),
//! closed submanifolds carry parametrization jets, and general metrics carry
//! the Taylor coefficients of the squared distance at the diagonal.  Every
//! chart has a quadrature weight; rotationally symmetric shapes use a single
//! chart whose weight is the total measure.

mod builtins;
mod io;
mod taylor;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{Cq, Rat, Scalar};

pub use builtins::{builtin_spec, Shape};
pub use io::{load_spec, parse_spec, spec_to_json, stored_jet_order, COMPLETE_ORDER};
pub use taylor::{curvature_to_graph_jets, dsq_series, graph_dsq_series, jet_polynomial};

/// A multi-index over chart coordinates.
pub type MultiIndex = Vec<u32>;

/// Derivatives `∂^α f(0)` keyed by multi-index.
pub type JetTable = BTreeMap<MultiIndex, Rat>;

/// Errors raised while building, loading or validating a geometry.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("invalid parameters for {shape}: {reason}")]
    BadParams { shape: String, reason: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("chart `{chart}`: {reason}")]
    BadChart { chart: String, reason: String },
    #[error("chart `{chart}` stores jets to order {have}, but order {need} is required")]
    InsufficientOrder { chart: String, have: u32, need: u32 },
    #[error("cannot read `{path}`: {reason}")]
    Io { path: String, reason: String },
}

/// What the charts of a spec describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    EuclideanDomain,
    ClosedSubmanifold,
    DistanceJets,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::EuclideanDomain => "euclidean_domain",
            Kind::ClosedSubmanifold => "closed_submanifold",
            Kind::DistanceJets => "distance_jets",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Boundary of a Euclidean domain near a point, as the graph `x_n = φ(x')`
/// with `φ(0) = 0`, `∇φ(0) = 0` and the domain on the side `x_n > φ(x')`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryChart {
    pub id: String,
    /// Surface measure represented by this chart.
    pub weight: Scalar,
    /// Derivatives of `φ` at the base point over `n − 1` variables.
    pub jets: JetTable,
    pub max_order: u32,
}

/// A closed submanifold near a point, parametrized as
/// `x ↦ (x, φ_{n+1}(x), …, φ_N(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmanifoldChart {
    pub id: String,
    /// Riemannian volume represented by this chart.
    pub weight: Scalar,
    /// Jets of `φ_{n+1}, …, φ_N` over `n` variables.
    pub functions: Vec<JetTable>,
    pub max_order: u32,
}

/// Taylor coefficients of `d(x, x − v)²` at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceJetChart {
    pub id: String,
    pub weight: Scalar,
    /// Coefficient of `x^α v^β`, keyed by `(α, β)`.
    pub dsq: BTreeMap<(MultiIndex, MultiIndex), Rat>,
    /// Largest `v`-degree stored, i.e. the highest Taylor form `C^{(j)}`.
    pub max_order: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    Boundary(BoundaryChart),
    Submanifold(SubmanifoldChart),
    DistanceJets(DistanceJetChart),
}

impl Chart {
    pub fn as_boundary(&self) -> Option<&BoundaryChart> {
        match self {
            Chart::Boundary(c) => Some(c),
            _ => None,
        }
    }

    pub fn id(&self) -> &str {
        match self {
            Chart::Boundary(c) => &c.id,
            Chart::Submanifold(c) => &c.id,
            Chart::DistanceJets(c) => &c.id,
        }
    }

    pub fn weight(&self) -> &Scalar {
        match self {
            Chart::Boundary(c) => &c.weight,
            Chart::Submanifold(c) => &c.weight,
            Chart::DistanceJets(c) => &c.weight,
        }
    }

    pub fn max_order(&self) -> u32 {
        match self {
            Chart::Boundary(c) => c.max_order,
            Chart::Submanifold(c) => c.max_order,
            Chart::DistanceJets(c) => c.max_order,
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Chart::Boundary(_) => Kind::EuclideanDomain,
            Chart::Submanifold(_) => Kind::ClosedSubmanifold,
            Chart::DistanceJets(_) => Kind::DistanceJets,
        }
    }
}

/// A complete geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec {
    pub label: String,
    pub kind: Kind,
    /// Intrinsic dimension.
    pub n: u32,
    /// Ambient dimension.
    pub big_n: u32,
    /// Volume of the domain or manifold.
    pub interior_volume: Scalar,
    pub charts: Vec<Chart>,
    /// The built-in shape this spec was generated from, if any.
    pub shape: Option<Shape>,
    /// False when jets or weights are rounded (non-symmetric quadrature).
    pub exact: bool,
    /// False when the geometry has corners and only the numeric oracle applies.
    pub smooth: bool,
}

impl GeometrySpec {
    /// Structural validation: chart kinds, dimensions and adapted coordinates.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.n == 0 || self.n > 4 {
            return Err(GeometryError::Schema(format!("dimension n = {} outside 1..=4", self.n)));
        }
        if self.big_n < self.n {
            return Err(GeometryError::Schema("ambient dimension N < n".into()));
        }
        let bad = |c: &Chart, reason: String| GeometryError::BadChart { chart: c.id().to_string(), reason };
        for c in &self.charts {
            if c.kind() != self.kind {
                return Err(bad(c, format!("chart kind does not match spec kind {}", self.kind)));
            }
            let (re, im) = c.weight().to_f64();
            if !c.weight().is_real() || im != 0.0 || re <= 0.0 {
                return Err(bad(c, "weight must be a positive real scalar".into()));
            }
            match c {
                Chart::Boundary(b) => check_graph_jets(&b.jets, self.n as usize - 1).map_err(|r| bad(c, r))?,
                Chart::Submanifold(s) => {
                    if s.functions.len() != (self.big_n - self.n) as usize {
                        return Err(bad(c, format!("expected {} functions", self.big_n - self.n)));
                    }
                    for f in &s.functions {
                        check_graph_jets_allow_gradient(f, self.n as usize).map_err(|r| bad(c, r))?;
                    }
                }
                Chart::DistanceJets(d) => check_dsq(&d.dsq, self.n as usize).map_err(|r| bad(c, r))?,
            }
        }
        Ok(())
    }

    /// Fails unless every chart stores jets to at least `order`.
    pub fn require_order(&self, order: u32) -> Result<(), GeometryError> {
        for c in &self.charts {
            if c.max_order() < order {
                return Err(GeometryError::InsufficientOrder {
                    chart: c.id().to_string(),
                    have: c.max_order(),
                    need: order,
                });
            }
        }
        Ok(())
    }

    /// Drops jets above `order` and lowers every chart's declared order.
    pub fn truncate_jets(&self, order: u32) -> GeometrySpec {
        let keep = |t: &JetTable| -> JetTable {
            t.iter().filter(|(a, _)| a.iter().sum::<u32>() <= order).map(|(a, v)| (a.clone(), v.clone())).collect()
        };
        let mut out = self.clone();
        for c in &mut out.charts {
            match c {
                Chart::Boundary(b) => {
                    b.jets = keep(&b.jets);
                    b.max_order = b.max_order.min(order);
                }
                Chart::Submanifold(s) => {
                    s.functions = s.functions.iter().map(keep).collect();
                    s.max_order = s.max_order.min(order);
                }
                Chart::DistanceJets(d) => {
                    d.dsq.retain(|(a, b), _| b.iter().sum::<u32>() <= order && a.iter().sum::<u32>() + 2 <= order);
                    d.max_order = d.max_order.min(order);
                }
            }
        }
        out
    }

    /// Keeps only the charts at the given positions (same interior data).
    pub fn with_charts(&self, keep: &[usize]) -> GeometrySpec {
        let mut out = self.clone();
        out.charts = keep.iter().map(|i| self.charts[*i].clone()).collect();
        out
    }
}

fn check_graph_jets(jets: &JetTable, nvars: usize) -> Result<(), String> {
    for (a, v) in jets {
        if a.len() != nvars {
            return Err(format!("multi-index {a:?} should have {nvars} entries"));
        }
        let ord: u32 = a.iter().sum();
        if ord <= 1 && !v.is_zero() {
            return Err("adapted coordinates need φ(0) = 0 and ∇φ(0) = 0".into());
        }
    }
    Ok(())
}

fn check_graph_jets_allow_gradient(jets: &JetTable, nvars: usize) -> Result<(), String> {
    for (a, v) in jets {
        if a.len() != nvars {
            return Err(format!("multi-index {a:?} should have {nvars} entries"));
        }
        if a.iter().sum::<u32>() == 0 && !v.is_zero() {
            return Err("parametrization functions must vanish at the base point".into());
        }
    }
    Ok(())
}

fn check_dsq(dsq: &BTreeMap<(MultiIndex, MultiIndex), Rat>, n: usize) -> Result<(), String> {
    let mut h = vec![vec![Rat::ZERO; n]; n];
    for ((a, b), v) in dsq {
        if a.len() != n || b.len() != n {
            return Err(format!("multi-indices should have {n} entries"));
        }
        let vb: u32 = b.iter().sum();
        if vb < 2 && !v.is_zero() {
            return Err("the squared distance must vanish to second order on the diagonal".into());
        }
        if vb == 2 && a.iter().all(|x| *x == 0) {
            let idx: Vec<usize> = b.iter().enumerate().flat_map(|(i, e)| std::iter::repeat(i).take(*e as usize)).collect();
            if idx[0] == idx[1] {
                h[idx[0]][idx[0]] = v.clone();
            } else {
                let half = v / &Rat::int(2);
                h[idx[0]][idx[1]] = half.clone();
                h[idx[1]][idx[0]] = half;
            }
        }
    }
    if !positive_definite(&h) {
        return Err("the quadratic part of the squared distance is not positive definite".into());
    }
    Ok(())
}

/// Sylvester's criterion with exact arithmetic.
pub(crate) fn positive_definite(h: &[Vec<Rat>]) -> bool {
    let n = h.len();
    let mut m: Vec<Vec<Rat>> = h.to_vec();
    for k in 0..n {
        if m[k][k].signum() <= 0 {
            return false;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    true
}

/// The highest jet order touched when computing `c_K`.
///
/// Walking the recursions: the symbol of order `j` applies Taylor forms
/// `C^{(γ_l)}` with parts up to `j + 2`, and is differentiated at most
/// `K − j` further times in the base point before evaluation, so the maximum
/// over `j ≤ K` is `K + 2`.  For `K = 0` only the metric (order 2) enters.
pub fn jets_required_order(k: u32, _kind: Kind) -> u32 {
    k + 2
}

/// The spec of `rX`.
pub fn scale_spec(spec: &GeometrySpec, r: &Rat) -> GeometrySpec {
    assert!(r.signum() > 0, "scale factor must be positive");
    let n = spec.n as i32;
    let rs = |e: i32| Cq::real(r.pow(e));
    let scale_jets = |t: &JetTable| -> JetTable {
        t.iter().map(|(a, v)| (a.clone(), v * &r.pow(1 - a.iter().sum::<u32>() as i32))).collect()
    };
    let mut out = spec.clone();
    out.interior_volume = spec.interior_volume.scale(&rs(n));
    out.label = format!("{}*{}", spec.label, r);
    out.shape = spec.shape.as_ref().map(|s| s.scaled(r));
    for c in &mut out.charts {
        match c {
            Chart::Boundary(b) => {
                b.weight = b.weight.scale(&rs(n - 1));
                b.jets = scale_jets(&b.jets);
            }
            Chart::Submanifold(s) => {
                s.weight = s.weight.scale(&rs(n));
                s.functions = s.functions.iter().map(scale_jets).collect();
            }
            Chart::DistanceJets(d) => {
                d.weight = d.weight.scale(&rs(n));
                d.dsq = d
                    .dsq
                    .iter()
                    .map(|((a, b), v)| {
                        let deg = (a.iter().sum::<u32>() + b.iter().sum::<u32>()) as i32;
                        ((a.clone(), b.clone()), v * &r.pow(2 - deg))
                    })
                    .collect();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sylvester() {
        let i = |v: i64| Rat::int(v);
        assert!(positive_definite(&[vec![i(2), i(1)], vec![i(1), i(2)]]));
        assert!(!positive_definite(&[vec![i(1), i(2)], vec![i(2), i(1)]]));
    }

    #[test]
    fn required_order() {
        assert_eq!(jets_required_order(0, Kind::EuclideanDomain), 2);
        assert_eq!(jets_required_order(1, Kind::EuclideanDomain), 3);
        assert!(jets_required_order(4, Kind::DistanceJets) <= 12);
    }
}
