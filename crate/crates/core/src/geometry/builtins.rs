//! Built-in shapes.

use std::collections::BTreeMap;

use super::taylor::jet_polynomial;
use super::univariate::{self, rationalize};
use super::{
    BoundaryChart, Chart, DistanceJetChart, GeometryError, GeometrySpec, JetTable, Kind, MultiIndex,
    SubmanifoldChart,
};
use crate::expr::{Cq, Rat, Scalar, Series};

/// Number of trapezoid nodes per period for non-symmetric planar boundaries.
const ELLIPSE_NODES: usize = 64;
/// Denominator bound when rounding floating jets to rationals.
const ROUNDING_DENOMINATOR: i64 = 1_000_000_000;

/// A built-in geometry with exact parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Interval { length: Rat },
    Disk { r: Rat },
    Ball3 { r: Rat },
    Shell3 { r_in: Rat, r_out: Rat },
    Ellipse { a: Rat, b: Rat },
    CircleSubmanifold { r: Rat },
    SphereSubmanifold { r: Rat },
    SphereGeodesic { r: Rat },
    SquareNumeric { side: Rat },
}

impl Shape {
    pub const NAMES: [&'static str; 9] = [
        "interval",
        "disk",
        "ball3",
        "shell3",
        "ellipse",
        "circle-submanifold",
        "sphere-submanifold",
        "sphere-geodesic",
        "square-numeric",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Interval { .. } => "interval",
            Shape::Disk { .. } => "disk",
            Shape::Ball3 { .. } => "ball3",
            Shape::Shell3 { .. } => "shell3",
            Shape::Ellipse { .. } => "ellipse",
            Shape::CircleSubmanifold { .. } => "circle-submanifold",
            Shape::SphereSubmanifold { .. } => "sphere-submanifold",
            Shape::SphereGeodesic { .. } => "sphere-geodesic",
            Shape::SquareNumeric { .. } => "square-numeric",
        }
    }

    /// Named parameters in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, Rat)> {
        match self {
            Shape::Interval { length } => vec![("length", length.clone())],
            Shape::Disk { r }
            | Shape::Ball3 { r }
            | Shape::CircleSubmanifold { r }
            | Shape::SphereSubmanifold { r }
            | Shape::SphereGeodesic { r } => vec![("r", r.clone())],
            Shape::Shell3 { r_in, r_out } => vec![("r_in", r_in.clone()), ("r_out", r_out.clone())],
            Shape::Ellipse { a, b } => vec![("a", a.clone()), ("b", b.clone())],
            Shape::SquareNumeric { side } => vec![("side", side.clone())],
        }
    }

    /// Builds a shape from its name and parameters; missing parameters
    /// default to 1 (shell: `r_in = 1/2`, `r_out = 3/2`).
    pub fn from_name(name: &str, params: &BTreeMap<String, Rat>) -> Result<Shape, GeometryError> {
        let get = |k: &str, default: Rat| params.get(k).cloned().unwrap_or(default);
        let one = || Rat::ONE;
        let shape = match name {
            "interval" => Shape::Interval { length: get("length", one()) },
            "disk" => Shape::Disk { r: get("r", one()) },
            "ball3" => Shape::Ball3 { r: get("r", one()) },
            "shell3" => Shape::Shell3 { r_in: get("r_in", Rat::new(1, 2)), r_out: get("r_out", Rat::new(3, 2)) },
            "ellipse" => Shape::Ellipse { a: get("a", Rat::int(2)), b: get("b", one()) },
            "circle-submanifold" => Shape::CircleSubmanifold { r: get("r", one()) },
            "sphere-submanifold" => Shape::SphereSubmanifold { r: get("r", one()) },
            "sphere-geodesic" => Shape::SphereGeodesic { r: get("r", one()) },
            "square-numeric" => Shape::SquareNumeric { side: get("side", one()) },
            other => return Err(GeometryError::UnknownShape(other.to_string())),
        };
        for k in params.keys() {
            if !shape.params().iter().any(|(p, _)| p == k) {
                return Err(GeometryError::BadParams { shape: name.into(), reason: format!("unknown parameter `{k}`") });
            }
        }
        shape.check()?;
        Ok(shape)
    }

    fn check(&self) -> Result<(), GeometryError> {
        let bad = |reason: &str| GeometryError::BadParams { shape: self.name().into(), reason: reason.into() };
        for (k, v) in self.params() {
            if v.signum() <= 0 {
                return Err(bad(&format!("{k} must be positive")));
            }
        }
        if let Shape::Shell3 { r_in, r_out } = self {
            if r_in >= r_out {
                return Err(bad("r_in must be smaller than r_out"));
            }
        }
        Ok(())
    }

    /// The same shape scaled by `r`.
    pub fn scaled(&self, r: &Rat) -> Shape {
        let s = |v: &Rat| v * r;
        match self {
            Shape::Interval { length } => Shape::Interval { length: s(length) },
            Shape::Disk { r: x } => Shape::Disk { r: s(x) },
            Shape::Ball3 { r: x } => Shape::Ball3 { r: s(x) },
            Shape::Shell3 { r_in, r_out } => Shape::Shell3 { r_in: s(r_in), r_out: s(r_out) },
            Shape::Ellipse { a, b } => Shape::Ellipse { a: s(a), b: s(b) },
            Shape::CircleSubmanifold { r: x } => Shape::CircleSubmanifold { r: s(x) },
            Shape::SphereSubmanifold { r: x } => Shape::SphereSubmanifold { r: s(x) },
            Shape::SphereGeodesic { r: x } => Shape::SphereGeodesic { r: s(x) },
            Shape::SquareNumeric { side } => Shape::SquareNumeric { side: s(side) },
        }
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> u32 {
        match self {
            Shape::Interval { .. } | Shape::CircleSubmanifold { .. } => 1,
            Shape::Disk { .. }
            | Shape::Ellipse { .. }
            | Shape::SphereSubmanifold { .. }
            | Shape::SphereGeodesic { .. }
            | Shape::SquareNumeric { .. } => 2,
            Shape::Ball3 { .. } | Shape::Shell3 { .. } => 3,
        }
    }

    pub fn label(&self) -> String {
        let ps: Vec<String> = self.params().iter().map(|(_, v)| v.to_string()).collect();
        format!("{}({})", self.name(), ps.join(","))
    }
}

fn pi_times(r: Rat) -> Scalar {
    Scalar::monomial(Cq::real(r), 2)
}

/// Jets of `f(x) = Σ_m c_m |x|^{2m}` over `nvars` variables up to `order`.
fn radial_jets(nvars: usize, c: &[Rat], order: u32) -> JetTable {
    let mut jets = JetTable::new();
    let mut alpha = vec![0u32; nvars];
    fn rec(i: usize, left: u32, alpha: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if i + 1 == alpha.len() {
            alpha[i] = left;
            out.push(alpha.clone());
            return;
        }
        for a in 0..=left {
            alpha[i] = a;
            rec(i + 1, left - a, alpha, out);
        }
    }
    for m in 1..c.len() {
        let deg = 2 * m as u32;
        if deg > order || c[m].is_zero() {
            continue;
        }
        let mut all = Vec::new();
        rec(0, deg, &mut alpha, &mut all);
        for a in all {
            if a.iter().any(|e| e % 2 == 1) {
                continue;
            }
            // Coefficient of x^a in (Σ x_i²)^m is m!/∏(a_i/2)!; the jet is that times a!.
            let mut v = &c[m] * &Rat::factorial(m as u32);
            for e in &a {
                v = &(&v * &Rat::factorial(*e)) / &Rat::factorial(e / 2);
            }
            jets.insert(a, v);
        }
    }
    jets
}

/// Coefficients `c_m` of `r − √(r² − u)` in powers of `u`.
fn sphere_graph_coeffs(r: &Rat, order: u32) -> Vec<Rat> {
    let mmax = (order / 2) as usize;
    let b = univariate::binomial_series::<Rat>(1, 2, mmax);
    let mut c = vec![Rat::ZERO; mmax + 1];
    for m in 1..=mmax {
        // −r·binom(1/2, m)·(−u/r²)^m
        let sign = if m % 2 == 0 { Rat::int(-1) } else { Rat::ONE };
        c[m] = &(&(&sign * r) * &b[m]) / &r.pow(2 * m as i32);
    }
    c
}

fn negate(t: &JetTable) -> JetTable {
    t.iter().map(|(a, v)| (a.clone(), -v)).collect()
}

fn boundary(id: &str, weight: Scalar, jets: JetTable, order: u32) -> Chart {
    Chart::Boundary(BoundaryChart { id: id.into(), weight, jets, max_order: order })
}

fn domain_spec(shape: &Shape, n: u32, volume: Scalar, charts: Vec<Chart>) -> GeometrySpec {
    GeometrySpec {
        label: shape.label(),
        kind: Kind::EuclideanDomain,
        n,
        big_n: n,
        interior_volume: volume,
        charts,
        shape: Some(shape.clone()),
        exact: true,
        smooth: true,
    }
}

/// Exact jets of the squared geodesic distance of the round sphere of
/// radius `r` in the chart `x ↦ (x, √(r² − |x|²))`.
fn sphere_geodesic_chart(r: &Rat, order: u32) -> DistanceJetChart {
    let n = 2;
    let prec = [order as i32 - 2, order as i32];
    let x: Vec<Series> = (0..n).map(|v| Series::var(n, n, v)).collect();
    let v: Vec<Series> = (n..2 * n).map(|i| Series::var(n, n, i)).collect();
    let r2 = r * r;
    let height = |p: &[Series]| -> Series {
        let mut s = Series::one(n, n);
        for c in p {
            s = s.sub(&c.mul(c).scale_rat(&r2.recip()));
        }
        s.trunc(prec).pow_rat(&Rat::new(1, 2))
    };
    let y: Vec<Series> = x.iter().zip(&v).map(|(a, b)| a.sub(b)).collect();
    // cos θ = (x·y + h(x)h(y))/r² with h = √(r² − |·|²) = r·height
    let mut dot = height(&x).mul(&height(&y));
    for (a, b) in x.iter().zip(&y) {
        dot = dot.add(&a.mul(b).scale_rat(&r2.recip()));
    }
    let u = Series::one(n, n).sub(&dot).trunc(prec);
    let theta_sq: Vec<Cq> = univariate::theta_sq_of_one_minus_cos(order as usize / 2 + 1)
        .into_iter()
        .map(Cq::real)
        .collect();
    let d2 = u.compose(&theta_sq).scale_rat(&r2);
    let mut dsq = BTreeMap::new();
    for (e, c) in d2.terms() {
        assert!(c.is_real());
        dsq.insert((e[..n].to_vec(), e[n..].to_vec()), c.re.clone());
    }
    DistanceJetChart { id: "pole".into(), weight: pi_times(&Rat::int(4) * &r2), dsq, max_order: order }
}

/// Graph jets of the ellipse boundary at parameter `t` in adapted
/// coordinates, rounded to rationals, and the arclength speed there.
fn ellipse_jets(a: f64, b: f64, t: f64, order: usize) -> (JetTable, f64) {
    let cos = univariate::trig_series::<f64>(true, order);
    let sin = univariate::trig_series::<f64>(false, order);
    let (c0, s0) = (t.cos(), t.sin());
    // p(t+τ) − p(t) as series in τ
    let mut dx = vec![0.0; order + 1];
    let mut dy = vec![0.0; order + 1];
    for k in 0..=order {
        let ck = c0 * cos[k] - s0 * sin[k];
        let sk = s0 * cos[k] + c0 * sin[k];
        dx[k] = a * ck;
        dy[k] = b * sk;
    }
    dx[0] = 0.0;
    dy[0] = 0.0;
    let speed = (a * a * s0 * s0 + b * b * c0 * c0).sqrt();
    let tx = -a * s0 / speed;
    let ty = b * c0 / speed;
    let (nx, ny) = (-ty, tx);
    let u: Vec<f64> = dx.iter().zip(&dy).map(|(p, q)| p * tx + q * ty).collect();
    let w: Vec<f64> = dx.iter().zip(&dy).map(|(p, q)| p * nx + q * ny).collect();
    let tau = univariate::revert(&u, order);
    let phi = univariate::compose(&w, &tau, order);
    let mut jets = JetTable::new();
    let mut fact = 1.0;
    for (m, c) in phi.iter().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        if m >= 2 {
            let v = rationalize(c * fact, ROUNDING_DENOMINATOR);
            if !v.is_zero() {
                jets.insert(vec![m as u32], v);
            }
        }
    }
    (jets, speed)
}

/// The spec of a built-in shape with jets stored to `order`.
pub fn builtin_spec(shape: &Shape, order: u32) -> Result<GeometrySpec, GeometryError> {
    shape.check()?;
    if order < 3 {
        return Err(GeometryError::BadParams { shape: shape.name().into(), reason: "order must be at least 3".into() });
    }
    let spec = match shape {
        Shape::Interval { length } => {
            let w = Scalar::one();
            domain_spec(
                shape,
                1,
                Scalar::from_rat(length.clone()),
                vec![boundary("left", w.clone(), JetTable::new(), order), boundary("right", w, JetTable::new(), order)],
            )
        }
        Shape::Disk { r } => {
            let jets = radial_jets(1, &sphere_graph_coeffs(r, order), order);
            domain_spec(shape, 2, pi_times(r * r), vec![boundary("circle", pi_times(r * &Rat::int(2)), jets, order)])
        }
        Shape::Ball3 { r } => {
            let jets = radial_jets(2, &sphere_graph_coeffs(r, order), order);
            let vol = pi_times(&(&(r * r) * r) * &Rat::new(4, 3));
            domain_spec(shape, 3, vol, vec![boundary("sphere", pi_times(&(r * r) * &Rat::int(4)), jets, order)])
        }
        Shape::Shell3 { r_in, r_out } => {
            let outer = radial_jets(2, &sphere_graph_coeffs(r_out, order), order);
            let inner = negate(&radial_jets(2, &sphere_graph_coeffs(r_in, order), order));
            let cube = |x: &Rat| &(x * x) * x;
            let vol = pi_times(&(&cube(r_out) - &cube(r_in)) * &Rat::new(4, 3));
            domain_spec(
                shape,
                3,
                vol,
                vec![
                    boundary("outer", pi_times(&(r_out * r_out) * &Rat::int(4)), outer, order),
                    boundary("inner", pi_times(&(r_in * r_in) * &Rat::int(4)), inner, order),
                ],
            )
        }
        Shape::Ellipse { a, b } => {
            let (af, bf) = (a.to_f64(), b.to_f64());
            let h = 2.0 * std::f64::consts::PI / ELLIPSE_NODES as f64;
            let mut charts = Vec::new();
            // The four symmetric copies of each first-quadrant node share jets.
            for i in 0..ELLIPSE_NODES / 4 {
                let t = (i as f64 + 0.5) * h;
                let (jets, speed) = ellipse_jets(af, bf, t, order as usize);
                let w = Scalar::from_rat(rationalize(4.0 * speed * h, ROUNDING_DENOMINATOR));
                charts.push(boundary(&format!("node{i}"), w, jets, order));
            }
            let mut spec = domain_spec(shape, 2, pi_times(a * b), charts);
            spec.exact = false;
            spec
        }
        Shape::CircleSubmanifold { r } => {
            let f = radial_jets(1, &sphere_graph_coeffs(r, order), order);
            submanifold_spec(shape, 1, 2, pi_times(r * &Rat::int(2)), f, order)
        }
        Shape::SphereSubmanifold { r } => {
            let f = radial_jets(2, &sphere_graph_coeffs(r, order), order);
            submanifold_spec(shape, 2, 3, pi_times(&(r * r) * &Rat::int(4)), f, order)
        }
        Shape::SphereGeodesic { r } => {
            let chart = sphere_geodesic_chart(r, order);
            GeometrySpec {
                label: shape.label(),
                kind: Kind::DistanceJets,
                n: 2,
                big_n: 3,
                interior_volume: pi_times(&(r * r) * &Rat::int(4)),
                charts: vec![Chart::DistanceJets(chart)],
                shape: Some(shape.clone()),
                exact: true,
                smooth: true,
            }
        }
        Shape::SquareNumeric { side } => {
            let mut spec = domain_spec(shape, 2, Scalar::from_rat(side * side), Vec::new());
            spec.smooth = false;
            spec
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn submanifold_spec(shape: &Shape, n: u32, big_n: u32, measure: Scalar, f: JetTable, order: u32) -> GeometrySpec {
    let chart = SubmanifoldChart { id: "pole".into(), weight: measure.clone(), functions: vec![f], max_order: order };
    GeometrySpec {
        label: shape.label(),
        kind: Kind::ClosedSubmanifold,
        n,
        big_n,
        interior_volume: measure,
        charts: vec![Chart::Submanifold(chart)],
        shape: Some(shape.clone()),
        exact: true,
        smooth: true,
    }
}

/// Reconstructs `φ` from stored jets as a polynomial series in one variable.
#[allow(dead_code)]
fn graph_polynomial(jets: &JetTable, nvars: usize) -> Series {
    let y: Vec<Series> = (0..nvars).map(|v| Series::var(nvars, 0, v)).collect();
    jet_polynomial(jets, &y, nvars, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disk_jets() {
        let spec = builtin_spec(&Shape::Disk { r: Rat::ONE }, 6).unwrap();
        let Chart::Boundary(b) = &spec.charts[0] else { panic!() };
        let j = |k: u32| b.jets.get(&vec![k]).cloned().unwrap_or(Rat::ZERO);
        assert_eq!([j(2), j(3), j(4), j(5), j(6)], [Rat::ONE, Rat::ZERO, Rat::int(3), Rat::ZERO, Rat::int(45)]);
        assert_eq!(spec.interior_volume.to_string(), "pi");
        assert_eq!(b.weight.to_string(), "2*pi");
    }

    #[test]
    fn disk_jets_reproduce_square_root() {
        // (1 − φ)² = 1 − t² for φ = 1 − √(1 − t²), checked to the stored order.
        let order = 10;
        let spec = builtin_spec(&Shape::Disk { r: Rat::ONE }, order).unwrap();
        let Chart::Boundary(b) = &spec.charts[0] else { panic!() };
        let phi = graph_polynomial(&b.jets, 1).trunc([order as i32, crate::expr::INF]);
        let g = Series::one(1, 0).sub(&phi);
        let t = Series::var(1, 0, 0);
        let lhs = g.mul(&g).add(&t.mul(&t));
        assert!(lhs.sub(&Series::one(1, 0)).is_zero());
    }

    #[test]
    fn shell_inner_jets_flip_sign() {
        let spec = builtin_spec(&Shape::Shell3 { r_in: Rat::new(1, 2), r_out: Rat::new(3, 2) }, 4).unwrap();
        let (Chart::Boundary(o), Chart::Boundary(i)) = (&spec.charts[0], &spec.charts[1]) else { panic!() };
        assert_eq!(o.jets[&vec![2, 0]], Rat::new(2, 3));
        assert_eq!(i.jets[&vec![2, 0]], Rat::int(-2));
    }

    #[test]
    fn interval_has_two_flat_charts() {
        let spec = builtin_spec(&Shape::Interval { length: Rat::int(3) }, 3).unwrap();
        assert_eq!(spec.charts.len(), 2);
        assert!(spec.charts.iter().all(|c| matches!(c, Chart::Boundary(b) if b.jets.is_empty())));
        assert_eq!(spec.interior_volume.to_string(), "3");
    }

    #[test]
    fn degenerate_params_rejected() {
        let mut p = BTreeMap::new();
        p.insert("r".to_string(), Rat::ZERO);
        assert!(Shape::from_name("disk", &p).is_err());
        let mut p = BTreeMap::new();
        p.insert("r_in".to_string(), Rat::int(2));
        p.insert("r_out".to_string(), Rat::int(1));
        assert!(Shape::from_name("shell3", &p).is_err());
        assert!(Shape::from_name("torus", &BTreeMap::new()).is_err());
    }

    #[test]
    fn geodesic_sphere_quadratic_part_is_euclidean() {
        let c = sphere_geodesic_chart(&Rat::ONE, 4);
        assert_eq!(c.dsq[&(vec![0, 0], vec![2, 0])], Rat::ONE);
        assert_eq!(c.dsq[&(vec![0, 0], vec![0, 2])], Rat::ONE);
        assert!(c.dsq.get(&(vec![0, 0], vec![1, 1])).is_none());
    }

    #[test]
    fn ellipse_nodes_cover_perimeter() {
        let spec = builtin_spec(&Shape::Ellipse { a: Rat::int(2), b: Rat::ONE }, 4).unwrap();
        let perim: f64 = spec.charts.iter().map(|c| c.weight().re_f64()).sum();
        // Ramanujan's approximation is accurate to ~1e-5 here.
        let (a, b) = (2.0f64, 1.0f64);
        let h = ((a - b) / (a + b)).powi(2);
        let ram = std::f64::consts::PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((perim - ram).abs() < 1e-4, "{perim} vs {ram}");
    }
}
