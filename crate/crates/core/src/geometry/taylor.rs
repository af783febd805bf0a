//! Squared-distance Taylor series built from chart jets.

use super::univariate::{self, Coef};
use super::{Chart, GeometryError, JetTable};
use crate::expr::{Cq, Rat, Series};

/// Evaluates `Σ_α jets[α]·y^α/α!` for series arguments `y`.
pub fn jet_polynomial(jets: &JetTable, y: &[Series], nx: usize, nxi: usize) -> Series {
    let mut acc = Series::zero(nx, nxi, [crate::expr::INF, crate::expr::INF]);
    // Cache powers of each argument.
    let mut powers: Vec<Vec<Series>> = y.iter().map(|s| vec![Series::one(nx, nxi), s.clone()]).collect();
    for (alpha, v) in jets {
        if v.is_zero() {
            continue;
        }
        assert_eq!(alpha.len(), y.len(), "jet multi-index length");
        let mut term = Series::one(nx, nxi);
        let mut fact = Rat::ONE;
        for (i, e) in alpha.iter().enumerate() {
            let e = *e as usize;
            while powers[i].len() <= e {
                let next = powers[i].last().unwrap().mul(&y[i]);
                powers[i].push(next);
            }
            term = term.mul(&powers[i][e]);
            fact = &fact * &Rat::factorial(e as u32);
        }
        acc = acc.add(&term.scale_rat(&(v / &fact)));
    }
    acc
}

fn vars(nx: usize, nxi: usize, range: std::ops::Range<usize>) -> Vec<Series> {
    range.map(|v| Series::var(nx, nxi, v)).collect()
}

/// `d(x, x − v)²` for the flattened boundary chart of a graph `x_n = φ(x')`,
/// as a series in `x'` (first group) and `v = (v', v_n)` (second group).
///
/// In the coordinates `(x', x_n − φ(x'))` the Euclidean displacement is
/// `(v', v_n + φ(x') − φ(x' − v'))`.
pub fn graph_dsq_series(jets: &JetTable, n: usize, prec: [i32; 2]) -> Series {
    let m = n - 1;
    let (nx, nxi) = (m, n);
    let x = vars(nx, nxi, 0..m);
    let v = vars(nx, nxi, m..m + n);
    let shifted: Vec<Series> = x.iter().zip(&v).map(|(a, b)| a.sub(b)).collect();
    let phi = jet_polynomial(jets, &x, nx, nxi).trunc(prec);
    let phi_shift = jet_polynomial(jets, &shifted, nx, nxi).trunc(prec);
    let normal = v[m].add(&phi).sub(&phi_shift);
    let mut d2 = normal.mul(&normal);
    for vi in &v[..m] {
        d2 = d2.add(&vi.mul(vi));
    }
    d2.trunc(prec)
}

/// `d(x, x − v)²` for an interior chart, as a series in `x` (first group)
/// and `v` (second group), both with `n` variables.
pub fn dsq_series(chart: &Chart, n: usize, prec: [i32; 2]) -> Result<Series, GeometryError> {
    let (nx, nxi) = (n, n);
    match chart {
        Chart::Submanifold(s) => {
            let x = vars(nx, nxi, 0..n);
            let v = vars(nx, nxi, n..2 * n);
            let shifted: Vec<Series> = x.iter().zip(&v).map(|(a, b)| a.sub(b)).collect();
            let mut d2 = Series::zero(nx, nxi, [crate::expr::INF, crate::expr::INF]);
            for vi in &v {
                d2 = d2.add(&vi.mul(vi));
            }
            for f in &s.functions {
                let diff = jet_polynomial(f, &x, nx, nxi).sub(&jet_polynomial(f, &shifted, nx, nxi)).trunc(prec);
                d2 = d2.add(&diff.mul(&diff));
            }
            Ok(d2.trunc(prec))
        }
        Chart::DistanceJets(d) => {
            let terms = d.dsq.iter().map(|((a, b), c)| {
                let mut e = a.clone();
                e.extend_from_slice(b);
                (e, Cq::real(c.clone()))
            });
            Ok(Series::from_terms(nx, nxi, prec, terms))
        }
        Chart::Boundary(b) => Err(GeometryError::BadChart {
            chart: b.id.clone(),
            reason: "boundary charts have no interior distance expansion".into(),
        }),
    }
}

/// Graph jets `φ^{(m)}(0)`, `2 ≤ m ≤ order`, of the planar curve with
/// curvature jets `κ(0), κ'(0), …` with respect to arclength.
///
/// The curve is integrated as `θ' = κ`, `x' = cos θ`, `y' = sin θ`, then
/// `x(s)` is inverted and composed into `y(s)`.
pub fn curvature_to_graph_jets(kappa: &[Rat], order: u32) -> Result<JetTable, GeometryError> {
    let order_us = order as usize;
    if order_us > kappa.len() + 1 {
        return Err(GeometryError::BadParams {
            shape: "curvature jets".into(),
            reason: format!("order {order} needs curvature derivatives up to {}", order - 2),
        });
    }
    let mut k = vec![Rat::ZERO; order_us + 1];
    for (i, c) in kappa.iter().enumerate().take(order_us + 1) {
        k[i] = c / &Rat::factorial(i as u32);
    }
    let theta = univariate::integrate(&k, order_us);
    let cos = univariate::compose(&univariate::trig_series::<Rat>(true, order_us), &theta, order_us);
    let sin = univariate::compose(&univariate::trig_series::<Rat>(false, order_us), &theta, order_us);
    let x = univariate::integrate(&cos, order_us);
    let y = univariate::integrate(&sin, order_us);
    let s_of_x = univariate::revert(&x, order_us);
    let phi = univariate::compose(&y, &s_of_x, order_us);
    let mut jets = JetTable::new();
    for (m, c) in phi.iter().enumerate().skip(2) {
        if !Coef::is_zero(c) {
            jets.insert(vec![m as u32], c * &Rat::factorial(m as u32));
        }
    }
    Ok(jets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curvature_gives_circle() {
        // Circle of radius 2: φ = 2 − √(4 − t²) = t²/4 + t⁴/64 + t⁶/512 + …
        let jets = curvature_to_graph_jets(&[Rat::new(1, 2), Rat::ZERO, Rat::ZERO, Rat::ZERO, Rat::ZERO], 6).unwrap();
        assert_eq!(jets.get(&vec![2]), Some(&Rat::new(1, 2)));
        assert_eq!(jets.get(&vec![4]), Some(&Rat::new(24, 64)));
        assert_eq!(jets.get(&vec![6]), Some(&Rat::new(720, 512)));
        assert_eq!(jets.get(&vec![3]), None);
    }

    #[test]
    fn leading_jets_are_curvature_jets() {
        let kappa = [Rat::new(3, 2), Rat::new(-1, 5), Rat::new(2, 7)];
        let jets = curvature_to_graph_jets(&kappa, 4).unwrap();
        assert_eq!(jets[&vec![2]], kappa[0]);
        assert_eq!(jets[&vec![3]], kappa[1]);
    }

    #[test]
    fn flat_curve() {
        let jets = curvature_to_graph_jets(&[Rat::ZERO; 4], 5).unwrap();
        assert!(jets.is_empty());
    }
}
