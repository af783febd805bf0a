//! Boundary densities from the inverse factors.
//!
//! The leading contribution pairs `∂_{ξ_n} w₊` with `w₋` at `ξ = 0`.  Higher
//! normal derivatives `∂_{ξ_n}^{m+1} w₊` correspond to normal moments of the
//! boundary layer; integrating them across the curved collar moves the base
//! point along the foot-point map, which contributes the tangential
//! derivatives weighted by `σ`.

use super::{multi_indices, BoundaryEngine, BoundaryError, DerivCache, InverseFactors};
use crate::expr::{Cq, PhaseSeries, Rat, Series};
use crate::geometry::{jet_polynomial, JetTable};

/// Jets of `∂_v φ`.
fn gradient_jets(jets: &JetTable, v: usize) -> JetTable {
    jets.iter()
        .filter(|(a, _)| a[v] > 0)
        .map(|(a, c)| {
            let mut b = a.clone();
            b[v] -= 1;
            (b, c.clone())
        })
        .collect()
}

/// The tangential offset `σ(x', t)` of the foot point of `(x', t + φ(x'))`
/// on the graph, as series in `x'` and `t`.
///
/// It solves `σ = (t + φ(x') − φ(x' + σ))·∇φ(x' + σ)`.
pub fn foot_offset(jets: &JetTable, m: usize, prec: i32) -> Vec<Series> {
    let p = [prec, prec];
    let x: Vec<Series> = (0..m).map(|v| Series::var(m, 1, v)).collect();
    let t = Series::var(m, 1, m);
    let phi_x = jet_polynomial(jets, &x, m, 1).trunc(p);
    let grads: Vec<JetTable> = (0..m).map(|v| gradient_jets(jets, v)).collect();
    let mut sigma: Vec<Series> = vec![Series::zero(m, 1, p); m];
    for _ in 0..=(2 * prec.max(0) + 2) {
        let shifted: Vec<Series> = x.iter().zip(&sigma).map(|(a, s)| a.add(s)).collect();
        let normal = t.add(&phi_x).sub(&jet_polynomial(jets, &shifted, m, 1)).trunc(p);
        let next: Vec<Series> =
            grads.iter().map(|g| normal.mul(&jet_polynomial(g, &shifted, m, 1).trunc(p)).trunc(p)).collect();
        if next == sigma {
            break;
        }
        sigma = next;
    }
    sigma
}

fn sign(e: u32) -> Rat {
    if e % 2 == 0 {
        Rat::ONE
    } else {
        Rat::int(-1)
    }
}

fn inv_factorial_multi(alpha: &[u32]) -> Rat {
    alpha.iter().fold(Rat::ONE, |acc, a| &acc / &Rat::factorial(*a))
}

/// `∂_{x'}^β` of a phase series.
fn deriv_multi(p: &PhaseSeries, beta: &[u32]) -> PhaseSeries {
    let mut out = p.clone();
    for (v, b) in beta.iter().enumerate() {
        for _ in 0..*b {
            out = out.deriv(v);
        }
    }
    out
}

pub(super) fn densities(eng: &BoundaryEngine, w: &InverseFactors) -> Result<Vec<Rat>, BoundaryError> {
    let m = eng.m();
    let roots = &eng.roots;
    let k_max = eng.k_max;
    let u: Vec<PhaseSeries> = w.minus.iter().map(|e| e.eval_xi0(roots)).collect::<Result<_, _>>()?;
    let mut plus: Vec<DerivCache> = w.plus.iter().cloned().map(DerivCache::new).collect();
    let sigma = foot_offset(&eng.jets, m, k_max as i32 + eng.slack);
    // σ^α for 1 ≤ |α| < K, as series in (x', t).
    let mut sigma_pow: Vec<(Vec<u32>, Series)> = Vec::new();
    for a in 1..k_max {
        for alpha in multi_indices(m, a) {
            let mut s = Series::one(m, 1);
            for (v, e) in alpha.iter().enumerate() {
                s = s.mul(&sigma[v].pow_int(*e));
            }
            sigma_pow.push((alpha, s));
        }
    }

    let mut out = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let mut total = Cq::ZERO;
        for ord in 0..k {
            let gn = ord + 1;
            let mut e = PhaseSeries::zero(m, m);
            for bp in 0..k {
                for j in 0..k {
                    let Some(l) = k.checked_sub(bp + gn + j) else { continue };
                    for beta in multi_indices(m, bp) {
                        let y = plus[l as usize].xi(roots, &beta, gn).eval_xi0(roots)?;
                        let ux = deriv_multi(&u[j as usize], &beta);
                        let c = &(&(-&sign(bp)) * &inv_factorial_multi(&beta)) / &Rat::factorial(gn);
                        let coef = &Cq::i_pow((bp + gn) as i64) * &Cq::real(c);
                        e = e.add(&y.mul(&ux).scale(&coef));
                    }
                }
            }
            if ord == 0 {
                total += &e.c0()?;
                continue;
            }
            let ord_fact = Rat::factorial(ord);
            for (alpha, s) in &sigma_pow {
                let a: u32 = alpha.iter().sum();
                if a > ord {
                    continue;
                }
                let c = s.xi_coefficient(&[ord], m).scale_rat(&(&ord_fact * &inv_factorial_multi(alpha)));
                if c.is_zero() {
                    continue;
                }
                let x = deriv_multi(&e.mul_series(&c), alpha);
                total += &x.c0()?.scale(&sign(a));
            }
        }
        if !total.im.is_zero() {
            return Err(BoundaryError::NonReal { k, im: total.im });
        }
        out.push(total.re);
    }
    Ok(out)
}
