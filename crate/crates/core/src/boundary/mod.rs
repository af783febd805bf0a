//! Boundary calculus for Euclidean domains.
//!
//! Near a boundary point the domain is `{x_n > φ(x')}`; the chart is
//! flattened by `(x', x_n) ↦ (x', x_n − φ(x'))`.  In these coordinates the
//! symbol of the magnitude operator does not depend on `x_n`, its principal
//! part is `K^{−μ}` with `K = 1 + g(ξ, ξ)`, and the full symbol factors into
//! a part with singularities only at the upper root `h₊` of `K` and a part
//! with singularities only at the lower root `h₋`.  Boundary densities are
//! read off the inverse factors at `ξ = 0`.
//!
//! Symbols are normalized by `n!ω_n` and evaluated at `R = 1`.

mod cache;
mod density;

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::expr::{Cq, Expr, FactorKey, Rat, Roots, Series, SymbolError, INF};
use crate::geometry::{graph_dsq_series, jet_polynomial, JetTable};
use crate::interior::{frak_c_hat, multiset_orderings, ConstantSigns};

pub use cache::{multi_indices, DerivCache};

/// Errors from the boundary recursions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("boundary density B_{k} has nonzero imaginary part {im}")]
    NonReal { k: u32, im: Rat },
    #[error("dimension n = {0} is outside the supported range 1..=4")]
    Dimension(usize),
    #[error("composition residual of order {0} does not vanish")]
    Residual(u32),
}

impl From<crate::expr::PrecisionError> for BoundaryError {
    fn from(e: crate::expr::PrecisionError) -> Self {
        BoundaryError::Symbol(e.into())
    }
}

/// Convention switches that must not change assembled coefficients.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BoundaryConventions {
    pub signs: ConstantSigns,
    /// Attach the `h₀` power to the plus factor instead of the minus factor.
    pub h0_on_plus: bool,
}

/// A homogeneous operator `Σ_β c_β(x')·v^β`, applied with `v = i∂_ξ`.
type TaylorForm = Vec<(Vec<u32>, Series)>;

/// Half-plane factors `q_{±,j}`, `j < K`.
#[derive(Debug, Clone)]
pub struct FactorPair {
    pub plus: Vec<Expr>,
    pub minus: Vec<Expr>,
}

/// Inverse factors `w_{±,j}`, `j < K`.
#[derive(Debug, Clone)]
pub struct InverseFactors {
    pub plus: Vec<Expr>,
    pub minus: Vec<Expr>,
}

/// Per-chart engine for the boundary densities `B̂_1, …, B̂_K`.
pub struct BoundaryEngine {
    n: usize,
    k_max: u32,
    conv: BoundaryConventions,
    jets: JetTable,
    roots: Roots,
    forms: BTreeMap<u32, TaylorForm>,
    slack: i32,
}

fn inv_factorial_multi(alpha: &[u32]) -> Rat {
    alpha.iter().fold(Rat::ONE, |acc, a| &acc / &Rat::factorial(*a))
}

/// Truncates every coefficient of a symbol.
fn truncate_expr(e: &Expr, prec: [i32; 2]) -> Expr {
    let mut out = Expr::zero(e.nx(), e.nxi());
    for (k, c) in e.terms() {
        out = out.add(&Expr::term(*k, c.trunc(prec), 0));
    }
    out.with_homogeneity(e.homogeneity())
}

impl BoundaryEngine {
    /// Prepares roots and Taylor forms for a boundary chart of a domain in
    /// `ℝⁿ` with graph jets `jets`.
    pub fn new(jets: &JetTable, n: usize, k_max: u32, conv: BoundaryConventions) -> Result<Self, BoundaryError> {
        Self::with_slack(jets, n, k_max, conv, 0)
    }

    /// As [`BoundaryEngine::new`] with `slack` extra orders of series
    /// precision everywhere; used to confirm the default truncation.
    pub fn with_slack(
        jets: &JetTable,
        n: usize,
        k_max: u32,
        conv: BoundaryConventions,
        slack: i32,
    ) -> Result<Self, BoundaryError> {
        if !(1..=4).contains(&n) {
            return Err(BoundaryError::Dimension(n));
        }
        let m = n - 1;
        let k = k_max as i32;
        let root_prec = [k + 1 + slack, 3 * k + 1 + slack];
        let x: Vec<Series> = (0..m).map(|v| Series::var(m, m, v)).collect();
        let phi = jet_polynomial(jets, &x, m, m).trunc([k + 2 + slack, INF]);
        let mut h0 = Series::one(m, m);
        let mut b = Series::zero(m, m, [INF, INF]);
        let mut c = Series::one(m, m);
        for v in 0..m {
            let g = phi.deriv(v);
            let xi = Series::var(m, m, m + v);
            h0 = h0.add(&g.mul(&g));
            b = b.sub(&g.mul(&xi));
            c = c.add(&xi.mul(&xi));
        }
        let roots = Roots::from_quadratic(h0.trunc(root_prec), b.trunc(root_prec), c.trunc(root_prec));

        let top = k_max + 1;
        let d2 = graph_dsq_series(jets, n, [k + 1 + slack, top as i32]);
        let betas: BTreeSet<Vec<u32>> = d2
            .terms()
            .map(|(e, _)| e[m..].to_vec())
            .filter(|b| b.iter().sum::<u32>() >= 3)
            .collect();
        let mut forms: BTreeMap<u32, TaylorForm> = BTreeMap::new();
        for beta in betas {
            let coeff = d2.xi_coefficient(&beta, m);
            forms.entry(beta.iter().sum()).or_default().push((beta, coeff));
        }
        Ok(BoundaryEngine { n, k_max, conv, jets: jets.clone(), roots, forms, slack })
    }

    pub fn roots(&self) -> &Roots {
        &self.roots
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    fn m(&self) -> usize {
        self.n - 1
    }

    /// Twice `μ = (n+1)/2`.
    fn mu2(&self) -> i32 {
        self.n as i32 + 1
    }

    /// Series precision carried by objects of order `j`.
    fn prec(&self, j: u32) -> [i32; 2] {
        let p = (self.k_max as i32 - 1 - j as i32 + self.slack).max(0);
        [p, p]
    }

    fn zero(&self) -> Expr {
        Expr::zero(self.m(), self.m())
    }

    /// Applies `C^{(p)}(x', i∂_ξ)` using the derivative cache of its argument.
    fn apply_form(&self, p: u32, cache: &mut DerivCache) -> Expr {
        let m = self.m();
        let mut out = self.zero();
        let Some(form) = self.forms.get(&p) else {
            return out;
        };
        let phase = Cq::i_pow(p as i64);
        for (beta, coeff) in form {
            let d = cache.xi(&self.roots, &beta[..m], beta[m]);
            out = out.add(&d.scale_series(coeff, 0));
        }
        out.scale(&phase)
    }

    /// The boundary symbol `q̂^∂_j`: `Σ_γ 𝔠̂_{|γ|} C^{(γ)} K^{|γ|−μ}` over
    /// index compositions of rank `|γ|` with parts `≥ 3` summing to `j + 2|γ|`.
    pub fn q_boundary(&self, j: u32) -> Expr {
        let mu2 = self.mu2();
        if j == 0 {
            return Expr::kernel_power(&self.roots, -mu2, false);
        }
        let target = self.prec(j);
        let mut total = self.zero();
        for rank in 1..=j {
            let c = frak_c_hat(rank, self.n as u32, self.conv.signs);
            let parts_total = j + 2 * rank;
            let base = Expr::kernel_power(&self.roots, 2 * rank as i32 - mu2, c.log);
            let base = truncate_expr(&base, [target[0], target[1] + parts_total as i32]);
            let mut acc = self.zero();
            let mut path = Vec::new();
            self.compose_forms(base, 3, parts_total, rank, &mut path, &mut acc);
            total = total.add(&acc.scale(&Cq::real(c.value)));
        }
        truncate_expr(&total, target)
    }

    /// Sums `C^{(γ)} e` over nondecreasing `γ` (parts `≥ min`, `left` parts,
    /// total `remaining`), each weighted by its number of distinct orderings.
    /// The operators commute, so orderings give equal contributions.
    fn compose_forms(&self, e: Expr, min: u32, remaining: u32, left: u32, path: &mut Vec<u32>, acc: &mut Expr) {
        if left == 0 {
            if remaining == 0 {
                *acc = acc.add(&e.scale(&Cq::int(multiset_orderings(path) as i64)));
            }
            return;
        }
        let mut cache = DerivCache::new(e);
        let mut p = min;
        while p * left <= remaining {
            if left > 1 || p == remaining {
                let next = self.apply_form(p, &mut cache);
                if !next.is_zero() {
                    path.push(p);
                    self.compose_forms(next, p, remaining - p, left - 1, path, acc);
                    path.pop();
                }
            }
            p += 1;
        }
    }

    /// Boundary symbols `q̂^∂_0, …, q̂^∂_{K−1}`.
    pub fn q_symbols(&self) -> Vec<Expr> {
        (0..self.k_max).map(|j| self.q_boundary(j)).collect()
    }

    fn plus_zero(&self) -> Expr {
        let mu2 = self.mu2();
        let c = if self.conv.h0_on_plus {
            self.roots.h0_pow(&Rat::new(-mu2 as i64, 2))
        } else {
            Series::one(self.m(), self.m())
        };
        Expr::term(FactorKey::new(-mu2, 0), c, -mu2)
    }

    fn minus_zero(&self) -> Expr {
        let mu2 = self.mu2();
        let c = if self.conv.h0_on_plus {
            Series::one(self.m(), self.m())
        } else {
            self.roots.h0_pow(&Rat::new(-mu2 as i64, 2))
        };
        Expr::term(FactorKey::new(0, -mu2), c, -mu2)
    }

    /// `Σ_{|α|=a} (1/α!) ∂_{ξ'}^α X · D_{x'}^α Y`.
    fn leibniz(&self, a: u32, left: &mut DerivCache, right: &mut DerivCache) -> Expr {
        let mut out = self.zero();
        for alpha in multi_indices(self.m(), a) {
            let x = left.xi(&self.roots, &alpha, 0);
            let y = right.x(&self.roots, &alpha);
            out = out.add(&x.mul(&y).scale(&Cq::real(inv_factorial_multi(&alpha))));
        }
        out.scale(&Cq::i_pow(-(a as i64)))
    }

    /// Factors the boundary symbol as `q^∂ = q₋ ∘ q₊` order by order.
    pub fn factor(&self, q: &[Expr]) -> Result<FactorPair, BoundaryError> {
        let mu2 = self.mu2();
        let kinv = Expr::kernel_power(&self.roots, mu2, false);
        let mut minus = vec![DerivCache::new(self.minus_zero())];
        let mut plus = vec![DerivCache::new(self.plus_zero())];
        for j in 1..self.k_max {
            let mut acc = self.zero();
            for k in 0..j {
                for l in 0..j {
                    if k + l > j {
                        continue;
                    }
                    let (lo, hi) = (k as usize, l as usize);
                    let a = j - k - l;
                    acc = acc.add(&self.leibniz(a, &mut minus[lo], &mut plus[hi]));
                }
            }
            let lhs = truncate_expr(&q[j as usize].sub(&acc), self.prec(j)).mul(&kinv).normalize();
            let (p, mm) = lhs.partial_fractions(&self.roots)?;
            let qp = truncate_expr(&plus[0].base().mul(&p), self.prec(j));
            let qm = truncate_expr(&minus[0].base().mul(&mm), self.prec(j));
            plus.push(DerivCache::new(qp));
            minus.push(DerivCache::new(qm));
        }
        Ok(FactorPair {
            plus: plus.into_iter().map(|c| c.base().clone()).collect(),
            minus: minus.into_iter().map(|c| c.base().clone()).collect(),
        })
    }

    /// Right inverses `w` with `q ∘ w = 1` for one factor family.
    fn invert(&self, q: &[Expr], w0: Expr) -> Vec<Expr> {
        let mut qc: Vec<DerivCache> = q.iter().cloned().map(DerivCache::new).collect();
        let mut wc = vec![DerivCache::new(w0)];
        for j in 1..self.k_max {
            let mut acc = self.zero();
            for k in 0..=j {
                for l in 0..j {
                    if k + l > j {
                        continue;
                    }
                    let a = j - k - l;
                    acc = acc.add(&self.leibniz(a, &mut qc[k as usize], &mut wc[l as usize]));
                }
            }
            let wj = truncate_expr(&wc[0].base().mul(&acc).neg(), self.prec(j));
            wc.push(DerivCache::new(wj));
        }
        wc.into_iter().map(|c| c.base().clone()).collect()
    }

    /// Inverse factors `w_{±,j}`.
    pub fn inverse_factors(&self, f: &FactorPair) -> InverseFactors {
        let mu2 = self.mu2();
        let (cp, cm) = if self.conv.h0_on_plus {
            (self.roots.h0_pow(&Rat::new(mu2 as i64, 2)), Series::one(self.m(), self.m()))
        } else {
            (Series::one(self.m(), self.m()), self.roots.h0_pow(&Rat::new(mu2 as i64, 2)))
        };
        let wp0 = Expr::term(FactorKey::new(mu2, 0), cp, mu2);
        let wm0 = Expr::term(FactorKey::new(0, mu2), cm, mu2);
        InverseFactors { plus: self.invert(&f.plus, wp0), minus: self.invert(&f.minus, wm0) }
    }

    /// Checks `q₋ ∘ q₊ − q^∂` through order `K − 1`.
    pub fn factor_residual(&self, q: &[Expr], f: &FactorPair) -> Result<(), BoundaryError> {
        let mut minus: Vec<DerivCache> = f.minus.iter().cloned().map(DerivCache::new).collect();
        let mut plus: Vec<DerivCache> = f.plus.iter().cloned().map(DerivCache::new).collect();
        for j in 0..self.k_max {
            let mut acc = self.zero();
            for k in 0..=j {
                for l in 0..=j - k {
                    acc = acc.add(&self.leibniz(j - k - l, &mut minus[k as usize], &mut plus[l as usize]));
                }
            }
            let r = truncate_expr(&acc.sub(&q[j as usize]), self.prec(j));
            if !r.vanishes(&self.roots)? {
                return Err(BoundaryError::Residual(j));
            }
        }
        Ok(())
    }

    /// Checks `q_± ∘ w_± = 1` through order `K − 1` for both families.
    pub fn inverse_residual(&self, f: &FactorPair, w: &InverseFactors) -> Result<(), BoundaryError> {
        let one = Expr::term(FactorKey::new(0, 0), Series::one(self.m(), self.m()), 0);
        for (q, w) in [(&f.plus, &w.plus), (&f.minus, &w.minus)] {
            let mut qc: Vec<DerivCache> = q.iter().cloned().map(DerivCache::new).collect();
            let mut wc: Vec<DerivCache> = w.iter().cloned().map(DerivCache::new).collect();
            for j in 0..self.k_max {
                let mut acc = if j == 0 { one.neg() } else { self.zero() };
                for k in 0..=j {
                    for l in 0..=j - k {
                        acc = acc.add(&self.leibniz(j - k - l, &mut qc[k as usize], &mut wc[l as usize]));
                    }
                }
                if !truncate_expr(&acc, self.prec(j)).vanishes(&self.roots)? {
                    return Err(BoundaryError::Residual(j));
                }
            }
        }
        Ok(())
    }

    /// Normalized boundary densities `B̂_1, …, B̂_K` at the chart origin.
    pub fn densities(&self) -> Result<Vec<Rat>, BoundaryError> {
        let q = self.q_symbols();
        let f = self.factor(&q)?;
        let w = self.inverse_factors(&f);
        density::densities(self, &w)
    }
}

/// Normalized boundary densities for one chart.
pub fn boundary_densities(
    jets: &JetTable,
    n: usize,
    k_max: u32,
    conv: BoundaryConventions,
) -> Result<Vec<Rat>, BoundaryError> {
    BoundaryEngine::new(jets, n, k_max, conv)?.densities()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_boundary_leading_density_is_mu() {
        for n in 1..=3usize {
            let b = boundary_densities(&JetTable::new(), n, 2, BoundaryConventions::default()).unwrap();
            assert_eq!(b[0], Rat::new(n as i64 + 1, 2), "n = {n}");
            assert!(b[1].is_zero(), "n = {n}: {}", b[1]);
        }
    }

    fn disk_jets(order: u32) -> JetTable {
        crate::geometry::builtin_spec(&crate::geometry::Shape::Disk { r: Rat::ONE }, order)
            .unwrap()
            .charts[0]
            .as_boundary()
            .unwrap()
            .jets
            .clone()
    }

    #[test]
    fn unit_disk_densities() {
        let b = boundary_densities(&disk_jets(6), 2, 3, BoundaryConventions::default()).unwrap();
        assert_eq!(b, vec![Rat::new(3, 2), Rat::new(9, 8), Rat::new(-3, 16)]);
    }
}
