//! Full symbol and parametrix densities on interior charts.
//!
//! In a chart with `d(x, x − v)² = H(x)(v, v) + Σ_{j≥3} C^{(j)}(x; v)` the
//! normalized symbol is
//! `q̂_j = r(x)^{−1} Σ_{γ ∈ I_j} 𝔠̂_{rk γ} C^{(γ)}(x, i∂_ξ) K^{rk γ − μ}` with
//! `K = 1 + ξᵀH(x)^{−1}ξ` and `r = (det H(x)/det H(0))^{1/2}`; the branch
//! `rk γ ≥ μ` for odd `n` carries an extra `log K`.  Near `ξ = 0` every
//! ingredient is a power series, so the whole computation runs on truncated
//! series in `(x, ξ)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::index::{frak_c_hat, multiset_orderings, ConstantSigns};
use crate::expr::{Cq, PrecisionError, Rat, Series};
use crate::geometry::{dsq_series, positive_definite, Chart, GeometryError};

/// Errors from the interior recursions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InteriorError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error("chart {0}: the transversal Hessian is not positive definite")]
    NotPositiveDefinite(String),
    #[error("interior density a_{k} has nonzero imaginary part {im}")]
    NonReal { k: u32, im: Rat },
    #[error("dimension n = {0} is outside the supported range 1..=4")]
    Dimension(usize),
    #[error("the scalar-like polynomial is not defined for n = 1")]
    OneDimensional,
}

type TaylorForm = Vec<(Vec<u32>, Series)>;

/// Per-chart engine for the interior densities `â_0, …, â_K` at the chart
/// origin, normalized so that `â_0 = 1`.
pub struct InteriorEngine {
    n: usize,
    k_max: u32,
    signs: ConstantSigns,
    slack: i32,
    metric0: Vec<Vec<Rat>>,
    /// `K = 1 + ξᵀH(x)^{−1}ξ`.
    kernel: Series,
    r_inv: Series,
    forms: BTreeMap<u32, TaylorForm>,
}

/// Memoized `∂_ξ^β` of one series.
struct XiCache {
    base: Series,
    map: HashMap<Vec<u32>, Series>,
}

impl XiCache {
    fn new(base: Series) -> Self {
        XiCache { base, map: HashMap::new() }
    }

    fn get(&mut self, beta: &[u32]) -> Series {
        if beta.iter().all(|b| *b == 0) {
            return self.base.clone();
        }
        if let Some(s) = self.map.get(beta) {
            return s.clone();
        }
        let v = beta.iter().rposition(|b| *b > 0).unwrap();
        let mut parent = beta.to_vec();
        parent[v] -= 1;
        let d = self.get(&parent).deriv(self.base.nx() + v);
        self.map.insert(beta.to_vec(), d.clone());
        d
    }
}

fn inv_factorial_multi(alpha: &[u32]) -> Rat {
    alpha.iter().fold(Rat::ONE, |acc, a| &acc / &Rat::factorial(*a))
}

pub(super) fn rat_inverse(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| if i == j { Rat::ONE } else { Rat::ZERO }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|r| !a[*r][c].is_zero()).expect("invertible matrix");
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].recip();
        for j in 0..n {
            a[c][j] = &a[c][j] * &piv;
            inv[c][j] = &inv[c][j] * &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &f * &inv[c][j];
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
    }
    inv
}

fn series_det(m: &[Vec<Series>]) -> Series {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Series::zero(m[0][0].nx(), m[0][0].nxi(), [crate::expr::INF, crate::expr::INF]);
    for c in 0..n {
        let minor: Vec<Vec<Series>> =
            (1..n).map(|r| (0..n).filter(|j| *j != c).map(|j| m[r][j].clone()).collect()).collect();
        let term = m[0][c].mul(&series_det(&minor));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Splits `d(x, x − v)²` into the Hessian series `H_ab(x)` and the Taylor
/// forms of degree `≥ 3`.
fn split_dsq(d2: &Series, n: usize) -> (Vec<Vec<Series>>, BTreeMap<u32, TaylorForm>) {
    let betas: BTreeSet<Vec<u32>> = d2.terms().map(|(e, _)| e[n..].to_vec()).collect();
    let mut h: Vec<Vec<Series>> = vec![vec![Series::zero(n, n, [d2.prec()[0], crate::expr::INF]); n]; n];
    let mut forms: BTreeMap<u32, TaylorForm> = BTreeMap::new();
    for beta in betas {
        let deg: u32 = beta.iter().sum();
        let coeff = d2.xi_coefficient(&beta, n);
        if deg == 2 {
            let idx: Vec<usize> = beta.iter().enumerate().flat_map(|(v, e)| std::iter::repeat(v).take(*e as usize)).collect();
            let (a, b) = (idx[0], idx[1]);
            if a == b {
                h[a][a] = coeff;
            } else {
                let half = coeff.scale_rat(&Rat::new(1, 2));
                h[a][b] = half.clone();
                h[b][a] = half;
            }
        } else if deg >= 3 {
            forms.entry(deg).or_default().push((beta, coeff));
        }
    }
    (h, forms)
}

impl InteriorEngine {
    pub fn new(chart: &Chart, n: usize, k_max: u32, signs: ConstantSigns) -> Result<Self, InteriorError> {
        Self::with_slack(chart, n, k_max, signs, 0)
    }

    /// As [`InteriorEngine::new`] with `slack` extra orders of precision.
    pub fn with_slack(
        chart: &Chart,
        n: usize,
        k_max: u32,
        signs: ConstantSigns,
        slack: i32,
    ) -> Result<Self, InteriorError> {
        if !(1..=4).contains(&n) {
            return Err(InteriorError::Dimension(n));
        }
        let p = k_max as i32 + slack;
        let d2 = dsq_series(chart, n, [p + 1, k_max as i32 + 2])?;
        let (h, forms) = split_dsq(&d2, n);
        let metric0: Vec<Vec<Rat>> =
            h.iter().map(|row| row.iter().map(|s| s.constant_term().re.clone()).collect()).collect();
        if !positive_definite(&metric0) {
            return Err(InteriorError::NotPositiveDefinite(chart.id().to_string()));
        }
        let xp = [p + 1, crate::expr::INF];
        // H^{-1} = Σ_k (−H₀^{-1}E)^k H₀^{-1} with E = H − H₀ vanishing at 0.
        let h0_inv = rat_inverse(&metric0);
        let cst = |r: &Rat| Series::constant(n, n, Cq::real(r.clone()));
        let e: Vec<Vec<Series>> = (0..n)
            .map(|a| (0..n).map(|b| h[a][b].sub(&cst(&metric0[a][b])).trunc(xp)).collect())
            .collect();
        let mneg: Vec<Vec<Series>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut s = Series::zero(n, n, xp);
                        for c in 0..n {
                            s = s.sub(&e[c][b].scale_rat(&h0_inv[a][c]));
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let mut term: Vec<Vec<Series>> = (0..n).map(|a| (0..n).map(|b| cst(&h0_inv[a][b])).collect()).collect();
        let mut g = term.clone();
        for _ in 0..=(p + 1) {
            let next: Vec<Vec<Series>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let mut s = Series::zero(n, n, xp);
                            for c in 0..n {
                                s = s.add(&mneg[a][c].mul(&term[c][b]));
                            }
                            s.trunc(xp)
                        })
                        .collect()
                })
                .collect();
            if next.iter().flatten().all(Series::is_zero) {
                break;
            }
            for a in 0..n {
                for b in 0..n {
                    g[a][b] = g[a][b].add(&next[a][b]);
                }
            }
            term = next;
        }
        let xi_prec = 3 * k_max as i32 + 2 + slack;
        let kp = [p + 1, xi_prec];
        let mut kernel = Series::one(n, n);
        for a in 0..n {
            for b in 0..n {
                let xa = Series::var(n, n, n + a);
                let xb = Series::var(n, n, n + b);
                kernel = kernel.add(&g[a][b].mul(&xa).mul(&xb));
            }
        }
        let kernel = kernel.trunc(kp);
        let det0 = {
            let hm: Vec<Vec<Series>> = metric0.iter().map(|row| row.iter().map(&cst).collect()).collect();
            series_det(&hm).constant_term().re.clone()
        };
        let det = series_det(&h).trunc(xp).scale_rat(&det0.recip());
        let r_inv = det.pow_rat(&Rat::new(-1, 2));
        Ok(InteriorEngine { n, k_max, signs, slack, metric0, kernel, r_inv, forms })
    }

    pub fn metric_at_origin(&self) -> &[Vec<Rat>] {
        &self.metric0
    }

    fn mu2(&self) -> i32 {
        self.n as i32 + 1
    }

    fn prec(&self, j: u32) -> [i32; 2] {
        let p = (self.k_max as i32 - j as i32 + self.slack).max(0);
        [p, p]
    }

    /// `K^{s2/2}`, times `log K` when asked, truncated to `prec`.
    fn kernel_power(&self, s2: i32, log: bool, prec: [i32; 2]) -> Series {
        let k = self.kernel.trunc(prec);
        let pw = k.pow_rat(&Rat::new(s2 as i64, 2));
        if log {
            pw.mul(&k.log())
        } else {
            pw
        }
    }

    fn apply_form(&self, p: u32, cache: &mut XiCache) -> Series {
        let prec = cache.base.prec();
        let mut out = Series::zero(self.n, self.n, prec);
        let Some(form) = self.forms.get(&p) else {
            return out;
        };
        for (beta, coeff) in form {
            out = out.add(&cache.get(beta).mul(coeff));
        }
        out.scale(&Cq::i_pow(p as i64))
    }

    fn compose(&self, s: Series, min: u32, remaining: u32, left: u32, path: &mut Vec<u32>, acc: &mut Series) {
        if left == 0 {
            if remaining == 0 {
                *acc = acc.add(&s.scale(&Cq::int(multiset_orderings(path) as i64)));
            }
            return;
        }
        let mut cache = XiCache::new(s);
        let mut p = min;
        while p * left <= remaining {
            if left > 1 || p == remaining {
                let next = self.apply_form(p, &mut cache);
                if !next.is_zero() {
                    path.push(p);
                    self.compose(next, p, remaining - p, left - 1, path, acc);
                    path.pop();
                }
            }
            p += 1;
        }
    }

    /// The normalized symbol `q̂_j` as a series in `(x, ξ)`.
    pub fn q_symbol(&self, j: u32) -> Series {
        let target = self.prec(j);
        let mu2 = self.mu2();
        if j == 0 {
            return self.kernel_power(-mu2, false, target).mul(&self.r_inv).trunc(target);
        }
        let mut total = Series::zero(self.n, self.n, target);
        for rank in 1..=j {
            let c = frak_c_hat(rank, self.n as u32, self.signs);
            let parts_total = j + 2 * rank;
            let base = self.kernel_power(2 * rank as i32 - mu2, c.log, [target[0], target[1] + parts_total as i32]);
            let mut acc = Series::zero(self.n, self.n, target);
            self.compose(base, 3, parts_total, rank, &mut Vec::new(), &mut acc);
            total = total.add(&acc.trunc(target).scale_rat(&c.value));
        }
        total.mul(&self.r_inv).trunc(target)
    }

    /// `â_0(x), …, â_K(x)` at `ξ = 0`, as series in `x`.
    pub fn density_series(&self) -> Result<Vec<Series>, InteriorError> {
        let n = self.n;
        let q: Vec<Series> = (0..=self.k_max).map(|j| self.q_symbol(j)).collect();
        let mut qc: Vec<XiCache> = q.into_iter().map(XiCache::new).collect();
        let a0 = qc[0].base.at_xi_zero()?.inv();
        let mut a: Vec<Series> = vec![a0.clone()];
        for j in 1..=self.k_max {
            let mut acc = Series::zero(n, n, self.prec(j));
            for k in 0..=j {
                for l in 0..j {
                    if k + l > j {
                        continue;
                    }
                    let order = j - k - l;
                    for alpha in crate::boundary::multi_indices(n, order) {
                        let dq = qc[k as usize].get(&alpha).at_xi_zero()?;
                        let mut da = a[l as usize].clone();
                        for (v, e) in alpha.iter().enumerate() {
                            for _ in 0..*e {
                                da = da.deriv(v);
                            }
                        }
                        let c = Cq::i_pow(-(order as i64)).scale(&inv_factorial_multi(&alpha));
                        acc = acc.add(&dq.mul(&da).scale(&c));
                    }
                }
            }
            a.push(a0.mul(&acc).neg().trunc(self.prec(j)));
        }
        Ok(a)
    }

    /// `â_0(0), …, â_K(0)`; the density per unit Riemannian volume of the
    /// `R^{n−k}` coefficient is `â_k(0)/(n!ω_n)`.
    pub fn densities(&self) -> Result<Vec<Rat>, InteriorError> {
        let mut out = Vec::new();
        for (k, s) in self.density_series()?.iter().enumerate() {
            let v = s.c0()?;
            if !v.im.is_zero() {
                return Err(InteriorError::NonReal { k: k as u32, im: v.im });
            }
            out.push(v.re);
        }
        Ok(out)
    }
}

/// Interior densities `â_0(0), …, â_K(0)` for one chart.
pub fn interior_densities(chart: &Chart, n: usize, k_max: u32, signs: ConstantSigns) -> Result<Vec<Rat>, InteriorError> {
    InteriorEngine::new(chart, n, k_max, signs)?.densities()
}
