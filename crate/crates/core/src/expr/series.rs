//! Truncated multivariate Taylor series with Gaussian-rational coefficients.
//!
//! Variables come in two groups: base coordinates `x` (the first `nx`
//! variables) and cotangent-like variables `ξ` (the next `nxi`).  Each group
//! carries its own precision: a series with precision `[px, pξ]` is exact for
//! every monomial whose `x`-degree is at most `px` and `ξ`-degree at most `pξ`.
//! Derivatives lower the precision of their group, products take the minimum,
//! and evaluation at the origin fails loudly once a precision goes negative.
//! That bookkeeping is what lets the engine report which jet orders a result
//! actually depends on.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};

use super::gauss::Cq;
use super::rat::Rat;

/// Precision marker for exact polynomials.
pub const INF: i32 = i32::MAX;

const MAX_VARS: usize = 8;

/// A monomial packed one exponent per byte.
pub type Mono = u64;

#[derive(Default)]
struct MonoHasher(u64);

impl Hasher for MonoHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 = (self.0 ^ *b as u64).wrapping_mul(0x100000001b3);
        }
    }
    fn write_u64(&mut self, v: u64) {
        self.0 = (v ^ (v >> 29)).wrapping_mul(0xbf58476d1ce4e5b9);
    }
}

type MonoMap<V> = HashMap<Mono, V, BuildHasherDefault<MonoHasher>>;

/// Raised when a truncated series is evaluated beyond its known order.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("series precision exhausted (x: {x}, ξ: {xi})")]
pub struct PrecisionError {
    pub x: i32,
    pub xi: i32,
}

#[inline]
fn exp_of(m: Mono, v: usize) -> u32 {
    ((m >> (8 * v)) & 0xff) as u32
}

#[inline]
fn unit(v: usize) -> Mono {
    1u64 << (8 * v)
}

fn min_prec(a: i32, b: i32) -> i32 {
    a.min(b)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    nx: u8,
    nxi: u8,
    prec: [i32; 2],
    /// Nonzero terms sorted by packed monomial.
    terms: Vec<(Mono, Cq)>,
}

impl Series {
    pub fn zero(nx: usize, nxi: usize, prec: [i32; 2]) -> Series {
        assert!(nx + nxi <= MAX_VARS, "at most {MAX_VARS} series variables");
        Series { nx: nx as u8, nxi: nxi as u8, prec, terms: Vec::new() }
    }

    pub fn constant(nx: usize, nxi: usize, c: Cq) -> Series {
        let mut s = Series::zero(nx, nxi, [INF, INF]);
        if !c.is_zero() {
            s.terms.push((0, c));
        }
        s
    }

    pub fn one(nx: usize, nxi: usize) -> Series {
        Series::constant(nx, nxi, Cq::ONE)
    }

    /// The coordinate function of variable `v` (exact).
    pub fn var(nx: usize, nxi: usize, v: usize) -> Series {
        assert!(v < nx + nxi);
        let mut s = Series::zero(nx, nxi, [INF, INF]);
        s.terms.push((unit(v), Cq::ONE));
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs.
    pub fn from_terms<I>(nx: usize, nxi: usize, prec: [i32; 2], it: I) -> Series
    where
        I: IntoIterator<Item = (Vec<u32>, Cq)>,
    {
        let mut acc: MonoMap<Cq> = MonoMap::default();
        for (e, c) in it {
            assert_eq!(e.len(), nx + nxi, "exponent length mismatch");
            let mut m: Mono = 0;
            for (v, k) in e.iter().enumerate() {
                assert!(*k < 256, "exponent too large");
                m |= (*k as u64) << (8 * v);
            }
            *acc.entry(m).or_insert(Cq::ZERO) += &c;
        }
        Series::from_map(nx, nxi, prec, acc)
    }

    fn from_map(nx: usize, nxi: usize, prec: [i32; 2], map: MonoMap<Cq>) -> Series {
        let mut s = Series::zero(nx, nxi, prec);
        let mut terms: Vec<(Mono, Cq)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.retain(|(m, _)| s.fits(*m));
        terms.sort_unstable_by_key(|(m, _)| *m);
        s.terms = terms;
        s
    }

    pub fn nx(&self) -> usize {
        self.nx as usize
    }

    pub fn nxi(&self) -> usize {
        self.nxi as usize
    }

    pub fn nvars(&self) -> usize {
        self.nx() + self.nxi()
    }

    pub fn prec(&self) -> [i32; 2] {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (exponent vector, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Cq)> + '_ {
        let nv = self.nvars();
        self.terms.iter().map(move |(m, c)| ((0..nv).map(|v| exp_of(*m, v)).collect(), c))
    }

    #[inline]
    fn group_degrees(&self, m: Mono) -> [i32; 2] {
        let mut d = [0i32; 2];
        for v in 0..self.nx() {
            d[0] += exp_of(m, v) as i32;
        }
        for v in self.nx()..self.nvars() {
            d[1] += exp_of(m, v) as i32;
        }
        d
    }

    #[inline]
    fn fits(&self, m: Mono) -> bool {
        let d = self.group_degrees(m);
        d[0] <= self.prec[0] && d[1] <= self.prec[1]
    }

    fn check_compat(&self, o: &Series) {
        assert!(
            self.nx == o.nx && self.nxi == o.nxi,
            "series spaces differ: ({}, {}) vs ({}, {})",
            self.nx,
            self.nxi,
            o.nx,
            o.nxi
        );
    }

    /// Restricts to a smaller precision.
    pub fn trunc(&self, prec: [i32; 2]) -> Series {
        let mut s = self.clone();
        s.prec = [min_prec(self.prec[0], prec[0]), min_prec(self.prec[1], prec[1])];
        let p = s.prec;
        let nx = s.nx();
        let nv = s.nvars();
        s.terms.retain(|(m, _)| {
            let mut d = [0i32; 2];
            for v in 0..nv {
                d[(v >= nx) as usize] += exp_of(*m, v) as i32;
            }
            d[0] <= p[0] && d[1] <= p[1]
        });
        s
    }

    /// Sets the precision, asserting the caller knows the terms are exact to it.
    pub fn with_prec(mut self, prec: [i32; 2]) -> Series {
        self.prec = prec;
        let keep: Vec<(Mono, Cq)> = std::mem::take(&mut self.terms);
        self.terms = keep.into_iter().filter(|(m, _)| self.fits(*m)).collect();
        self
    }

    pub fn add(&self, o: &Series) -> Series {
        self.check_compat(o);
        let prec = [min_prec(self.prec[0], o.prec[0]), min_prec(self.prec[1], o.prec[1])];
        let mut out = Series::zero(self.nx(), self.nxi(), prec);
        let (a, b) = (&self.terms, &o.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            let (m, c) = if take_a {
                i += 1;
                (a[i - 1].0, a[i - 1].1.clone())
            } else if take_b {
                j += 1;
                (b[j - 1].0, b[j - 1].1.clone())
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, &a[i - 1].1 + &b[j - 1].1)
            };
            if !c.is_zero() && out.fits(m) {
                out.terms.push((m, c));
            }
        }
        out
    }

    pub fn neg(&self) -> Series {
        let mut s = self.clone();
        for t in &mut s.terms {
            t.1 = -&t.1;
        }
        s
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Cq) -> Series {
        if c.is_zero() {
            return Series::zero(self.nx(), self.nxi(), self.prec);
        }
        let mut s = self.clone();
        for t in &mut s.terms {
            t.1 = &t.1 * c;
        }
        s
    }

    pub fn scale_rat(&self, r: &Rat) -> Series {
        self.scale(&Cq::real(r.clone()))
    }

    pub fn add_const(&self, c: &Cq) -> Series {
        self.add(&Series::constant(self.nx(), self.nxi(), c.clone()))
    }

    pub fn mul(&self, o: &Series) -> Series {
        self.check_compat(o);
        let prec = [min_prec(self.prec[0], o.prec[0]), min_prec(self.prec[1], o.prec[1])];
        if self.terms.is_empty() || o.terms.is_empty() {
            return Series::zero(self.nx(), self.nxi(), prec);
        }
        let da: Vec<[i32; 2]> = self.terms.iter().map(|(m, _)| self.group_degrees(*m)).collect();
        let db: Vec<[i32; 2]> = o.terms.iter().map(|(m, _)| o.group_degrees(*m)).collect();
        let mut acc: MonoMap<Cq> = MonoMap::default();
        acc.reserve(self.terms.len().max(o.terms.len()) * 2);
        for (i, (ma, ca)) in self.terms.iter().enumerate() {
            for (j, (mb, cb)) in o.terms.iter().enumerate() {
                if da[i][0] + db[j][0] > prec[0] || da[i][1] + db[j][1] > prec[1] {
                    continue;
                }
                let p = ca * cb;
                *acc.entry(ma + mb).or_insert(Cq::ZERO) += &p;
            }
        }
        Series::from_map(self.nx(), self.nxi(), prec, acc)
    }

    pub fn pow_int(&self, k: u32) -> Series {
        let mut acc = Series::one(self.nx(), self.nxi());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `v`.
    pub fn deriv(&self, v: usize) -> Series {
        assert!(v < self.nvars());
        let g = (v >= self.nx()) as usize;
        let mut prec = self.prec;
        if prec[g] != INF {
            prec[g] -= 1;
        }
        let mut out = Series::zero(self.nx(), self.nxi(), prec);
        for (m, c) in &self.terms {
            let e = exp_of(*m, v);
            if e == 0 {
                continue;
            }
            let nm = m - unit(v);
            if out.fits(nm) {
                out.terms.push((nm, c.scale(&Rat::int(e as i64))));
            }
        }
        out.terms.sort_unstable_by_key(|(m, _)| *m);
        out
    }

    /// Iterated derivative `∂^α` with `α` indexed over all variables.
    pub fn deriv_multi(&self, alpha: &[u32]) -> Series {
        let mut s = self.clone();
        for (v, k) in alpha.iter().enumerate() {
            for _ in 0..*k {
                s = s.deriv(v);
            }
        }
        s
    }

    /// Value at the origin.
    pub fn c0(&self) -> Result<Cq, PrecisionError> {
        if self.prec[0] < 0 || self.prec[1] < 0 {
            return Err(PrecisionError { x: self.prec[0], xi: self.prec[1] });
        }
        Ok(self.constant_term())
    }

    /// The constant coefficient without a precision check.
    pub fn constant_term(&self) -> Cq {
        match self.terms.first() {
            Some((0, c)) => c.clone(),
            _ => Cq::ZERO,
        }
    }

    /// Coefficient of a monomial given as an exponent vector.
    pub fn coeff(&self, e: &[u32]) -> Cq {
        let mut m: Mono = 0;
        for (v, k) in e.iter().enumerate() {
            m |= (*k as u64) << (8 * v);
        }
        match self.terms.binary_search_by_key(&m, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Cq::ZERO,
        }
    }

    /// Sets every `ξ` variable to zero.
    pub fn at_xi_zero(&self) -> Result<Series, PrecisionError> {
        if self.prec[1] < 0 {
            return Err(PrecisionError { x: self.prec[0], xi: self.prec[1] });
        }
        let mut out = Series::zero(self.nx(), self.nxi(), [self.prec[0], INF]);
        out.terms = self.terms.iter().filter(|(m, _)| self.group_degrees(*m)[1] == 0).cloned().collect();
        Ok(out)
    }

    /// The coefficient of `ξ^e` as a series in `x` living in a space with
    /// `nxi_out` cotangent variables (all absent).
    pub fn xi_coefficient(&self, e: &[u32], nxi_out: usize) -> Series {
        assert_eq!(e.len(), self.nxi());
        let mut key: Mono = 0;
        for (k, v) in e.iter().enumerate() {
            key |= (*v as u64) << (8 * (self.nx() + k));
        }
        let xmask: Mono = if self.nx() == 0 { 0 } else { (1u64 << (8 * self.nx())) - 1 };
        let mut out = Series::zero(self.nx(), nxi_out, [self.prec[0], INF]);
        for (m, c) in &self.terms {
            if m & !xmask == key {
                out.terms.push((m & xmask, c.clone()));
            }
        }
        out.terms.sort_unstable_by_key(|(m, _)| *m);
        out
    }

    /// Re-embeds an `x`-only series into a space with `nxi` cotangent variables.
    pub fn with_xi_vars(&self, nxi: usize) -> Series {
        assert!(
            self.terms.iter().all(|(m, _)| self.group_degrees(*m)[1] == 0),
            "series depends on ξ"
        );
        let mut s = self.clone();
        s.nxi = nxi as u8;
        s.prec[1] = INF;
        s
    }

    /// Splits the series into total-degree components.
    fn by_total_degree(&self) -> Vec<Vec<(Mono, Cq)>> {
        let mut out: Vec<Vec<(Mono, Cq)>> = Vec::new();
        for (m, c) in &self.terms {
            let d = self.group_degrees(*m);
            let t = (d[0] + d[1]) as usize;
            if out.len() <= t {
                out.resize(t + 1, Vec::new());
            }
            out[t].push((*m, c.clone()));
        }
        out
    }

    fn total_degree_bound(&self) -> Option<usize> {
        let mut bound = 0usize;
        let has = |g: usize| self.terms.iter().any(|(m, _)| self.group_degrees(*m)[g] > 0);
        for g in 0..2 {
            if self.prec[g] == INF {
                if has(g) {
                    return None;
                }
            } else if self.prec[g] > 0 {
                bound += self.prec[g] as usize;
            }
        }
        Some(bound)
    }

    /// `self^a` for a series with constant term 1.
    ///
    /// Uses the Euler-operator recurrence `s·E(f) = a·f·E(s)` degree by degree,
    /// which costs about one multiplication.
    pub fn pow_rat(&self, a: &Rat) -> Series {
        assert!(self.constant_term() == Cq::ONE, "pow_rat needs constant term 1");
        if a.is_integer() && a.signum() >= 0 {
            let k = a.numer().try_into().expect("integer exponent");
            return self.pow_int(k);
        }
        let dmax = self
            .total_degree_bound()
            .expect("fractional power of a series with infinite precision in a used group");
        let comps = self.by_total_degree();
        let mut f: Vec<MonoMap<Cq>> = Vec::with_capacity(dmax + 1);
        let mut f0 = MonoMap::default();
        f0.insert(0, Cq::ONE);
        f.push(f0);
        for d in 1..=dmax {
            let mut acc: MonoMap<Cq> = MonoMap::default();
            for k in 1..=d.min(comps.len().saturating_sub(1)) {
                let w = &(a * &Rat::int(k as i64)) - &Rat::int((d - k) as i64);
                if w.is_zero() {
                    continue;
                }
                for (ms, cs) in &comps[k] {
                    let ds = self.group_degrees(*ms);
                    let cw = cs.scale(&w);
                    for (mf, cf) in &f[d - k] {
                        let df = self.group_degrees(*mf);
                        if ds[0] + df[0] > self.prec[0] || ds[1] + df[1] > self.prec[1] {
                            continue;
                        }
                        let p = &cw * cf;
                        *acc.entry(ms + mf).or_insert(Cq::ZERO) += &p;
                    }
                }
            }
            let inv_d = Rat::new(1, d as i64);
            for v in acc.values_mut() {
                *v = v.scale(&inv_d);
            }
            acc.retain(|_, c| !c.is_zero());
            f.push(acc);
        }
        let mut all: MonoMap<Cq> = MonoMap::default();
        for comp in f {
            all.extend(comp);
        }
        Series::from_map(self.nx(), self.nxi(), self.prec, all)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Series {
        let c = self.constant_term();
        assert!(!c.is_zero(), "inverse of a series with zero constant term");
        let ci = c.recip();
        self.scale(&ci).pow_rat(&Rat::int(-1)).scale(&ci)
    }

    /// `log(self)` for a series with constant term 1.
    pub fn log(&self) -> Series {
        assert!(self.constant_term() == Cq::ONE, "log needs constant term 1");
        let dmax = self.total_degree_bound().expect("log of an infinite-precision series");
        let comps = self.by_total_degree();
        let mut g: Vec<MonoMap<Cq>> = vec![MonoMap::default()];
        for d in 1..=dmax {
            let mut acc: MonoMap<Cq> = MonoMap::default();
            if d < comps.len() {
                for (m, c) in &comps[d] {
                    *acc.entry(*m).or_insert(Cq::ZERO) += c;
                }
            }
            for k in 1..d.min(comps.len()) {
                let w = Rat::new(-((d - k) as i64), d as i64);
                for (ms, cs) in &comps[k] {
                    let ds = self.group_degrees(*ms);
                    let cw = cs.scale(&w);
                    for (mg, cg) in &g[d - k] {
                        let dg = self.group_degrees(*mg);
                        if ds[0] + dg[0] > self.prec[0] || ds[1] + dg[1] > self.prec[1] {
                            continue;
                        }
                        let p = &cw * cg;
                        *acc.entry(ms + mg).or_insert(Cq::ZERO) += &p;
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            g.push(acc);
        }
        let mut all: MonoMap<Cq> = MonoMap::default();
        for comp in g {
            all.extend(comp);
        }
        Series::from_map(self.nx(), self.nxi(), self.prec, all)
    }

    /// `Σ coeffs[k]·self^k` for a series with zero constant term.
    pub fn compose(&self, coeffs: &[Cq]) -> Series {
        assert!(self.constant_term().is_zero(), "compose needs zero constant term");
        let mut acc = Series::zero(self.nx(), self.nxi(), [INF, INF]);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add_const(c);
        }
        acc
    }

    /// Floating-point evaluation of the truncated polynomial.
    pub fn eval_f64(&self, point: &[f64]) -> (f64, f64) {
        assert_eq!(point.len(), self.nvars());
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, c) in &self.terms {
            let mut w = 1.0;
            for (v, x) in point.iter().enumerate() {
                w *= x.powi(exp_of(*m, v) as i32);
            }
            re += c.re.to_f64() * w;
            im += c.im.to_f64() * w;
        }
        (re, im)
    }

    /// Whether every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}+{} vars, prec {:?}](", self.nx, self.nxi, self.prec)?;
        for (k, (e, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{e:?}")?;
        }
        write!(f, ")")
    }
}
