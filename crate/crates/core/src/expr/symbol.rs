//! Boundary symbols: sums of series coefficients times powers of the two
//! half-plane root factors.
//!
//! A term is `c(x', ξ')·(ξ_n − h₊)^a·(ξ_n − h₋)^b·(log K)^ℓ` where `K` is the
//! interior kernel `R² + g(ξ, ξ) = h₀(ξ_n − h₊)(ξ_n − h₋)`, `a, b ∈ ½ℤ` and
//! `ℓ ∈ {0, 1}`.  The parameter `R` is fixed to 1; every symbol is
//! homogeneous, so the tracked degree recovers the full `R` dependence.
//! Coefficients are truncated series in the tangential base coordinates `x'`
//! and tangential covariables `ξ'`, so differentiation in either acts on the
//! coefficient and, through the chain rule, on the roots `h±`.

use std::collections::BTreeMap;

use super::gauss::Cq;
use super::rat::Rat;
use super::series::{PrecisionError, Series, INF};

/// Homogeneity of an expression in `(ξ, R)`, with exponents doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero expression, homogeneous of every degree.
    Zero,
    /// Twice the homogeneity degree.
    Degree(i32),
    Mixed,
}

impl Homogeneity {
    fn add(self, o: Homogeneity) -> Homogeneity {
        match (self, o) {
            (Homogeneity::Zero, x) | (x, Homogeneity::Zero) => x,
            (Homogeneity::Degree(a), Homogeneity::Degree(b)) if a == b => self,
            _ => Homogeneity::Mixed,
        }
    }

    fn shift(self, d2: i32) -> Homogeneity {
        match self {
            Homogeneity::Degree(a) => Homogeneity::Degree(a + d2),
            x => x,
        }
    }

    fn mul(self, o: Homogeneity) -> Homogeneity {
        match (self, o) {
            (Homogeneity::Zero, _) | (_, Homogeneity::Zero) => Homogeneity::Zero,
            (Homogeneity::Degree(a), Homogeneity::Degree(b)) => Homogeneity::Degree(a + b),
            _ => Homogeneity::Mixed,
        }
    }

    /// The degree as a rational, if homogeneous.
    pub fn degree(self) -> Option<Rat> {
        match self {
            Homogeneity::Degree(d) => Some(Rat::new(d as i64, 2)),
            _ => None,
        }
    }
}

/// Exponent key of a term: doubled exponents of `(ξ_n − h₊)` and
/// `(ξ_n − h₋)` plus the log flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorKey {
    pub plus2: i32,
    pub minus2: i32,
    pub log: bool,
}

impl FactorKey {
    pub fn new(plus2: i32, minus2: i32) -> FactorKey {
        FactorKey { plus2, minus2, log: false }
    }
}

/// Roots of the kernel as a quadratic in `ξ_n`, as series in `(x', ξ')`.
#[derive(Debug, Clone)]
pub struct Roots {
    pub h0: Series,
    pub h_plus: Series,
    pub h_minus: Series,
    /// `h₀(ξ'·ξ'-part) − b²`, the square of the root discriminant.
    pub disc: Series,
    pub sqrt_disc: Series,
    pub delta_inv: Series,
    d_plus: Vec<Series>,
    d_minus: Vec<Series>,
    d_log_h0: Vec<Series>,
}

impl Roots {
    /// Builds the roots of `h₀ξ_n² + 2bξ_n + c` with `h₀(0) = 1` and `c(0) = 1`.
    pub fn from_quadratic(h0: Series, b: Series, c: Series) -> Roots {
        let nv = h0.nvars();
        let disc = h0.mul(&c).sub(&b.mul(&b));
        let sqrt_disc = disc.pow_rat(&Rat::new(1, 2));
        let h0_inv = h0.inv();
        let i = Cq::i();
        let h_plus = b.neg().add(&sqrt_disc.scale(&i)).mul(&h0_inv);
        let h_minus = b.neg().sub(&sqrt_disc.scale(&i)).mul(&h0_inv);
        let delta = h_plus.sub(&h_minus);
        // δ = 2i√D/h₀, so δ⁻¹ = h₀/(2i√D).
        let delta_inv = h0.mul(&sqrt_disc.inv()).scale(&Cq::new(Rat::ZERO, Rat::new(-1, 2)));
        debug_assert!(delta.mul(&delta_inv).sub(&Series::one(h0.nx(), h0.nxi())).is_zero());
        let d_plus = (0..nv).map(|v| h_plus.deriv(v)).collect();
        let d_minus = (0..nv).map(|v| h_minus.deriv(v)).collect();
        let d_log_h0 = (0..nv).map(|v| h0.deriv(v).mul(&h0_inv)).collect();
        Roots { h0, h_plus, h_minus, disc, sqrt_disc, delta_inv, d_plus, d_minus, d_log_h0 }
    }

    pub fn nx(&self) -> usize {
        self.h0.nx()
    }

    pub fn nxi(&self) -> usize {
        self.h0.nxi()
    }

    pub fn delta(&self) -> Series {
        self.h_plus.sub(&self.h_minus)
    }

    /// `h₀^{e}` for rational `e`.
    pub fn h0_pow(&self, e: &Rat) -> Series {
        self.h0.pow_rat(e)
    }
}

/// Errors raised by the structural operations on symbols.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolError {
    #[error("improper rational function in ξ_n: a polynomial part survived partial fractions")]
    Improper,
    #[error("partial fractions need integer exponents, found doubled exponents ({0}, {1})")]
    FractionalExponent(i32, i32),
    #[error("log terms survive where the symbol must be rational")]
    LogRemnant,
    #[error("odd branch phase {0} survived evaluation")]
    BranchPhase(u8),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
}

/// A boundary symbol.
#[derive(Debug, Clone)]
pub struct Expr {
    nx: usize,
    nxi: usize,
    terms: BTreeMap<FactorKey, Series>,
    hom: Homogeneity,
}

impl Expr {
    pub fn zero(nx: usize, nxi: usize) -> Expr {
        Expr { nx, nxi, terms: BTreeMap::new(), hom: Homogeneity::Zero }
    }

    /// A single term `c·(ξ_n − h₊)^{plus2/2}(ξ_n − h₋)^{minus2/2}`, declared of
    /// doubled degree `deg2`.
    pub fn term(key: FactorKey, coeff: Series, deg2: i32) -> Expr {
        let mut e = Expr::zero(coeff.nx(), coeff.nxi());
        e.terms.insert(key, coeff);
        e.hom = Homogeneity::Degree(deg2);
        e
    }

    /// `K^{s2/2}`, optionally times `log K`, at `R = 1`.
    pub fn kernel_power(roots: &Roots, s2: i32, log: bool) -> Expr {
        let c = roots.h0_pow(&Rat::new(s2 as i64, 2));
        let key = FactorKey { plus2: s2, minus2: s2, log };
        Expr::term(key, c, 2 * s2)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nxi(&self) -> usize {
        self.nxi
    }

    pub fn homogeneity(&self) -> Homogeneity {
        if self.is_zero() {
            Homogeneity::Zero
        } else {
            self.hom
        }
    }

    /// Overrides the tracked homogeneity; used by constructors that know it.
    pub fn with_homogeneity(mut self, h: Homogeneity) -> Expr {
        self.hom = h;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FactorKey, &Series)> {
        self.terms.iter()
    }

    /// True when every coefficient vanishes to its known precision.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Series::is_zero)
    }

    /// True when some log term has a nonzero coefficient.
    pub fn has_log(&self) -> bool {
        self.terms.iter().any(|(k, c)| k.log && !c.is_zero())
    }

    /// Accumulates a coefficient.  Zero coefficients are kept: their
    /// precision still records how far the term is known.
    fn push(&mut self, key: FactorKey, c: Series) {
        match self.terms.get_mut(&key) {
            Some(v) => *v = v.add(&c),
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Drops zero coefficients (and with them their precision records); the
    /// term map is otherwise already canonical.
    pub fn normalize(mut self) -> Expr {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, o: &Expr) -> Expr {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.push(*k, c.clone());
        }
        out.hom = self.homogeneity().add(o.homogeneity());
        out
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Expr {
        self.scale(&Cq::int(-1))
    }

    pub fn scale(&self, c: &Cq) -> Expr {
        if c.is_zero() {
            return Expr::zero(self.nx, self.nxi);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.scale(c);
        }
        out
    }

    /// Multiplies every coefficient by a series of doubled degree `deg2`.
    pub fn scale_series(&self, s: &Series, deg2: i32) -> Expr {
        let mut out = Expr::zero(self.nx, self.nxi);
        for (k, c) in &self.terms {
            out.push(*k, c.mul(s));
        }
        out.hom = self.homogeneity().shift(deg2);
        out
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        let mut out = Expr::zero(self.nx, self.nxi);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                if k1.log && k2.log {
                    assert!(c1.is_zero() || c2.is_zero(), "log² terms do not occur");
                    continue;
                }
                let key = FactorKey {
                    plus2: k1.plus2 + k2.plus2,
                    minus2: k1.minus2 + k2.minus2,
                    log: k1.log || k2.log,
                };
                out.push(key, c1.mul(c2));
            }
        }
        out.hom = self.homogeneity().mul(o.homogeneity());
        out
    }

    /// `∂/∂ξ_n`.
    pub fn deriv_xi_n(&self) -> Expr {
        let mut out = Expr::zero(self.nx, self.nxi);
        for (k, c) in &self.terms {
            if k.plus2 != 0 {
                let key = FactorKey { plus2: k.plus2 - 2, ..*k };
                out.push(key, c.scale_rat(&Rat::new(k.plus2 as i64, 2)));
            }
            if k.minus2 != 0 {
                let key = FactorKey { minus2: k.minus2 - 2, ..*k };
                out.push(key, c.scale_rat(&Rat::new(k.minus2 as i64, 2)));
            }
            if k.log {
                out.push(FactorKey { plus2: k.plus2 - 2, minus2: k.minus2, log: false }, c.clone());
                out.push(FactorKey { plus2: k.plus2, minus2: k.minus2 - 2, log: false }, c.clone());
            }
        }
        out.hom = self.homogeneity().shift(-2);
        out
    }

    /// `∂/∂v` for a series variable `v` (tangential `x'` or `ξ'`), with the
    /// chain rule through `h±` and `log K`.
    pub fn deriv_var(&self, roots: &Roots, v: usize) -> Expr {
        let mut out = Expr::zero(self.nx, self.nxi);
        let dp = &roots.d_plus[v];
        let dm = &roots.d_minus[v];
        for (k, c) in &self.terms {
            out.push(*k, c.deriv(v));
            if k.plus2 != 0 {
                let key = FactorKey { plus2: k.plus2 - 2, ..*k };
                out.push(key, c.mul(dp).scale_rat(&Rat::new(-(k.plus2 as i64), 2)));
            }
            if k.minus2 != 0 {
                let key = FactorKey { minus2: k.minus2 - 2, ..*k };
                out.push(key, c.mul(dm).scale_rat(&Rat::new(-(k.minus2 as i64), 2)));
            }
            if k.log {
                let base = FactorKey { log: false, ..*k };
                out.push(base, c.mul(&roots.d_log_h0[v]));
                out.push(FactorKey { plus2: k.plus2 - 2, ..base }, c.mul(dp).neg());
                out.push(FactorKey { minus2: k.minus2 - 2, ..base }, c.mul(dm).neg());
            }
        }
        let shift = if v >= self.nx { -2 } else { 0 };
        out.hom = self.homogeneity().shift(shift);
        out
    }

    /// `D_{x_v} = −i ∂/∂x_v`.
    pub fn d_x(&self, roots: &Roots, v: usize) -> Expr {
        assert!(v < self.nx);
        self.deriv_var(roots, v).scale(&-Cq::i())
    }

    /// Mixed derivative `∂_{ξ'}^{β'} ∂_{ξ_n}^{k}`.
    pub fn deriv_xi(&self, roots: &Roots, beta: &[u32], k_n: u32) -> Expr {
        let mut e = self.clone();
        for (j, b) in beta.iter().enumerate() {
            for _ in 0..*b {
                e = e.deriv_var(roots, self.nx + j);
            }
        }
        for _ in 0..k_n {
            e = e.deriv_xi_n();
        }
        e
    }

    /// `D_{x'}^{α}`.
    pub fn d_x_multi(&self, roots: &Roots, alpha: &[u32]) -> Expr {
        let mut e = self.clone();
        for (j, a) in alpha.iter().enumerate() {
            for _ in 0..*a {
                e = e.d_x(roots, j);
            }
        }
        e
    }

    /// Fails unless every log term has vanished to the tracked precision.
    pub fn assert_log_free(&self) -> Result<(), SymbolError> {
        if self.has_log() {
            Err(SymbolError::LogRemnant)
        } else {
            Ok(())
        }
    }

    /// Splits a proper rational function of `ξ_n` into the part with poles only
    /// at `h₊` and the part with poles only at `h₋`.
    pub fn partial_fractions(&self, roots: &Roots) -> Result<(Expr, Expr), SymbolError> {
        self.assert_log_free()?;
        let (nx, nxi) = (self.nx, self.nxi);
        let delta = roots.delta();
        let dinv = &roots.delta_inv;
        let mut plus = Expr::zero(nx, nxi);
        let mut minus = Expr::zero(nx, nxi);
        // Polynomial leftovers, indexed by the power of (ξ_n − h₊).
        let mut poly: BTreeMap<i32, Series> = BTreeMap::new();
        let add_poly = |poly: &mut BTreeMap<i32, Series>, p: i32, c: Series| {
            let e = poly.entry(p).or_insert_with(|| Series::zero(nx, nxi, [INF, INF]));
            *e = e.add(&c);
        };
        let pow = |s: &Series, k: i32| -> Series { s.pow_int(k as u32) };
        for (key, c) in &self.terms {
            if key.plus2 % 2 != 0 || key.minus2 % 2 != 0 {
                return Err(SymbolError::FractionalExponent(key.plus2, key.minus2));
            }
            let (a, b) = (key.plus2 / 2, key.minus2 / 2);
            if a < 0 && b < 0 {
                let (al, be) = (-a, -b);
                for k in 0..al {
                    let co = Rat::binomial(&Rat::int((be + k - 1) as i64), k as u32);
                    let co = if k % 2 == 1 { -co } else { co };
                    let s = c.mul(&pow(dinv, be + k)).scale_rat(&co);
                    plus.push(FactorKey::new(2 * (k - al), 0), s);
                }
                for k in 0..be {
                    let co = Rat::binomial(&Rat::int((al + k - 1) as i64), k as u32);
                    let co = if (k + al + k) % 2 == 1 { -co } else { co };
                    let s = c.mul(&pow(dinv, al + k)).scale_rat(&co);
                    minus.push(FactorKey::new(0, 2 * (k - be)), s);
                }
            } else if a >= 0 && b < 0 {
                // (ξ_n − h₊) = (ξ_n − h₋) − δ
                for i in 0..=a {
                    let co = Rat::binomial(&Rat::int(a as i64), i as u32);
                    let co = if (a - i) % 2 == 1 { -co } else { co };
                    let s = c.mul(&pow(&delta, a - i)).scale_rat(&co);
                    let e = i + b;
                    if e < 0 {
                        minus.push(FactorKey::new(0, 2 * e), s);
                    } else {
                        // (ξ_n − h₋)^e = Σ binom(e, j) (ξ_n − h₊)^j δ^{e−j}
                        for j in 0..=e {
                            let cj = Rat::binomial(&Rat::int(e as i64), j as u32);
                            add_poly(&mut poly, j, s.mul(&pow(&delta, e - j)).scale_rat(&cj));
                        }
                    }
                }
            } else if a < 0 && b >= 0 {
                // (ξ_n − h₋) = (ξ_n − h₊) + δ
                for i in 0..=b {
                    let co = Rat::binomial(&Rat::int(b as i64), i as u32);
                    let s = c.mul(&pow(&delta, b - i)).scale_rat(&co);
                    let e = i + a;
                    if e < 0 {
                        plus.push(FactorKey::new(2 * e, 0), s);
                    } else {
                        add_poly(&mut poly, e, s);
                    }
                }
            } else {
                for j in 0..=b {
                    let cj = Rat::binomial(&Rat::int(b as i64), j as u32);
                    add_poly(&mut poly, a + j, c.mul(&pow(&delta, b - j)).scale_rat(&cj));
                }
            }
        }
        if poly.values().any(|s| !s.is_zero()) {
            return Err(SymbolError::Improper);
        }
        let h = self.homogeneity();
        Ok((plus.with_homogeneity(h), minus.with_homogeneity(h)))
    }

    /// Decides whether the symbol vanishes identically in `ξ_n` (to the
    /// tracked precision).
    ///
    /// Distinct exponent pairs are not linearly independent, so the terms are
    /// first cleared of denominators and rewritten in one polynomial basis.
    pub fn vanishes(&self, roots: &Roots) -> Result<bool, SymbolError> {
        self.assert_log_free()?;
        let live: Vec<&FactorKey> = self.terms.iter().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k).collect();
        if live.is_empty() {
            return Ok(true);
        }
        let shift_p = -live.iter().map(|k| k.plus2).min().unwrap();
        let shift_m = -live.iter().map(|k| k.minus2).min().unwrap();
        let one = Series::one(self.nx, self.nxi);
        let cleared = self.mul(&Expr::term(FactorKey::new(shift_p, shift_m), one, 0)).normalize();
        match cleared.partial_fractions(roots) {
            Ok((p, m)) => Ok(p.is_zero() && m.is_zero()),
            Err(SymbolError::Improper) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Evaluates at `ξ = 0` (so `ξ_n = 0` and `ξ' = 0`), keeping the
    /// dependence on `x'`.
    pub fn eval_xi0(&self, roots: &Roots) -> Result<PhaseSeries, SymbolError> {
        self.assert_log_free()?;
        let h0 = roots.h0.at_xi_zero()?;
        let mut out = PhaseSeries::zero(self.nx, self.nxi);
        for (k, c) in &self.terms {
            // (−h₊)^a (−h₋)^b with h± = ±i h₀^{-1/2}: phase e^{iπ(b−a)/2}.
            let phase = (k.minus2 - k.plus2).rem_euclid(8) as u8;
            let mag = h0.pow_rat(&Rat::new(-((k.plus2 + k.minus2) as i64), 4));
            out.push(phase, c.at_xi_zero()?.mul(&mag));
        }
        Ok(out)
    }

    /// Floating evaluation at a series point and complex `ξ_n`, using
    /// principal branches for fractional powers.
    pub fn eval_f64(&self, roots: &Roots, point: &[f64], xi_n: (f64, f64)) -> (f64, f64) {
        use num_complex::Complex64;
        let c = |s: &Series| {
            let (re, im) = s.eval_f64(point);
            Complex64::new(re, im)
        };
        let hp = c(&roots.h_plus);
        let hm = c(&roots.h_minus);
        let h0 = c(&roots.h0);
        let z = Complex64::new(xi_n.0, xi_n.1);
        let mut tot = Complex64::new(0.0, 0.0);
        for (k, s) in &self.terms {
            let mut v = c(s) * (z - hp).powf(k.plus2 as f64 / 2.0) * (z - hm).powf(k.minus2 as f64 / 2.0);
            if k.log {
                v *= (h0 * (z - hp) * (z - hm)).ln();
            }
            tot += v;
        }
        (tot.re, tot.im)
    }
}

/// A sum `Σ_k e^{iπk/4}·s_k(x')` produced by evaluating symbols at `ξ = 0`.
///
/// Half-integer exponents give eighth-root phases that only combine into
/// Gaussian rationals in products, so they are tracked symbolically.
#[derive(Debug, Clone)]
pub struct PhaseSeries {
    nx: usize,
    nxi: usize,
    parts: BTreeMap<u8, Series>,
}

impl PhaseSeries {
    pub fn zero(nx: usize, nxi: usize) -> PhaseSeries {
        PhaseSeries { nx, nxi, parts: BTreeMap::new() }
    }

    pub fn from_series(s: Series) -> PhaseSeries {
        let mut p = PhaseSeries::zero(s.nx(), s.nxi());
        p.push(0, s);
        p
    }

    fn push(&mut self, phase: u8, s: Series) {
        // Fold phases ≥ 4 into a sign so equal values share one entry.
        let phase = phase % 8;
        let (phase, s) = if phase >= 4 { (phase - 4, s.neg()) } else { (phase, s) };
        match self.parts.get_mut(&phase) {
            Some(v) => *v = v.add(&s),
            None => {
                self.parts.insert(phase, s);
            }
        }
    }

    pub fn add(&self, o: &PhaseSeries) -> PhaseSeries {
        let mut out = self.clone();
        for (p, s) in &o.parts {
            out.push(*p, s.clone());
        }
        out
    }

    pub fn mul(&self, o: &PhaseSeries) -> PhaseSeries {
        let mut out = PhaseSeries::zero(self.nx, self.nxi);
        for (p, a) in &self.parts {
            for (q, b) in &o.parts {
                out.push(p + q, a.mul(b));
            }
        }
        out
    }

    pub fn mul_series(&self, s: &Series) -> PhaseSeries {
        let mut out = PhaseSeries::zero(self.nx, self.nxi);
        for (p, a) in &self.parts {
            out.push(*p, a.mul(s));
        }
        out
    }

    pub fn scale(&self, c: &Cq) -> PhaseSeries {
        let mut out = PhaseSeries::zero(self.nx, self.nxi);
        for (p, a) in &self.parts {
            out.push(*p, a.scale(c));
        }
        out
    }

    pub fn deriv(&self, v: usize) -> PhaseSeries {
        let mut out = PhaseSeries::zero(self.nx, self.nxi);
        for (p, a) in &self.parts {
            out.push(*p, a.deriv(v));
        }
        out
    }

    /// Value at `x' = 0`; odd eighth-root phases must cancel.
    pub fn c0(&self) -> Result<Cq, SymbolError> {
        let mut tot = Cq::ZERO;
        for (p, s) in &self.parts {
            let v = s.c0()?;
            if v.is_zero() {
                continue;
            }
            if p % 2 == 1 {
                return Err(SymbolError::BranchPhase(*p));
            }
            tot += &(&v * &Cq::i_pow((*p / 2) as i64));
        }
        Ok(tot)
    }
}
