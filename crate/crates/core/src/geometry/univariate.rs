//! Truncated univariate power series over exact or floating coefficients.
//!
//! Used to expand graph functions of circles and spheres, the geodesic
//! distance of the round sphere, and arclength-parametrized planar curves.

use crate::expr::Rat;

/// The coefficient operations the series routines need.
pub trait Coef: Clone + PartialEq {
    fn zero() -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;

    fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Coef for Rat {
    fn zero() -> Self {
        Rat::ZERO
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Rat::new(n, d)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Coef for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Product truncated after degree `order`.
pub fn mul<T: Coef>(a: &[T], b: &[T], order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `f ∘ g` for `g(0) = 0`, truncated after degree `order`.
pub fn compose<T: Coef>(f: &[T], g: &[T], order: usize) -> Vec<T> {
    assert!(g.first().map_or(true, Coef::is_zero), "inner series must vanish at 0");
    let mut out = vec![T::zero(); order + 1];
    for c in f.iter().take(order + 1).rev() {
        out = mul(&out, g, order);
        out[0] = out[0].add(c);
    }
    out
}

/// Compositional inverse of `g` with `g(0) = 0`, `g'(0) ≠ 0`.
pub fn revert<T: Coef>(g: &[T], order: usize) -> Vec<T> {
    assert!(g.len() > 1 && !g[1].is_zero(), "series is not invertible");
    // Newton-free fixed point: h ← (t − (g∘h − g₁h))/g₁, one degree per pass.
    let g1 = g[1].clone();
    let mut t = vec![T::zero(); order + 1];
    if order >= 1 {
        t[1] = T::one();
    }
    let mut h = vec![T::zero(); order + 1];
    for _ in 0..order {
        let gh = compose(g, &h, order);
        let mut next = vec![T::zero(); order + 1];
        for d in 1..=order {
            let nonlinear = gh[d].sub(&g1.mul(&h[d]));
            next[d] = t[d].sub(&nonlinear).div(&g1);
        }
        h = next;
    }
    h
}

/// Taylor coefficients of `(1 + x)^{p/q}` up to `order`.
pub fn binomial_series<T: Coef>(p: i64, q: i64, order: usize) -> Vec<T> {
    let a = T::from_ratio(p, q);
    let mut out = Vec::with_capacity(order + 1);
    let mut c = T::one();
    for k in 0..=order {
        out.push(c.clone());
        let factor = a.sub(&T::from_ratio(k as i64, 1)).div(&T::from_ratio(k as i64 + 1, 1));
        c = c.mul(&factor);
    }
    out
}

/// Taylor coefficients of `cos` (if `even`) or `sin` up to `order`.
pub fn trig_series<T: Coef>(even: bool, order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    let mut fact: i64 = 1;
    for k in 0..=order {
        if k > 0 {
            fact = fact.checked_mul(k as i64).expect("trig series order too large");
        }
        if (k % 2 == 0) == even {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            out[k] = T::from_ratio(sign, fact);
        }
    }
    out
}

/// Antiderivative vanishing at 0, truncated after degree `order`.
pub fn integrate<T: Coef>(f: &[T], order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    for (k, c) in f.iter().enumerate() {
        if k < order {
            out[k + 1] = c.div(&T::from_ratio(k as i64 + 1, 1));
        }
    }
    out
}

/// Taylor coefficients of `θ²` as a power series in `u = 1 − cos θ`.
///
/// `u = Σ_{k≥1} (−1)^{k+1} s^k/(2k)!` with `s = θ²`; the result is the
/// reversion of that series.
pub fn theta_sq_of_one_minus_cos(order: usize) -> Vec<Rat> {
    let mut u = vec![Rat::ZERO; order + 1];
    let mut fact = Rat::ONE;
    for k in 1..=order {
        fact = &fact * &Rat::int(((2 * k - 1) * (2 * k)) as i64);
        let v = fact.recip();
        u[k] = if k % 2 == 1 { v } else { -v };
    }
    revert(&u, order)
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64) -> Rat {
    assert!(x.is_finite(), "cannot rationalize {x}");
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = match (a.checked_mul(p1).and_then(|t| t.checked_add(p0)), a.checked_mul(q1).and_then(|t| t.checked_add(q0))) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac.abs() < 1e-18 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rat::int(x.round() as i64);
    }
    Rat::new(p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversion_inverts() {
        let g: Vec<Rat> = vec![Rat::ZERO, Rat::int(2), Rat::new(1, 3), Rat::int(-1), Rat::new(5, 7)];
        let h = revert(&g, 4);
        let id = compose(&g, &h, 4);
        assert_eq!(id, vec![Rat::ZERO, Rat::ONE, Rat::ZERO, Rat::ZERO, Rat::ZERO]);
    }

    #[test]
    fn arccos_square_series() {
        // θ² = 4·arcsin²(√(u/2)) = 2u + u²/3 + 4u³/45 + u⁴/35 + …
        let s = theta_sq_of_one_minus_cos(4);
        assert_eq!(s[1..], [Rat::int(2), Rat::new(1, 3), Rat::new(4, 45), Rat::new(1, 35)]);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.375, 1000), Rat::new(3, 8));
        assert_eq!(rationalize(-2.5, 1000), Rat::new(-5, 2));
        let r = rationalize(std::f64::consts::PI, 1_000_000);
        assert!((r.to_f64() - std::f64::consts::PI).abs() < 1e-11);
    }
}
