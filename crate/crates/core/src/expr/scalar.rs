//! Exact scalars in ℚ(i)[√π, 1/√π].
//!
//! Volumes of unit balls bring half-integer powers of π into every normalized
//! coefficient, so a scalar is a finite Laurent sum `Σ c_p (√π)^p` with
//! Gaussian-rational `c_p`.  The canonical form keeps only nonzero
//! coefficients, sorted by the power `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::gauss::Cq;
use super::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<i32, Cq>,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    pub fn one() -> Scalar {
        Scalar::from_cq(Cq::ONE)
    }

    pub fn from_cq(c: Cq) -> Scalar {
        Scalar::monomial(c, 0)
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar::from_cq(Cq::real(r))
    }

    pub fn int(v: i64) -> Scalar {
        Scalar::from_rat(Rat::int(v))
    }

    /// `c·(√π)^p`.
    pub fn monomial(c: Cq, p: i32) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        Scalar { terms }
    }

    pub fn pi() -> Scalar {
        Scalar::monomial(Cq::ONE, 2)
    }

    pub fn sqrt_pi_pow(p: i32) -> Scalar {
        Scalar::monomial(Cq::ONE, p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Cq::is_real)
    }

    /// Terms as `(power of √π, coefficient)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Cq)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    /// The coefficient of `(√π)^0` when the scalar has no π content.
    pub fn as_cq(&self) -> Option<Cq> {
        match self.terms.len() {
            0 => Some(Cq::ZERO),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.as_cq().filter(Cq::is_real).map(|c| c.re)
    }

    /// The single term `(c, p)` if the scalar is a monomial.
    pub fn as_monomial(&self) -> Option<(Cq, i32)> {
        if self.terms.len() == 1 {
            let (p, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *p))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Cq) -> Scalar {
        let mut out = Scalar::zero();
        for (p, v) in &self.terms {
            out.push(*p, v * c);
        }
        out
    }

    fn push(&mut self, p: i32, c: Cq) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p).or_insert(Cq::ZERO);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    /// Division by a monomial; `None` when the divisor is not a monomial.
    pub fn div_monomial(&self, d: &Scalar) -> Option<Scalar> {
        let (c, p) = d.as_monomial()?;
        let inv = c.recip();
        let mut out = Scalar::zero();
        for (q, v) in &self.terms {
            out.push(q - p, v * &inv);
        }
        Some(out)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let sp = std::f64::consts::PI.sqrt();
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, c) in &self.terms {
            let f = sp.powi(*p);
            re += c.re.to_f64() * f;
            im += c.im.to_f64() * f;
        }
        (re, im)
    }

    /// Real part as a float; callers check `is_real` first when exactness matters.
    pub fn re_f64(&self) -> f64 {
        self.to_f64().0
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.push(*p, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (p, a) in &self.terms {
            for (q, b) in &o.terms {
                out.push(p + q, a * b);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Scalar {
        Scalar::from_rat(r)
    }
}

impl From<Cq> for Scalar {
    fn from(c: Cq) -> Scalar {
        Scalar::from_cq(c)
    }
}

fn fmt_coeff(c: &Cq) -> String {
    if !c.re.is_zero() && !c.im.is_zero() {
        format!("({c})")
    } else {
        c.to_string()
    }
}

fn fmt_pi(p: i32) -> String {
    match p {
        2 => "pi".to_string(),
        p if p % 2 == 0 => format!("pi^{{{}}}", p / 2),
        p => format!("pi^{{{p}/2}}"),
    }
}

impl fmt::Display for Scalar {
    /// Renders in the scalar-string grammar: a Gaussian rational optionally
    /// followed by `*pi^{k/2}`; sums join such terms with ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                if *p == 0 {
                    c.to_string()
                } else if c == &Cq::ONE {
                    fmt_pi(*p)
                } else {
                    format!("{}*{}", fmt_coeff(c), fmt_pi(*p))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error for malformed scalar strings.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

fn parse_gaussian(s: &str) -> Option<Cq> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if t.is_empty() {
        return None;
    }
    if let Some(body) = t.strip_suffix('i') {
        // Split `a+bi` / `a-bi` at the last sign that is not leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/' {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im.trim() {
            "" | "+" => "1",
            "-" => "-1",
            v => v.trim_start_matches('+'),
        };
        let re: Rat = re.trim().parse().ok()?;
        let im: Rat = im.trim().parse().ok()?;
        Some(Cq::new(re, im))
    } else {
        Some(Cq::real(t.parse().ok()?))
    }
}

fn parse_pi_power(s: &str) -> Option<i32> {
    let t = s.trim();
    if t == "pi" {
        return Some(2);
    }
    let exp = t.strip_prefix("pi^")?.trim();
    let exp = exp.trim_start_matches('{').trim_end_matches('}');
    match exp.split_once('/') {
        Some((k, "2")) => k.trim().parse().ok(),
        Some(_) => None,
        None => exp.trim().parse::<i32>().ok().map(|m| 2 * m),
    }
}

fn parse_term(s: &str) -> Option<Scalar> {
    let t = s.trim();
    if let Some(p) = parse_pi_power(t) {
        return Some(Scalar::sqrt_pi_pow(p));
    }
    if let Some(idx) = t.find("pi") {
        let (coef, pi) = t.split_at(idx);
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = if coef.is_empty() { Cq::ONE } else { parse_gaussian(coef)? };
        return Some(Scalar::monomial(c, parse_pi_power(pi)?));
    }
    Some(Scalar::from_cq(parse_gaussian(t)?))
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Scalar, ParseScalarError> {
        let err = || ParseScalarError(s.to_string());
        let mut acc = Scalar::zero();
        for part in s.split(" + ") {
            acc = &acc + &parse_term(part).ok_or_else(err)?;
        }
        Ok(acc)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Volume of the unit ball in ℝ^k as an exact scalar.
pub fn omega(k: u32) -> Scalar {
    if k % 2 == 0 {
        let m = k / 2;
        Scalar::monomial(Cq::real(Rat::factorial(m).recip()), k as i32)
    } else {
        // Γ(k/2 + 1) = √π · (k/2)(k/2 − 1)⋯(1/2)
        let mut g = Rat::ONE;
        let mut x = Rat::new(k as i64, 2);
        while x.signum() > 0 {
            g = &g * &x;
            x = &x - &Rat::ONE;
        }
        Scalar::monomial(Cq::real(g.recip()), k as i32 - 1)
    }
}

/// `n!·ω_n`, the total mass of `e^{-|x|}` on ℝ^n.
pub fn n_fact_omega(n: u32) -> Scalar {
    omega(n).scale(&Cq::real(Rat::factorial(n)))
}
