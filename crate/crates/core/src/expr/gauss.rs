//! Gaussian rationals: exact elements of ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use super::rat::Rat;

/// `re + im·i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cq {
    pub re: Rat,
    pub im: Rat,
}

impl Cq {
    pub const ZERO: Cq = Cq { re: Rat::ZERO, im: Rat::ZERO };
    pub const ONE: Cq = Cq { re: Rat::ONE, im: Rat::ZERO };

    pub fn new(re: Rat, im: Rat) -> Cq {
        Cq { re, im }
    }

    pub fn real(re: Rat) -> Cq {
        Cq { re, im: Rat::ZERO }
    }

    pub fn int(v: i64) -> Cq {
        Cq::real(Rat::int(v))
    }

    pub fn ratio(n: i64, d: i64) -> Cq {
        Cq::real(Rat::new(n, d))
    }

    pub fn i() -> Cq {
        Cq { re: Rat::ZERO, im: Rat::ONE }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Cq {
        match k.rem_euclid(4) {
            0 => Cq::ONE,
            1 => Cq::i(),
            2 => Cq::int(-1),
            _ => -Cq::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Cq {
        Cq { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Rat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self) -> Cq {
        let d = self.norm_sqr();
        assert!(!d.is_zero(), "reciprocal of zero");
        Cq { re: &self.re / &d, im: -(&self.im / &d) }
    }

    pub fn scale(&self, r: &Rat) -> Cq {
        Cq { re: &self.re * r, im: &self.im * r }
    }

    pub fn pow(&self, e: i32) -> Cq {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Cq::ONE;
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a Cq> for &'a Cq {
    type Output = Cq;
    fn add(self, o: &Cq) -> Cq {
        Cq { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a Cq> for &'a Cq {
    type Output = Cq;
    fn sub(self, o: &Cq) -> Cq {
        Cq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a Cq> for &'a Cq {
    type Output = Cq;
    fn mul(self, o: &Cq) -> Cq {
        if self.im.is_zero() {
            return Cq { re: &self.re * &o.re, im: &self.re * &o.im };
        }
        if o.im.is_zero() {
            return Cq { re: &self.re * &o.re, im: &self.im * &o.re };
        }
        Cq {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl<'a> Div<&'a Cq> for &'a Cq {
    type Output = Cq;
    fn div(self, o: &Cq) -> Cq {
        self * &o.recip()
    }
}

impl Neg for &Cq {
    type Output = Cq;
    fn neg(self) -> Cq {
        Cq { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Cq {
    type Output = Cq;
    fn neg(self) -> Cq {
        -&self
    }
}

impl AddAssign<&Cq> for Cq {
    fn add_assign(&mut self, o: &Cq) {
        if !o.re.is_zero() {
            self.re = &self.re + &o.re;
        }
        if !o.im.is_zero() {
            self.im = &self.im + &o.im;
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cq> for Cq {
            type Output = Cq;
            fn $m(self, o: Cq) -> Cq {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Cq> for Cq {
            type Output = Cq;
            fn $m(self, o: &Cq) -> Cq {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<Rat> for Cq {
    fn from(r: Rat) -> Cq {
        Cq::real(r)
    }
}

impl fmt::Display for Cq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.signum() < 0 {
                    write!(f, "{}-{}i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for Cq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
