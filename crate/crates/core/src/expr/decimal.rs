//! Correctly rounded decimal renderings of exact scalars.
//!
//! The real part `Σ c_p (√π)^p` is evaluated in fixed point with guard digits,
//! using a stored expansion of π and an integer square root for √π.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::scalar::Scalar;

const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

/// Guard digits carried beyond the requested precision.
const GUARD: usize = 30;

fn pow10(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e)
}

/// Rounds `num/den` to the nearest integer, ties away from zero.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if (&r * 2u32).abs() >= den.abs() {
        if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
            q - 1u32
        } else {
            q + 1u32
        }
    } else {
        q
    }
}

/// `(√π)^p · 10^scale`, rounded.
fn sqrt_pi_pow_fixed(p: i32, scale: usize) -> BigInt {
    let s = pow10(scale);
    let avail = PI_DIGITS.len() - 1;
    let pi: BigInt = if scale <= avail {
        PI_DIGITS[..=scale].parse().unwrap()
    } else {
        PI_DIGITS.parse::<BigInt>().unwrap() * pow10(scale - avail)
    };
    let sqrt_pi = (&pi * &s).sqrt();
    let mut acc = s.clone();
    if p >= 0 {
        for _ in 0..p {
            acc = div_round(&(&acc * &sqrt_pi), &s);
        }
    } else {
        for _ in 0..(-p) {
            acc = div_round(&(&acc * &s), &sqrt_pi);
        }
    }
    acc
}

/// The real part of `x` with `digits` significant digits, in plain notation.
///
/// Exact zero renders as `0`.  Precision is limited by the stored digits of
/// π to roughly 90 significant digits.
pub fn to_decimal(x: &Scalar, digits: usize) -> String {
    assert!(digits >= 1);
    let max_pow = x.terms().map(|(p, _)| p.unsigned_abs() as usize).max().unwrap_or(0);
    let scale = digits + GUARD + 2 * max_pow;
    let s = pow10(scale);
    let mut total = BigInt::zero();
    for (p, c) in x.terms() {
        if c.re.is_zero() {
            continue;
        }
        let f = if p == 0 { s.clone() } else { sqrt_pi_pow_fixed(p, scale) };
        total += div_round(&(c.re.numer() * f), &c.re.denom());
    }
    if total.is_zero() {
        return "0".to_string();
    }
    let negative = total.is_negative();
    let mag = total.abs().to_string();
    // Keep `digits` leading digits, rounding half up on the next one.
    let keep = digits.min(mag.len());
    let mut lead: BigInt = mag[..keep].parse().unwrap();
    if mag.len() > keep && mag.as_bytes()[keep] >= b'5' {
        lead += 1u32;
    }
    let mut lead_str = lead.to_string();
    // Number of digits before the decimal point in `mag·10^{-scale}`.
    let mut int_digits = mag.len() as i64 - scale as i64;
    if lead_str.len() > keep {
        lead_str.pop();
        int_digits += 1;
    }
    let body = if int_digits <= 0 {
        format!("0.{}{}", "0".repeat((-int_digits) as usize), lead_str)
    } else if int_digits as usize >= lead_str.len() {
        format!("{}{}", lead_str, "0".repeat(int_digits as usize - lead_str.len()))
    } else {
        let (a, b) = lead_str.split_at(int_digits as usize);
        format!("{a}.{b}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Cq, Rat};

    #[test]
    fn rationals() {
        assert_eq!(to_decimal(&Scalar::from_rat(Rat::new(9, 8)), 5), "1.1250");
        assert_eq!(to_decimal(&Scalar::from_rat(Rat::new(-1, 3)), 4), "-0.3333");
        assert_eq!(to_decimal(&Scalar::from_rat(Rat::new(2, 3)), 3), "0.667");
        assert_eq!(to_decimal(&Scalar::int(1234), 2), "1200");
        assert_eq!(to_decimal(&Scalar::from_rat(Rat::new(999, 1000)), 2), "1.0");
        assert_eq!(to_decimal(&Scalar::zero(), 5), "0");
    }

    #[test]
    fn powers_of_pi() {
        assert_eq!(to_decimal(&Scalar::pi(), 20), "3.1415926535897932385");
        assert_eq!(to_decimal(&Scalar::sqrt_pi_pow(1), 20), "1.7724538509055160273");
        assert_eq!(to_decimal(&Scalar::sqrt_pi_pow(-2), 15), "0.318309886183791");
        let x = Scalar::monomial(Cq::real(Rat::new(9, 4)), 2);
        assert_eq!(to_decimal(&x, 12), "7.06858347058");
    }
}
