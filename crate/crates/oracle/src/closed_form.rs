//! Exact magnitude functions of a few model spaces.
//!
//! For the shell `{1 − ε ≤ |x| ≤ 1 + ε} ⊂ ℝ³` the polynomial part uses the
//! leading coefficient `(2ε³ + 6ε)/3!`, which is the shell volume over
//! `3!ω_3`; the remaining terms are evaluated as displayed for the family.
//! The geodesic sphere uses the denominator `1 + e^{−πR}`, the sign for which
//! the magnitude tends to 1 at `R = 0` and which sampled spheres reproduce.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use magnitude_core::geometry::Shape;

use crate::cloud::NumericShape;
use crate::OracleError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `1 + LR/2`.
    Interval { length: f64 },
    /// `(rR)³/3! + (rR)² + 2rR + 1`.
    Ball3 { r: f64 },
    /// The shell between radii `s(1 − ε)` and `s(1 + ε)`.
    Shell3 { eps: f64, scale: f64 },
    /// `πrR/(1 − e^{−πrR})`.
    CircleGeodesic { r: f64 },
    /// `(2(rR)² + 2)/(1 + e^{−πrR})`, which tends to 1 as `R → 0`.
    SphereGeodesic { r: f64 },
}

impl ClosedForm {
    pub const NAMES: [&'static str; 5] = ["interval", "ball3", "shell3", "circle-geodesic", "sphere-geodesic"];

    /// Parses a named closed form with parameters (`length`, `r`, or `eps`
    /// with optional `scale`).
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<ClosedForm, OracleError> {
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        let cf = match name {
            "interval" => ClosedForm::Interval { length: get("length", 1.0) },
            "ball3" => ClosedForm::Ball3 { r: get("r", 1.0) },
            "shell3" => ClosedForm::Shell3 { eps: get("eps", 0.5), scale: get("scale", 1.0) },
            "circle-geodesic" => ClosedForm::CircleGeodesic { r: get("r", 1.0) },
            "sphere-geodesic" => ClosedForm::SphereGeodesic { r: get("r", 1.0) },
            other => return Err(OracleError::Unsupported(format!("no closed form for `{other}`"))),
        };
        cf.check()?;
        Ok(cf)
    }

    fn check(&self) -> Result<(), OracleError> {
        let ok = match *self {
            ClosedForm::Shell3 { eps, scale } => {
                if !(eps > 0.0 && eps <= 1.0) {
                    return Err(OracleError::OutOfRange(format!("shell3 needs 0 < ε ≤ 1, got {eps}")));
                }
                scale > 0.0
            }
            ClosedForm::Interval { length: x }
            | ClosedForm::Ball3 { r: x }
            | ClosedForm::CircleGeodesic { r: x }
            | ClosedForm::SphereGeodesic { r: x } => x > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(OracleError::OutOfRange(format!("{}: size parameters must be positive", self.name())))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::Interval { .. } => "interval",
            ClosedForm::Ball3 { .. } => "ball3",
            ClosedForm::Shell3 { .. } => "shell3",
            ClosedForm::CircleGeodesic { .. } => "circle-geodesic",
            ClosedForm::SphereGeodesic { .. } => "sphere-geodesic",
        }
    }

    /// The closed form matching a sampled shape, if one is known.
    pub fn for_shape(shape: &NumericShape) -> Option<ClosedForm> {
        match shape {
            NumericShape::Builtin(Shape::Interval { length }) => Some(ClosedForm::Interval { length: length.to_f64() }),
            NumericShape::Builtin(Shape::Ball3 { r }) => Some(ClosedForm::Ball3 { r: r.to_f64() }),
            NumericShape::Builtin(Shape::Shell3 { r_in, r_out }) => {
                let (a, b) = (r_in.to_f64(), r_out.to_f64());
                Some(ClosedForm::Shell3 { eps: (b - a) / (b + a), scale: (a + b) / 2.0 })
            }
            NumericShape::Builtin(Shape::SphereGeodesic { r }) => Some(ClosedForm::SphereGeodesic { r: r.to_f64() }),
            NumericShape::CircleGeodesic { r } => Some(ClosedForm::CircleGeodesic { r: r.to_f64() }),
            _ => None,
        }
    }

    /// `𝓜(R)`.
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            ClosedForm::Interval { length } => 1.0 + length * r / 2.0,
            ClosedForm::Ball3 { r: a } => {
                let t = a * r;
                t * t * t / 6.0 + t * t + 2.0 * t + 1.0
            }
            ClosedForm::Shell3 { eps, scale } => shell(eps, scale * r),
            ClosedForm::CircleGeodesic { r: a } => {
                let x = PI * a * r;
                x / -(-x).exp_m1()
            }
            ClosedForm::SphereGeodesic { r: a } => {
                let t = a * r;
                (2.0 * t * t + 2.0) / (1.0 + (-PI * t).exp())
            }
        }
    }

    /// Coefficients `m_k` of `R^{n−k}` in the large-`R` expansion, `k = 0..=n`.
    pub fn expansion(&self) -> Vec<f64> {
        match *self {
            ClosedForm::Interval { length } => vec![length / 2.0, 1.0],
            ClosedForm::Ball3 { r } => vec![r.powi(3) / 6.0, r * r, 2.0 * r, 1.0],
            ClosedForm::Shell3 { eps, scale: s } => {
                let (p, _) = shell_parts(eps, 0.0);
                vec![p[3] * s.powi(3), p[2] * s * s, p[1] * s, p[0]]
            }
            ClosedForm::CircleGeodesic { r } => vec![PI * r, 0.0],
            ClosedForm::SphereGeodesic { r } => vec![2.0 * r * r, 0.0, 2.0],
        }
    }
}

/// Polynomial coefficients (ascending) and the remainder at scale `r`.
fn shell_parts(eps: f64, r: f64) -> ([f64; 4], f64) {
    let poly = [2.0, 4.0 * eps, 2.0 * eps * eps + 2.0, (2.0 * eps.powi(3) + 6.0 * eps) / 6.0];
    if eps == 1.0 {
        // The ball of radius 2: 8/3!·R³ + 4R² + 4R + 1.
        return ([1.0, poly[1], poly[2], poly[3]], 0.0);
    }
    let t = r * (1.0 - eps);
    let num = (-t).exp() * (t * t + 1.0) + 2.0 * t.powi(3) - 3.0 * t * t + 2.0 * t - 1.0;
    let den = (2.0 * t).sinh() - 2.0 * t;
    (poly, if den == 0.0 { f64::NAN } else { num / den })
}

fn shell(eps: f64, r: f64) -> f64 {
    let (p, rem) = shell_parts(eps, r);
    p[0] + r * (p[1] + r * (p[2] + r * p[3])) + rem
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shell(eps: f64) -> ClosedForm {
        ClosedForm::Shell3 { eps, scale: 1.0 }
    }

    #[test]
    fn shell_at_eps_one_is_the_radius_two_ball() {
        for r in [0.5, 1.0, 3.0, 10.0] {
            let expected = 8.0 / 6.0 * r * r * r + 4.0 * r * r + 4.0 * r + 1.0;
            assert!((shell(1.0).eval(r) - expected).abs() < 1e-12 * expected);
            assert!((ClosedForm::Ball3 { r: 2.0 }.eval(r) - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn shell_leading_coefficient_is_volume() {
        // vol/(3!ω_3) for radii 1/2 and 3/2 is 13/24.
        let e = shell(0.5).expansion();
        assert!((e[0] - 13.0 / 24.0).abs() < 1e-15);
        assert_eq!(&e[1..], &[2.5, 2.0, 2.0]);
    }

    #[test]
    fn shell_remainder_decays() {
        let s = shell(0.5);
        let poly = |r: f64| 2.0 + 2.0 * r + 2.5 * r * r + 13.0 / 24.0 * r.powi(3);
        assert!((s.eval(60.0) - poly(60.0)).abs() < 1e-9);
    }

    #[test]
    fn geodesic_forms() {
        let r: f64 = 2.0;
        let circle = ClosedForm::CircleGeodesic { r: 1.0 }.eval(r);
        assert!((circle - PI * r / (1.0 - (-PI * r).exp())).abs() < 1e-12);
        let sphere = ClosedForm::SphereGeodesic { r: 1.0 }.eval(r);
        assert!((sphere - (2.0 * r * r + 2.0) / (1.0 + (-PI * r).exp())).abs() < 1e-12);
        assert!((ClosedForm::SphereGeodesic { r: 1.0 }.eval(1e-9) - 1.0).abs() < 1e-6);
        // Scaling the space by a scales R by a.
        let big = ClosedForm::SphereGeodesic { r: 3.0 }.eval(1.0);
        assert!((big - ClosedForm::SphereGeodesic { r: 1.0 }.eval(3.0)).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_eps() {
        let p = |e: f64| BTreeMap::from([("eps".to_string(), e)]);
        assert!(ClosedForm::from_name("shell3", &p(1.5)).is_err());
        assert!(ClosedForm::from_name("shell3", &p(0.0)).is_err());
        assert!(ClosedForm::from_name("shell3", &p(1.0)).is_ok());
        assert!(ClosedForm::from_name("torus", &p(0.5)).is_err());
    }
}
