//! Geometric quantities read off exact coefficients: the isoperimetric
//! ratio from `c_0, c_1`, and the curvature structure of `c_3, c_4` for
//! circles of several radii.
//!
//! `cargo run -p magnitude-core --example isoperimetry`

use magnitude_core::assembly::{coefficients, isoperimetric_ratio};
use magnitude_core::expr::{Rat, Scalar};
use magnitude_core::geometry::{builtin_spec, Shape};

fn main() {
    for shape in [Shape::Disk { r: Rat::ONE }, Shape::Ellipse { a: Rat::int(2), b: Rat::ONE }] {
        let spec = builtin_spec(&shape, 3).expect("spec");
        let table = coefficients(&spec, 1, Default::default()).expect("coefficients");
        println!("{}: isoperimetric ratio {:.6}", table.label, isoperimetric_ratio(&table));
    }
    for r in 1..=4 {
        let spec = builtin_spec(&Shape::Disk { r: Rat::int(r) }, 6).expect("spec");
        let t = coefficients(&spec, 4, Default::default()).expect("coefficients");
        let c3 = &t.rows[3].c * &Scalar::int(r);
        let c4 = &t.rows[4].c * &Scalar::int(r * r);
        println!("disk({r}): c_3·r = {c3}, c_4·r² = {c4}");
    }
}
