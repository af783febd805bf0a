//! Checks `c_k(rX) = r^{n−k} c_k(X)` exactly by recomputing the scaled
//! geometry from scratch.
//!
//! `cargo run -p magnitude-core --example scaling_law`

use magnitude_core::assembly::scaling_check;
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, Shape};

fn main() {
    let factor = Rat::new(5, 3);
    for shape in [Shape::Disk { r: Rat::ONE }, Shape::Ellipse { a: Rat::int(2), b: Rat::ONE }, Shape::CircleSubmanifold { r: Rat::ONE }] {
        let spec = builtin_spec(&shape, 6).expect("built-in shape");
        let report = scaling_check(&spec, 4, &factor, Default::default()).expect("coefficients");
        println!("{} scaled by {}: {}", report.label, report.r, if report.passed() { "exact" } else { "MISMATCH" });
        for row in &report.rows {
            println!("  c_{}(rX) ≈ {:.12}", row.k, row.actual.re_f64());
        }
    }
}
