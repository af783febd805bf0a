//! Exact coefficients of the unit disk and the truncated expansion at a few scales.
//!
//! `cargo run -p magnitude-core --example disk_coefficients`

use magnitude_core::assembly::{coefficients, evaluate_expansion};
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, Shape};
use magnitude_core::render::{render_table, Format};

fn main() {
    let k = 4;
    let spec = builtin_spec(&Shape::Disk { r: Rat::ONE }, k + 2).expect("built-in disk");
    let table = coefficients(&spec, k, Default::default()).expect("disk coefficients");
    print!("{}", render_table(&table, Format::Text));

    for r in [5.0, 10.0, 40.0] {
        let v = evaluate_expansion(&table, r);
        println!("R = {r:>4}: Σ m_k R^(2-k) = {:.6} + O(R^{})", v.total, v.remainder_power);
    }
}
