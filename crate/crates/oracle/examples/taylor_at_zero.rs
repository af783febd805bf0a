//! Power series of the magnitude at `R = 0` from the `Z_1` recursion.
//! For the interval the exact answer is `1 + R/2`, so `λ_k` vanishes for `k ≥ 2`.
//!
//! `cargo run --release -p magnitude-oracle --example taylor_at_zero`

use magnitude_core::expr::Rat;
use magnitude_core::geometry::Shape;
use magnitude_core::render::Format;
use magnitude_oracle::report::{render_taylor, taylor_report};
use magnitude_oracle::taylor::expectation_e;
use magnitude_oracle::{sample_shape, NumericShape};

fn main() {
    let shape = NumericShape::Builtin(Shape::Interval { length: Rat::ONE });
    let out = taylor_report(&shape, 1001, 1, 4).expect("taylor series");
    print!("{}", render_taylor(&out, Format::Text));

    let cloud = sample_shape(&shape, 1001, 1).expect("sample");
    for t in [0.0, 1.0, 4.0] {
        println!("e({t}) = {:.8}", expectation_e(&cloud, t).expect("quadrature"));
    }
}
