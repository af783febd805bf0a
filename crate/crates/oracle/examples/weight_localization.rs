//! The weight density of a square flattens in the interior as `R` grows,
//! while its excess concentrates at the boundary.
//!
//! `cargo run --release -p magnitude-oracle --example weight_localization`

use magnitude_core::expr::Rat;
use magnitude_core::geometry::Shape;
use magnitude_core::render::Format;
use magnitude_oracle::report::{render_weights, weights_report};
use magnitude_oracle::NumericShape;

fn main() {
    let shape = NumericShape::Builtin(Shape::SquareNumeric { side: Rat::ONE });
    let out = weights_report(&shape, 2500, 1, &[2.5, 5.0, 10.0, 20.0], Some(0.2)).expect("weights");
    print!("{}", render_weights(&out, Format::Text));
}
