//! Finite magnitudes of a sampled interval against the exact `1 + LR/2`.
//!
//! `cargo run --release -p magnitude-oracle --example interval_magnitude`

use magnitude_core::expr::Rat;
use magnitude_core::geometry::Shape;
use magnitude_core::render::Format;
use magnitude_oracle::report::{numeric_report, render_report, NumericRun};
use magnitude_oracle::NumericShape;

fn main() {
    let shape = NumericShape::Builtin(Shape::Interval { length: Rat::ONE });
    let run = NumericRun { points: 2001, seed: 7, r_values: vec![10.0, 20.0, 40.0], fit_order: Some(1), fit_weight: None };
    let report = numeric_report(&shape, &run).expect("interval run");
    print!("{}", render_report(&report, Format::Text));
}
