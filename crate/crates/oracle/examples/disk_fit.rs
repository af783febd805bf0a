//! Exact disk coefficients next to a least-squares fit of sampled magnitudes.
//!
//! `cargo run --release -p magnitude-oracle --example disk_fit`

use magnitude_core::assembly::coefficients;
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, Shape};
use magnitude_core::render::Format;
use magnitude_oracle::fit::geometric_ladder;
use magnitude_oracle::report::{compare, render_compare, NumericRun};
use magnitude_oracle::NumericShape;

fn main() {
    let shape = Shape::Disk { r: Rat::ONE };
    let table = coefficients(&builtin_spec(&shape, 4).expect("disk spec"), 2, Default::default()).expect("coefficients");
    // Keep 1/R, the kernel length, well above the sample spacing.
    let run = NumericRun { points: 3000, seed: 1, r_values: geometric_ladder(3.0, 15.0, 8), fit_order: None, fit_weight: None };
    let report = compare(&table, &NumericShape::Builtin(shape), &run).expect("fit");
    print!("{}", render_compare(&report, Format::Text));
}
