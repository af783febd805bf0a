//! A cylinder `S¹ × [0, L]` against its base circle: the normalized ratio of
//! magnitudes grows like `LR + 2`.
//!
//! `cargo run --release -p magnitude-oracle --example cylinder_product`

use magnitude_core::expr::Rat;
use magnitude_core::geometry::Shape;
use magnitude_oracle::{finite_magnitude, sample_shape, unit_factor, NumericShape};

fn main() {
    let cyl = sample_shape(&NumericShape::Cylinder { r: Rat::ONE, length: Rat::ONE }, 3000, 1).expect("cylinder");
    let base = sample_shape(&NumericShape::Builtin(Shape::CircleSubmanifold { r: Rat::ONE }), 1500, 1).expect("circle");
    for r in [10.0, 20.0, 30.0] {
        let ratio = unit_factor(2) * finite_magnitude(&cyl, r).expect("cylinder")
            / (unit_factor(1) * finite_magnitude(&base, r).expect("circle"));
        println!("R = {r:>4}: ratio {ratio:.3}, LR + 2 = {}", r + 2.0);
    }
}
