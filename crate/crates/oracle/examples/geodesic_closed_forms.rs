//! Sampled circles and spheres with geodesic distance against their closed
//! magnitude functions.
//!
//! `cargo run --release -p magnitude-oracle --example geodesic_closed_forms`

use magnitude_core::expr::Rat;
use magnitude_core::geometry::Shape;
use magnitude_oracle::closed_form::ClosedForm;
use magnitude_oracle::{finite_magnitude, sample_shape, NumericShape};

fn main() {
    let cases = [
        (NumericShape::CircleGeodesic { r: Rat::ONE }, 400, [1.0, 3.0, 10.0]),
        (NumericShape::Builtin(Shape::SphereGeodesic { r: Rat::ONE }), 1500, [0.5, 1.0, 2.0]),
    ];
    for (shape, m, scales) in cases {
        let cloud = sample_shape(&shape, m, 1).expect("sample");
        let exact = ClosedForm::for_shape(&shape).expect("closed form");
        println!("{} ({m} points)", cloud.label);
        for r in scales {
            let num = finite_magnitude(&cloud, r).expect("weighting");
            println!("  R = {r:>4}: sampled {num:.6}, exact {:.6}", exact.eval(r));
        }
    }
}
