//! The round sphere with its geodesic distance, given only by the Taylor
//! jets of the squared distance in one chart.  The constant coefficient is
//! the Euler characteristic.
//!
//! `cargo run -p magnitude-core --example geodesic_sphere`

use magnitude_core::assembly::coefficients;
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, Shape};
use magnitude_core::render::{render_table, Format};

fn main() {
    for r in [Rat::ONE, Rat::int(3)] {
        let spec = builtin_spec(&Shape::SphereGeodesic { r }, 4).expect("sphere spec");
        let table = coefficients(&spec, 2, Default::default()).expect("sphere coefficients");
        print!("{}", render_table(&table, Format::Text));
    }
}
