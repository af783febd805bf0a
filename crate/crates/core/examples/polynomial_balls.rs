//! Odd-dimensional balls have polynomial magnitude functions: the exact
//! coefficients stop after the constant term.  The shell exercises the
//! inner boundary, whose normal points into the hole.
//!
//! `cargo run --release -p magnitude-core --example polynomial_balls`

use magnitude_core::assembly::coefficients;
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, Shape};
use magnitude_core::render::{render_table, Format};

fn main() {
    let shapes = [
        (Shape::Ball3 { r: Rat::ONE }, 5),
        (Shape::Ball3 { r: Rat::int(2) }, 3),
        (Shape::Shell3 { r_in: Rat::new(1, 2), r_out: Rat::new(3, 2) }, 3),
    ];
    for (shape, k) in shapes {
        let spec = builtin_spec(&shape, k + 2).expect("built-in shape");
        let table = coefficients(&spec, k, Default::default()).expect("coefficients");
        print!("{}", render_table(&table, Format::Text));
        println!();
    }
}
