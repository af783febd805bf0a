//! Geometry specs as JSON: serialize a built-in shape, read it back, and
//! compute from a hand-written spec.
//!
//! `cargo run -p magnitude-core --example spec_files`

use magnitude_core::assembly::coefficients;
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, parse_spec, spec_to_json, Shape};
use magnitude_core::render::{render_table, Format};

// A flat torus of area 1: the squared distance is |v|² in every chart.
const FLAT_TORUS: &str = r#"{
  "label": "flat torus",
  "kind": "distance_jets",
  "n": 2,
  "interior_volume": "1",
  "charts": [{ "id": "flat", "weight": "1", "metric": { "0,0": "1", "1,1": "1" } }]
}"#;

fn main() {
    let disk = builtin_spec(&Shape::Disk { r: Rat::new(1, 2) }, 4).expect("disk spec");
    let text = serde_json::to_string_pretty(&spec_to_json(&disk)).expect("json");
    println!("{text}");
    let back = parse_spec(&text).expect("round trip");
    assert_eq!(back, disk);

    let torus = parse_spec(FLAT_TORUS).expect("torus spec");
    let table = coefficients(&torus, 3, Default::default()).expect("torus coefficients");
    print!("{}", render_table(&table, Format::Text));
}
