//! A quick run of the exact self-test suites with few random charts.
//!
//! `cargo run --release -p magnitude-core --example self_tests`

use magnitude_core::render::{render_selftest, Format};
use magnitude_core::selftest::{run_all, SelfTestConfig};

fn main() {
    let cfg = SelfTestConfig { dims: vec![2], max_order: 2, charts: 3, seed: 11, ..Default::default() };
    let report = run_all(&cfg);
    print!("{}", render_selftest(&report, Format::Text));
}
