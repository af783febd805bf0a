//! Acceptance checks: one PASS/FAIL line per criterion.
//!
//! Runs with `cargo test -p magnitude-cli --test acceptance`; exits nonzero
//! if any criterion fails.

use std::process::Command;
use std::time::Instant;

use magnitude_core::assembly::{coefficients, CoefficientTable};
use magnitude_core::expr::{Rat, Scalar};
use magnitude_core::geometry::{builtin_spec, jets_required_order, Kind, Shape};
use magnitude_core::selftest::{run_all, SelfTestConfig};
use magnitude_oracle::fit::{fit_coefficients, geometric_ladder};
use magnitude_oracle::profile::weight_profile;
use magnitude_oracle::taylor::taylor_zero;
use magnitude_oracle::{finite_magnitude, sample_shape, NumericShape, PointCloud};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn table(shape: Shape, k: u32) -> Result<CoefficientTable, String> {
    let spec = builtin_spec(&shape, jets_required_order(k, Kind::EuclideanDomain).max(3)).map_err(|e| e.to_string())?;
    coefficients(&spec, k, Default::default()).map_err(|e| e.to_string())
}

fn rat(s: &str) -> Scalar {
    Scalar::from_rat(s.parse().expect("rational literal"))
}

/// Exact `m_k` against a list of rationals.
fn expect_m(t: &CoefficientTable, expected: &[&str]) -> Check {
    let got: Vec<String> = t.rows.iter().map(|r| r.m.to_string()).collect();
    let ok = t.rows.len() == expected.len() && t.rows.iter().zip(expected).all(|(r, e)| r.m == rat(e));
    let msg = format!("{}: m = ({})", t.label, got.join(", "));
    if ok {
        Ok(msg)
    } else {
        Err(format!("{msg}, expected ({})", expected.join(", ")))
    }
}

fn builtin(s: Shape) -> NumericShape {
    NumericShape::Builtin(s)
}

fn c1() -> Check {
    expect_m(&table(Shape::Disk { r: Rat::ONE }, 2)?, &["1/2", "3/2", "9/8"])
}

fn c2() -> Check {
    let mut c3 = Vec::new();
    let mut c4 = Vec::new();
    for r in 1..=3 {
        let t = table(Shape::Disk { r: Rat::int(r) }, 4)?;
        c3.push(&t.rows[3].c * &Scalar::int(r));
        c4.push(&t.rows[4].c * &Scalar::int(r * r));
    }
    let constant = |v: &[Scalar]| v.iter().all(|x| *x == v[0]);
    let msg = format!("c_3·r = {}, c_4·r² = {} for r = 1, 2, 3", c3[0], c4[0]);
    if constant(&c3) && constant(&c4) && !c3[0].is_zero() {
        Ok(msg)
    } else {
        Err(format!("c_3·r = {c3:?}, c_4·r² = {c4:?}"))
    }
}

fn c3() -> Check {
    let unit = expect_m(&table(Shape::Ball3 { r: Rat::ONE }, 5)?, &["1/6", "1", "2", "1", "0", "0"])?;
    let two = expect_m(&table(Shape::Ball3 { r: Rat::int(2) }, 3)?, &["8/6", "4", "4", "1"])?;
    Ok(format!("{unit}; {two}"))
}

fn c4() -> Check {
    let t = table(Shape::Shell3 { r_in: Rat::new(1, 2), r_out: Rat::new(3, 2) }, 3)?;
    expect_m(&t, &["13/24", "5/2", "2", "2"])
}

fn c5() -> Check {
    let t = table(Shape::SphereGeodesic { r: Rat::ONE }, 2)?;
    expect_m(&t, &["2", "0", "2"]).map(|s| format!("{s} (distance-jet chart; constant term = χ(S²))"))
}

fn c6() -> Check {
    let cfg = SelfTestConfig { dims: vec![2, 3], max_order: 3, charts: 20, seed: 1, ..Default::default() };
    let report = run_all(&cfg);
    let mut suites: Vec<String> = report.checks.iter().map(|c| c.suite.clone()).collect();
    suites.dedup();
    let summary = suites
        .iter()
        .map(|s| {
            let all: Vec<_> = report.checks.iter().filter(|c| &c.suite == s).collect();
            format!("{s} {}/{}", all.iter().filter(|c| c.passed).count(), all.len())
        })
        .collect::<Vec<_>>()
        .join(", ");
    if report.passed() {
        Ok(summary)
    } else {
        let first = report.failures().next().map(|c| format!("{}/{}: {}", c.suite, c.name, c.detail)).unwrap_or_default();
        Err(format!("{summary}; first failure {first}"))
    }
}

fn c7() -> Check {
    let interval = sample_shape(&builtin(Shape::Interval { length: Rat::ONE }), 2001, 7).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for r in [10.0, 20.0, 40.0] {
        let m = finite_magnitude(&interval, r).map_err(|e| e.to_string())?;
        worst = worst.max((m / (1.0 + r / 2.0) - 1.0).abs());
    }
    let mut two: f64 = 0.0;
    for (d, r) in [(0.3, 1.0), (1.0, 2.5), (2.0, 7.0)] {
        let m = finite_magnitude(&PointCloud::two_point(d), r).map_err(|e| e.to_string())?;
        two = two.max((m - 2.0 / (1.0 + (-r * d).exp())).abs());
    }
    let disk = sample_shape(&builtin(Shape::Disk { r: Rat::ONE }), 4000, 1).map_err(|e| e.to_string())?;
    let samples = geometric_ladder(3.0, 15.0, 8)
        .into_iter()
        .map(|r| finite_magnitude(&disk, r).map(|m| (r, m)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let fit = fit_coefficients(&samples, 2, 2).map_err(|e| e.to_string())?;
    let (e0, e1) = (fit.coeffs[0] / 0.5 - 1.0, fit.coeffs[1] / 1.5 - 1.0);
    let msg = format!(
        "interval max rel. error {worst:.2e}; two-point error {two:.1e}; disk fit m_0 {:+.2}%, m_1 {:+.2}%",
        100.0 * e0,
        100.0 * e1
    );
    if worst < 0.01 && two < 1e-12 && e0.abs() < 0.02 && e1.abs() < 0.05 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c8() -> Check {
    let c = sample_shape(&builtin(Shape::Interval { length: Rat::ONE }), 1001, 1).map_err(|e| e.to_string())?;
    let t = taylor_zero(&c, 3).map_err(|e| e.to_string())?;
    let l = &t.lambdas;
    let msg = format!("λ = ({:.6}, {:.1e}, {:.1e}), cond(Z_1) = {:.2e}", l[0], l[1], l[2], t.cond);
    if (l[0] - 0.5).abs() <= 0.005 && l[1].abs() <= 0.01 && l[2].abs() <= 0.01 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c9() -> Check {
    let c = sample_shape(&builtin(Shape::SquareNumeric { side: Rat::ONE }), 10_000, 1).map_err(|e| e.to_string())?;
    let lo = weight_profile(&c, 10.0, Some(0.2)).map_err(|e| e.to_string())?;
    let hi = weight_profile(&c, 40.0, Some(0.2)).map_err(|e| e.to_string())?;
    let msg = format!(
        "interior deviation {:.2e} (R=10) → {:.2e} (R=40); boundary/interior density {:.1}, {:.1}",
        lo.max_deviation, hi.max_deviation, lo.boundary_ratio, hi.boundary_ratio
    );
    if hi.max_deviation <= 0.5 * lo.max_deviation && lo.boundary_ratio > 1.0 && hi.boundary_ratio > 1.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_cli(args: &[&str], threads: usize) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_magnitude"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn c10() -> Check {
    let configs: [&[&str]; 5] = [
        &["coeffs", "--shape", "disk", "--max-order", "2", "--no-meta"],
        &["coeffs", "--shape", "shell3", "--max-order", "3", "--format", "csv", "--no-meta"],
        &["numeric", "--shape", "interval", "--points", "801", "--rvalues", "5,10,20", "--max-order", "1", "--no-meta"],
        &["taylor0", "--shape", "interval", "--points", "401", "--format", "csv", "--no-meta"],
        &["weights", "--shape", "square-numeric", "--points", "900", "--rvalues", "5,10", "--format", "text", "--no-meta"],
    ];
    for args in configs {
        let reference = run_cli(args, 1)?;
        for threads in [1, 4] {
            if run_cli(args, threads)? != reference {
                return Err(format!("{} output differs with {threads} threads", args[0]));
            }
        }
    }
    Ok(format!("{} configurations byte-identical across repeated runs with 1 and 4 threads", configs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("disk coefficients", c1),
        ("disk c_3, c_4 structure", c2),
        ("ball in R^3", c3),
        ("shell in R^3", c4),
        ("geodesic sphere", c5),
        ("symbolic self-tests", c6),
        ("numeric oracle", c7),
        ("Taylor at zero", c8),
        ("weight localization", c9),
        ("determinism", c10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL  {name} ({secs:.1} s): {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("all 10 criteria passed");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
