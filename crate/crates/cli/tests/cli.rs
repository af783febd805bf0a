use std::path::PathBuf;
use std::process::{Command, Output};

fn magnitude(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnitude")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn spec_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn coeffs_disk_json() {
    let o = magnitude(&["coeffs", "--shape", "disk", "--radius", "1", "--max-order", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["m"].as_str().unwrap()).collect();
    assert_eq!(m, ["1/2", "3/2", "9/8"]);
    assert_eq!(v["meta"]["program"], "magnitude");
}

#[test]
fn csv_header_and_no_meta() {
    let o = magnitude(&["coeffs", "--shape", "ball3", "--max-order", "3", "--format", "csv", "--no-meta"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("k,power,c_exact,m_exact,m_float,interior,boundary"));
    assert_eq!(text.lines().count(), 5);
    let with_meta = stdout(&magnitude(&["coeffs", "--shape", "ball3", "--max-order", "3", "--format", "csv"]));
    assert!(with_meta.starts_with("# magnitude"));
    assert!(with_meta.ends_with(&text));
}

#[test]
fn text_shows_the_expansion() {
    let o = magnitude(&["coeffs", "--shape", "disk", "--format", "text", "--no-meta"]);
    assert!(stdout(&o).contains("𝓜(R) ≈ (1/2) R^2 + (3/2) R + (9/8) + O(R^-1)"), "{}", stdout(&o));
}

#[test]
fn spec_files_match_builtins() {
    let from_file = magnitude(&["coeffs", "--spec", &spec_path("disk_radius2.json"), "--max-order", "4", "--format", "csv", "--no-meta"]);
    let builtin = magnitude(&["coeffs", "--shape", "disk", "--radius", "2", "--max-order", "4", "--format", "csv", "--no-meta"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    let m = |o: &Output| stdout(o).lines().map(|l| l.split(',').nth(3).unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(m(&from_file), m(&builtin));

    let torus = magnitude(&["coeffs", "--spec", &spec_path("flat_torus.json"), "--format", "csv", "--no-meta"]);
    assert!(stdout(&torus).contains("0,2,1,1/2*pi^{-1}"), "{}", stdout(&torus));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["coeffs"][..],
        &["coeffs", "--shape", "torus"],
        &["coeffs", "--shape", "disk", "--spec", "x.json"],
        &["coeffs", "--shape", "disk", "--radius", "-1"],
        &["coeffs", "--shape", "disk", "--param", "side=2"],
        &["coeffs", "--spec", "/nonexistent/spec.json"],
        &["coeffs", "--shape", "square-numeric"],
        &["numeric", "--shape", "interval", "--rvalues", "10,0"],
        &["numeric", "--shape", "interval", "--points", "1"],
        &["fit", "--shape", "interval", "--rvalues", "10,20", "--max-order", "1"],
        &["coeffs", "--shape", "disk", "--format", "yaml"],
        &["frobnicate"],
    ] {
        assert_eq!(magnitude(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_1() {
    // Coincident sample points make the kernel matrix singular.
    let o = magnitude(&["numeric", "--shape", "interval", "--length", "1/1000000000000", "--points", "50", "--rvalues", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive definite"));
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("magnitude-cli-test-{}.json", std::process::id()));
    let o = magnitude(&["coeffs", "--shape", "shell3", "--max-order", "3", "--no-meta", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["rows"][3]["m"], "2");
}

#[test]
fn numeric_interval_within_one_percent() {
    let o = magnitude(&["numeric", "--shape", "interval", "--length", "1", "--points", "2001", "--rvalues", "10,20,40", "--seed", "7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for (r, m) in v["R"].as_array().unwrap().iter().zip(v["magnitude"].as_array().unwrap()) {
        let (r, m) = (r.as_f64().unwrap(), m.as_f64().unwrap());
        assert!((m / (1.0 + r / 2.0) - 1.0).abs() < 0.01);
    }
}

#[test]
fn taylor0_and_weights_formats() {
    let t = stdout(&magnitude(&["taylor0", "--shape", "interval", "--points", "201", "--format", "csv", "--no-meta"]));
    assert_eq!(t.lines().next(), Some("k,lambda"));
    assert_eq!(t.lines().count(), 4);
    let w = magnitude(&["weights", "--shape", "square-numeric", "--points", "400", "--rvalues", "3", "--no-meta"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&w)).unwrap();
    assert_eq!(v["profiles"].as_array().unwrap().len(), 1);
}

#[test]
fn selftest_small_run_passes() {
    let o = magnitude(&["selftest", "--dims", "2", "--max-order", "2", "--charts", "2", "--format", "text", "--no-meta"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn convention_pins_change_the_table() {
    let base = stdout(&magnitude(&["coeffs", "--shape", "disk", "--format", "csv", "--no-meta"]));
    let flipped = stdout(&magnitude(&["coeffs", "--shape", "disk", "--format", "csv", "--no-meta", "--flip-even-tail"]));
    assert_ne!(base, flipped);
    let h0 = stdout(&magnitude(&["coeffs", "--shape", "disk", "--format", "csv", "--no-meta", "--h0-on-plus"]));
    assert_eq!(base, h0);
}
