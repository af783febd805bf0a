//! Deterministic serialization of coefficient tables.
//!
//! Exact values use the scalar-string grammar; floating columns carry 17
//! significant digits computed from the exact values.

use std::fmt::Write as _;

use crate::assembly::CoefficientTable;
use crate::expr::to_decimal;
use crate::selftest::SelfTestReport;

/// Output formats shared by every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected json, csv or text)")),
        }
    }
}

/// Significant digits of float columns.
pub const FLOAT_DIGITS: usize = 17;

/// A double with 17 significant digits in scientific notation.
pub fn float17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Header of the CSV table format.
pub const CSV_HEADER: [&str; 7] = ["k", "power", "c_exact", "m_exact", "m_float", "interior", "boundary"];

/// Pretty-printed JSON; [`parse_table_json`] reads it back without loss.
pub fn table_json(table: &CoefficientTable) -> String {
    let mut s = serde_json::to_string_pretty(table).expect("tables serialize");
    s.push('\n');
    s
}

pub fn parse_table_json(s: &str) -> Result<CoefficientTable, serde_json::Error> {
    serde_json::from_str(s)
}

pub fn table_csv(table: &CoefficientTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in &table.rows {
        w.write_record([
            row.k.to_string(),
            row.power.to_string(),
            row.c.to_string(),
            row.m.to_string(),
            to_decimal(&row.m, FLOAT_DIGITS),
            row.interior.to_string(),
            row.boundary.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn power_of_r(p: i32) -> String {
    match p {
        0 => String::new(),
        1 => " R".to_string(),
        p => format!(" R^{p}"),
    }
}

/// A human-readable summary ending in the truncated expansion.
pub fn table_text(table: &CoefficientTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (n = {}, K = {}, jets to order {})", table.label, table.n, table.k_max, table.jet_order);
    if !table.exact {
        let _ = writeln!(out, "note: the spec carries rounded inputs");
    }
    for row in &table.rows {
        let _ = writeln!(out, "  m_{} = {}  ≈ {}   (c_{} = {})", row.k, row.m, to_decimal(&row.m, FLOAT_DIGITS), row.k, row.c);
    }
    let terms: Vec<String> = table
        .rows
        .iter()
        .filter(|r| !r.m.is_zero())
        .map(|r| format!("({}){}", r.m, power_of_r(r.power)))
        .collect();
    let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    let rem = table.n as i32 - table.k_max as i32 - 1;
    let _ = writeln!(out, "𝓜(R) ≈ {body} + O({})", if rem == 0 { "1".to_string() } else { format!("R^{rem}") });
    out
}

pub fn render_table(table: &CoefficientTable, format: Format) -> String {
    match format {
        Format::Json => table_json(table),
        Format::Csv => table_csv(table),
        Format::Text => table_text(table),
    }
}

/// Self-test results: one row per check, failures listed last in text mode.
pub fn render_selftest(report: &SelfTestReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "name", "passed", "detail"]).expect("in-memory write");
            for c in &report.checks {
                w.write_record([c.suite.as_str(), c.name.as_str(), if c.passed { "true" } else { "false" }, c.detail.as_str()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let mut out = String::new();
            let mut suites: Vec<&str> = report.checks.iter().map(|c| c.suite.as_str()).collect();
            suites.dedup();
            for suite in suites {
                let checks: Vec<_> = report.checks.iter().filter(|c| c.suite == suite).collect();
                let ok = checks.iter().filter(|c| c.passed).count();
                let _ = writeln!(out, "{suite}: {ok}/{} passed", checks.len());
            }
            for c in report.failures() {
                let _ = writeln!(out, "FAILED {}/{}: {}", c.suite, c.name, c.detail);
            }
            let _ = writeln!(out, "{}", if report.passed() { "all checks passed" } else { "self-test FAILED" });
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::coefficients;
    use crate::geometry::{builtin_spec, Shape};
    use crate::expr::Rat;

    fn disk() -> CoefficientTable {
        let spec = builtin_spec(&Shape::Disk { r: Rat::ONE }, 4).unwrap();
        coefficients(&spec, 2, Default::default()).unwrap()
    }

    #[test]
    fn json_round_trips() {
        let t = disk();
        assert_eq!(parse_table_json(&table_json(&t)).unwrap(), t);
    }

    #[test]
    fn csv_layout() {
        let csv = table_csv(&disk());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,power,c_exact,m_exact,m_float,interior,boundary");
        assert_eq!(lines[3], "2,0,9/4*pi,9/8,1.1250000000000000,0,9/4*pi");
    }

    #[test]
    fn text_shows_expansion() {
        let text = table_text(&disk());
        assert!(text.contains("𝓜(R) ≈ (1/2) R^2 + (3/2) R + (9/8) + O(R^-1)"), "{text}");
    }

    #[test]
    fn float_formatting() {
        assert_eq!(float17(0.1), "1.0000000000000001e-1");
        assert_eq!("json".parse::<Format>(), Ok(Format::Json));
        assert!("xml".parse::<Format>().is_err());
    }
}
