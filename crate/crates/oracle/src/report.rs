//! Serializable reports of numeric runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use magnitude_core::render::{float17, Format};
use serde::{Deserialize, Serialize};

use magnitude_core::assembly::CoefficientTable;

use crate::closed_form::ClosedForm;
use crate::cloud::{sample_shape, NumericShape};
use crate::fit::{fit_coefficients_weighted, FitReport};
use crate::profile::{weight_profile, WeightProfile};
use crate::solve::weighting;
use crate::taylor::taylor_zero;
use crate::OracleError;

/// Finite magnitudes of one sampled cloud over a list of scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub label: String,
    pub n: u32,
    pub points: usize,
    pub seed: u64,
    #[serde(rename = "R")]
    pub r: Vec<f64>,
    pub magnitude: Vec<f64>,
    /// `max |Zw − 1|` per scale.
    pub solve_residuals: Vec<f64>,
    pub fit: Option<FitReport>,
    /// Relative residuals `(numeric − exact)/exact` per closed form.
    pub closed_form_residuals: BTreeMap<String, Vec<f64>>,
}

/// What to compute in [`numeric_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumericRun {
    pub points: usize,
    pub seed: u64,
    pub r_values: Vec<f64>,
    /// Fit `m_0..=m_K` when set.
    pub fit_order: Option<u32>,
    /// Row weight exponent of the fit; defaults to the dimension.
    pub fit_weight: Option<f64>,
}

pub fn numeric_report(shape: &NumericShape, run: &NumericRun) -> Result<OracleReport, OracleError> {
    let cloud = sample_shape(shape, run.points, run.seed)?;
    let mut magnitude = Vec::with_capacity(run.r_values.len());
    let mut solve_residuals = Vec::with_capacity(run.r_values.len());
    for &r in &run.r_values {
        let w = weighting(&cloud, r)?;
        magnitude.push(w.magnitude);
        solve_residuals.push(w.residual);
    }
    let mut closed_form_residuals = BTreeMap::new();
    if let Some(cf) = ClosedForm::for_shape(shape) {
        let rel = run.r_values.iter().zip(&magnitude).map(|(r, v)| (v - cf.eval(*r)) / cf.eval(*r)).collect();
        closed_form_residuals.insert(cf.name().to_string(), rel);
    }
    let n = shape.dim();
    let fit = match run.fit_order {
        Some(k) => {
            let samples: Vec<(f64, f64)> = run.r_values.iter().copied().zip(magnitude.iter().copied()).collect();
            Some(fit_coefficients_weighted(&samples, n, k, run.fit_weight.unwrap_or(n as f64))?)
        }
        None => None,
    };
    Ok(OracleReport {
        label: cloud.label.clone(),
        n,
        points: cloud.len(),
        seed: run.seed,
        r: run.r_values.clone(),
        magnitude,
        solve_residuals,
        fit,
        closed_form_residuals,
    })
}

pub const REPORT_CSV_HEADER: [&str; 5] = ["R", "magnitude", "closed_form", "relative_residual", "solve_residual"];

pub fn render_report(report: &OracleReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => report_csv(report),
        Format::Text => report_text(report),
    }
}

fn closed_form_column(report: &OracleReport) -> Option<&Vec<f64>> {
    report.closed_form_residuals.values().next()
}

fn report_csv(report: &OracleReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_CSV_HEADER).expect("in-memory write");
    let rel = closed_form_column(report);
    for (i, r) in report.r.iter().enumerate() {
        let (cf, res) = match rel {
            Some(v) => (float17(report.magnitude[i] / (1.0 + v[i])), float17(v[i])),
            None => (String::new(), String::new()),
        };
        w.write_record([float17(*r), float17(report.magnitude[i]), cf, res, float17(report.solve_residuals[i])])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn report_text(report: &OracleReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (n = {}, {} points, seed {})", report.label, report.n, report.points, report.seed);
    let rel = closed_form_column(report);
    for (i, r) in report.r.iter().enumerate() {
        let _ = write!(out, "  R = {:<8} mag = {}", r, float17(report.magnitude[i]));
        if let Some(v) = rel {
            let _ = write!(out, "  rel. residual {:+.3e}", v[i]);
        }
        out.push('\n');
    }
    if let Some(fit) = &report.fit {
        let errs = fit.std_errors();
        for (k, c) in fit.coeffs.iter().enumerate() {
            let _ = writeln!(out, "  m_{k} ≈ {} ± {:.2e}", float17(*c), errs[k]);
        }
        let _ = writeln!(out, "  fit residual {:.3e}, condition {:.3e}", fit.residual, fit.cond);
    }
    out
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Power-series coefficients at `R = 0` of a sampled shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorOutput {
    pub label: String,
    pub points: usize,
    pub seed: u64,
    /// Condition number of `Z_1`.
    pub cond: f64,
    /// `λ_1..=λ_K` in `𝓜(R) = 1 + Σ λ_k R^k`.
    pub lambdas: Vec<f64>,
}

pub fn taylor_report(shape: &NumericShape, points: usize, seed: u64, k: u32) -> Result<TaylorOutput, OracleError> {
    let cloud = sample_shape(shape, points, seed)?;
    let t = taylor_zero(&cloud, k)?;
    Ok(TaylorOutput { label: cloud.label, points: t.points, seed, cond: t.cond, lambdas: t.lambdas })
}

pub fn render_taylor(out: &TaylorOutput, format: Format) -> String {
    match format {
        Format::Json => json_string(out),
        Format::Csv => {
            let mut rows = vec![vec!["k".to_string(), "lambda".to_string()]];
            rows.extend(out.lambdas.iter().enumerate().map(|(k, l)| vec![(k + 1).to_string(), float17(*l)]));
            csv_string(rows)
        }
        Format::Text => {
            let mut s = format!("{} ({} points, seed {}), cond(Z_1) = {:.3e}\n", out.label, out.points, out.seed, out.cond);
            for (k, l) in out.lambdas.iter().enumerate() {
                let _ = writeln!(s, "  λ_{} = {}", k + 1, float17(*l));
            }
            s
        }
    }
}

/// Weight-density statistics of a sampled domain at several scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsOutput {
    pub label: String,
    pub n: u32,
    pub points: usize,
    pub seed: u64,
    pub profiles: Vec<WeightProfile>,
}

pub fn weights_report(
    shape: &NumericShape,
    points: usize,
    seed: u64,
    r_values: &[f64],
    delta: Option<f64>,
) -> Result<WeightsOutput, OracleError> {
    let cloud = sample_shape(shape, points, seed)?;
    let profiles = r_values.iter().map(|r| weight_profile(&cloud, *r, delta)).collect::<Result<_, _>>()?;
    Ok(WeightsOutput { label: cloud.label.clone(), n: cloud.n, points: cloud.len(), seed, profiles })
}

pub const WEIGHTS_CSV_HEADER: [&str; 7] =
    ["R", "delta", "interior_points", "max_deviation", "mean_deviation", "boundary_ratio", "magnitude"];

pub fn render_weights(out: &WeightsOutput, format: Format) -> String {
    match format {
        Format::Json => json_string(out),
        Format::Csv => {
            let mut rows = vec![WEIGHTS_CSV_HEADER.iter().map(|s| s.to_string()).collect()];
            rows.extend(out.profiles.iter().map(|p| {
                vec![
                    float17(p.r),
                    float17(p.delta),
                    p.interior_points.to_string(),
                    float17(p.max_deviation),
                    float17(p.mean_deviation),
                    float17(p.boundary_ratio),
                    float17(p.magnitude),
                ]
            }));
            csv_string(rows)
        }
        Format::Text => {
            let mut s = format!("{} (n = {}, {} points, seed {})\n", out.label, out.n, out.points, out.seed);
            for p in &out.profiles {
                let _ = writeln!(
                    s,
                    "  R = {:<8} interior deviation max {:.3e} mean {:.3e} ({} points, δ = {:.3}), boundary/interior density {:.3}",
                    p.r, p.max_deviation, p.mean_deviation, p.interior_points, p.delta, p.boundary_ratio
                );
            }
            s
        }
    }
}

/// One coefficient, exact and fitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub k: u32,
    pub power: i32,
    /// Exact `m_k` in the scalar-string grammar.
    pub exact: String,
    pub exact_value: f64,
    pub fitted: f64,
    pub std_error: f64,
    pub relative_error: f64,
}

/// Exact coefficients next to coefficients fitted from finite magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub label: String,
    pub rows: Vec<CompareRow>,
    pub numeric: OracleReport,
}

/// Fits the same number of coefficients as `table` carries.
pub fn compare(table: &CoefficientTable, shape: &NumericShape, run: &NumericRun) -> Result<CompareReport, OracleError> {
    let run = NumericRun { fit_order: Some(table.k_max), ..run.clone() };
    let numeric = numeric_report(shape, &run)?;
    let fit = numeric.fit.as_ref().expect("fit requested");
    let errs = fit.std_errors();
    let rows = table
        .rows
        .iter()
        .zip(fit.coeffs.iter().zip(errs))
        .map(|(row, (fitted, std_error))| {
            let exact_value = row.m_f64();
            let relative_error = if exact_value == 0.0 { fitted.abs() } else { (fitted - exact_value) / exact_value };
            CompareRow { k: row.k, power: row.power, exact: row.m.to_string(), exact_value, fitted: *fitted, std_error, relative_error }
        })
        .collect();
    Ok(CompareReport { label: table.label.clone(), rows, numeric })
}

pub const COMPARE_CSV_HEADER: [&str; 7] = ["k", "power", "m_exact", "m_exact_float", "m_fitted", "std_error", "relative_error"];

pub fn render_compare(out: &CompareReport, format: Format) -> String {
    match format {
        Format::Json => json_string(out),
        Format::Csv => {
            let mut rows = vec![COMPARE_CSV_HEADER.iter().map(|s| s.to_string()).collect()];
            rows.extend(out.rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    r.power.to_string(),
                    r.exact.clone(),
                    float17(r.exact_value),
                    float17(r.fitted),
                    float17(r.std_error),
                    float17(r.relative_error),
                ]
            }));
            csv_string(rows)
        }
        Format::Text => {
            let mut s = format!("{}: exact vs fitted ({} points, R = {:?})\n", out.label, out.numeric.points, out.numeric.r);
            for r in &out.rows {
                let _ = writeln!(
                    s,
                    "  m_{} = {:<10} ≈ {:<12.6}  fitted {:<12.6} ± {:.1e}  rel. error {:+.2e}",
                    r.k, r.exact, r.exact_value, r.fitted, r.std_error, r.relative_error
                );
            }
            s
        }
    }
}
