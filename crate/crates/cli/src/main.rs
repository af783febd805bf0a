//! `magnitude`: exact magnitude coefficients, numeric oracles and self-tests.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 on usage errors
//! (bad flags, unknown shapes or parameters, unreadable spec files).

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand};
use magnitude_core::assembly::{coefficients, AssemblyError, CoefficientTable};
use magnitude_core::boundary::BoundaryConventions;
use magnitude_core::expr::Rat;
use magnitude_core::geometry::{builtin_spec, jets_required_order, load_spec, GeometryError, GeometrySpec, Kind, Shape};
use magnitude_core::interior::ConstantSigns;
use magnitude_core::render::{render_selftest, render_table, Format};
use magnitude_core::selftest::{run_all, SelfTestConfig};
use magnitude_oracle::cloud::NumericShape;
use magnitude_oracle::fit::geometric_ladder;
use magnitude_oracle::report::{
    compare, numeric_report, render_compare, render_report, render_taylor, render_weights, taylor_report,
    weights_report, NumericRun,
};
use magnitude_oracle::OracleError;

#[derive(Parser, Debug)]
#[command(name = "magnitude", version, about = "Magnitude function coefficients: exact tables and numeric checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    conventions: ConventionArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact coefficient table m_0..=m_K.
    Coeffs {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = 2)]
        max_order: u32,
    },
    /// Finite magnitudes of a sampled shape, with closed-form residuals.
    Numeric {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        #[arg(long, value_parser = parse_rvalues, default_value = "10,20,40")]
        rvalues: RValues,
        /// Also fit m_0..=m_K from the magnitudes.
        #[arg(long)]
        max_order: Option<u32>,
    },
    /// Fit expansion coefficients from finite magnitudes.
    Fit {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, default_value_t = 2)]
        max_order: u32,
    },
    /// Power-series coefficients of the magnitude at R = 0.
    Taylor0 {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
    },
    /// Interior flatness and boundary concentration of the weight density.
    Weights {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = 10000)]
        points: usize,
        #[arg(long, value_parser = parse_rvalues, default_value = "10,40")]
        rvalues: RValues,
        /// Interior margin; defaults to a fifth of the diameter.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run the exact internal consistency suites.
    Selftest {
        #[arg(long, value_parser = parse_dims, default_value = "2,3")]
        dims: Dims,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        /// Random charts per dimension.
        #[arg(long, default_value_t = 20)]
        charts: usize,
    },
    /// Exact coefficients next to a numeric fit.
    Compare {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, default_value_t = 2)]
        max_order: u32,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Built-in shape, e.g. disk, ball3, shell3, interval, sphere-geodesic.
    #[arg(long)]
    shape: Option<String>,
    /// JSON geometry spec.
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Shape parameter `r`.
    #[arg(long, requires = "shape")]
    radius: Option<String>,
    /// Shape parameter `length`.
    #[arg(long, requires = "shape")]
    length: Option<String>,
    /// Any other shape parameter, e.g. `--param r_in=1/2`.
    #[arg(long = "param", value_name = "KEY=VALUE", requires = "shape")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, default_value_t = 4000)]
    points: usize,
    /// Explicit scales; overrides the ladder.
    #[arg(long, value_parser = parse_rvalues, conflicts_with = "ladder")]
    rvalues: Option<RValues>,
    /// Geometric ladder `start,end,count`.
    #[arg(long, value_parser = parse_ladder, default_value = "3,15,8")]
    ladder: Ladder,
    /// Row weight exponent of the least-squares fit; defaults to the dimension.
    #[arg(long)]
    fit_weight: Option<f64>,
}

impl FitArgs {
    fn scales(&self) -> Vec<f64> {
        match &self.rvalues {
            Some(r) => r.0.clone(),
            None => geometric_ladder(self.ladder.start, self.ladder.end, self.ladder.count),
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Omit the metadata block (program, version, timestamp).
    #[arg(long, global = true)]
    no_meta: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Progress and timings on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

/// Sign and factor placement pins for calibration runs.
#[derive(Args, Debug)]
struct ConventionArgs {
    #[arg(long, global = true, hide = true)]
    flip_log: bool,
    #[arg(long, global = true, hide = true)]
    flip_even_tail: bool,
    #[arg(long, global = true, hide = true)]
    h0_on_plus: bool,
}

impl ConventionArgs {
    fn get(&self) -> BoundaryConventions {
        BoundaryConventions {
            signs: ConstantSigns { flip_even_tail: self.flip_even_tail, flip_log: self.flip_log },
            h0_on_plus: self.h0_on_plus,
        }
    }
}

#[derive(Debug, Clone)]
struct RValues(Vec<f64>);

#[derive(Debug, Clone)]
struct Dims(Vec<u32>);

#[derive(Debug, Clone)]
struct Ladder {
    start: f64,
    end: f64,
    count: usize,
}

fn parse_rvalues(s: &str) -> Result<RValues, String> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(bad) = values.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(format!("R values must be positive and finite, got {bad}"));
    }
    Ok(RValues(values))
}

fn parse_dims(s: &str) -> Result<Dims, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<u32>() {
            Ok(n) if (1..=4).contains(&n) => Ok(n),
            _ => Err(format!("dimension `{t}` must be an integer in 1..=4")),
        })
        .collect::<Result<_, _>>()
        .map(Dims)
}

fn parse_ladder(s: &str) -> Result<Ladder, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err("expected start,end,count".into());
    };
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let (start, end) = (num(a)?, num(b)?);
    let count: usize = c.parse().map_err(|_| format!("`{c}` is not a count"))?;
    if !(start > 0.0 && end > start && end.is_finite() && count >= 2) {
        return Err("need 0 < start < end and count ≥ 2".into());
    }
    Ok(Ladder { start, end, count })
}

/// Parses `3`, `-1/2` or `1.25` exactly.
fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    let bad = || format!("`{s}` is not a rational number");
    match t.split_once('.') {
        None => t.parse().map_err(|_| bad()),
        Some((int, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            format!("{int}{frac}/1{}", "0".repeat(frac.len())).parse().map_err(|_| bad())
        }
    }
}

enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

type Outcome<T> = Result<T, Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow!("{msg}"))
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Failure {
        match e {
            GeometryError::InsufficientOrder { .. } => Failure::Compute(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

impl From<AssemblyError> for Failure {
    fn from(e: AssemblyError) -> Failure {
        match e {
            AssemblyError::Geometry(g) => g.into(),
            AssemblyError::NotSmooth(_) => Failure::Usage(e.into()),
            _ => Failure::Compute(e.into()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::Unsupported(_)
            | OracleError::OutOfRange(_)
            | OracleError::TooFewPoints { .. }
            | OracleError::BadScale(_)
            | OracleError::TooFewScales { .. } => Failure::Usage(e.into()),
            _ => Failure::Compute(e.into()),
        }
    }
}

/// A geometry given either by name and parameters or by a spec file.
enum Geometry {
    Named { name: String, params: BTreeMap<String, Rat> },
    Spec(Box<GeometrySpec>),
}

impl GeometryArgs {
    fn resolve(&self) -> Outcome<Geometry> {
        if let Some(path) = &self.source.spec {
            return Ok(Geometry::Spec(Box::new(load_spec(path)?)));
        }
        let name = self.source.shape.clone().expect("clap enforces one source");
        let mut params = BTreeMap::new();
        let named = [("r", &self.radius), ("length", &self.length)];
        for (key, value) in named.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))) {
            params.insert(key, parse_rat(&value).map_err(usage)?);
        }
        for kv in &self.params {
            let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("`{kv}` is not KEY=VALUE")))?;
            if params.insert(k.trim().to_string(), parse_rat(v).map_err(usage)?).is_some() {
                return Err(usage(format!("parameter `{}` given twice", k.trim())));
            }
        }
        Ok(Geometry::Named { name, params })
    }
}

impl Geometry {
    fn exact_spec(&self, k: u32) -> Outcome<GeometrySpec> {
        match self {
            Geometry::Spec(spec) => Ok((**spec).clone()),
            Geometry::Named { name, params } => {
                let shape = Shape::from_name(name, params)?;
                Ok(builtin_spec(&shape, jets_required_order(k, Kind::EuclideanDomain).max(3))?)
            }
        }
    }

    fn numeric_shape(&self) -> Outcome<NumericShape> {
        match self {
            Geometry::Named { name, params } => Ok(NumericShape::from_name(name, params)?),
            Geometry::Spec(spec) => match &spec.shape {
                Some(s) => Ok(NumericShape::Builtin(s.clone())),
                None => Err(usage(format!("{}: only built-in shapes can be sampled", spec.label))),
            },
        }
    }
}

fn exact_table(geometry: &Geometry, k: u32, conv: BoundaryConventions) -> Outcome<CoefficientTable> {
    Ok(coefficients(&geometry.exact_spec(k)?, k, conv)?)
}

/// The rendered output and whether every check passed.
fn execute(cli: &Cli) -> Outcome<(String, bool)> {
    let out = &cli.output;
    let conv = cli.conventions.get();
    let fmt = out.format;
    let seed = out.seed;
    Ok(match &cli.command {
        Command::Coeffs { geometry, max_order } => {
            let table = exact_table(&geometry.resolve()?, *max_order, conv)?;
            (render_table(&table, fmt), true)
        }
        Command::Numeric { geometry, points, rvalues, max_order } => {
            let shape = geometry.resolve()?.numeric_shape()?;
            let run =
                NumericRun { points: *points, seed, r_values: rvalues.0.clone(), fit_order: *max_order, fit_weight: None };
            (render_report(&numeric_report(&shape, &run)?, fmt), true)
        }
        Command::Fit { geometry, fit, max_order } => {
            let shape = geometry.resolve()?.numeric_shape()?;
            let run = NumericRun {
                points: fit.points,
                seed,
                r_values: fit.scales(),
                fit_order: Some(*max_order),
                fit_weight: fit.fit_weight,
            };
            (render_report(&numeric_report(&shape, &run)?, fmt), true)
        }
        Command::Taylor0 { geometry, points, max_order } => {
            let shape = geometry.resolve()?.numeric_shape()?;
            (render_taylor(&taylor_report(&shape, *points, seed, *max_order)?, fmt), true)
        }
        Command::Weights { geometry, points, rvalues, delta } => {
            let shape = geometry.resolve()?.numeric_shape()?;
            (render_weights(&weights_report(&shape, *points, seed, &rvalues.0, *delta)?, fmt), true)
        }
        Command::Selftest { dims, max_order, charts } => {
            let cfg = SelfTestConfig { dims: dims.0.clone(), max_order: *max_order, charts: *charts, seed, conventions: conv };
            let report = run_all(&cfg);
            (render_selftest(&report, fmt), report.passed())
        }
        Command::Compare { geometry, fit, max_order } => {
            let geometry = geometry.resolve()?;
            let table = exact_table(&geometry, *max_order, conv)?;
            let run = NumericRun {
                points: fit.points,
                seed,
                r_values: fit.scales(),
                fit_order: Some(*max_order),
                fit_weight: fit.fit_weight,
            };
            (render_compare(&compare(&table, &geometry.numeric_shape()?, &run)?, fmt), true)
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Coeffs { .. } => "coeffs",
        Command::Numeric { .. } => "numeric",
        Command::Fit { .. } => "fit",
        Command::Taylor0 { .. } => "taylor0",
        Command::Weights { .. } => "weights",
        Command::Selftest { .. } => "selftest",
        Command::Compare { .. } => "compare",
    }
}

/// Adds a `meta` key to JSON objects, or a `#` comment line otherwise.
fn with_meta(body: String, format: Format, command: &str) -> String {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let version = env!("CARGO_PKG_VERSION");
    match format {
        Format::Json => match body.strip_prefix("{\n") {
            Some(rest) => {
                let meta = serde_json::json!({
                    "program": "magnitude",
                    "version": version,
                    "command": command,
                    "timestamp": timestamp,
                });
                format!("{{\n  \"meta\": {meta},\n{rest}")
            }
            None => body,
        },
        Format::Csv | Format::Text => format!("# magnitude {version} {command} timestamp={timestamp}\n{body}"),
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| anyhow!("cannot write {}: {e}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let command = command_name(&cli.command);
    let result = execute(&cli);
    if cli.output.verbose {
        eprintln!("{command}: {:.2?}", started.elapsed());
    }
    match result {
        Ok((body, passed)) => {
            let text = if cli.output.no_meta { body } else { with_meta(body, cli.output.format, command) };
            if let Err(e) = emit(&text, cli.output.out.as_ref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: {command} reported failures");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rat("1.25").unwrap(), Rat::new(5, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), Rat::new(-1, 2));
        assert_eq!(parse_rat("3/2").unwrap(), Rat::new(3, 2));
        assert!(parse_rat("1.").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn rvalues_must_be_positive() {
        assert_eq!(parse_rvalues("10, 20,40").unwrap().0, vec![10.0, 20.0, 40.0]);
        assert!(parse_rvalues("10,-1").is_err());
        assert!(parse_rvalues("10,inf").is_err());
        assert!(parse_rvalues("").is_err());
    }

    #[test]
    fn ladder_and_dims() {
        let l = parse_ladder("10,40,8").unwrap();
        assert_eq!((l.start, l.end, l.count), (10.0, 40.0, 8));
        assert!(parse_ladder("40,10,8").is_err());
        assert!(parse_dims("2,3").is_ok());
        assert!(parse_dims("2,7").is_err());
    }

    #[test]
    fn meta_is_the_first_json_key() {
        let s = with_meta("{\n  \"a\": 1\n}\n".into(), Format::Json, "coeffs");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["meta"]["command"], "coeffs");
        assert_eq!(v["a"], 1);
        assert!(with_meta("k\n".into(), Format::Csv, "coeffs").starts_with("# magnitude"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
