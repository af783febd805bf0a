//! JSON reading and writing of geometry specs.
//!
//! Exact values travel as strings in the scalar grammar (`"3/2"`,
//! `"2*pi"`, `"1/2+1i"`).  Multi-indices are comma-separated keys; the
//! squared-distance table uses `"α;β"` keys for the coefficient of `x^α v^β`.
//! A chart without `max_order` declares its jets complete (all omitted jets
//! vanish).

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{
    BoundaryChart, Chart, DistanceJetChart, GeometryError, GeometrySpec, JetTable, Kind, MultiIndex, Shape,
    SubmanifoldChart,
};
use crate::expr::{Rat, Scalar};

/// Declared order of charts whose jets are complete polynomials.
pub const COMPLETE_ORDER: u32 = 255;

fn schema(msg: impl Into<String>) -> GeometryError {
    GeometryError::Schema(msg.into())
}

fn scalar(v: &Value, what: &str) -> Result<Scalar, GeometryError> {
    match v {
        Value::String(s) => s.parse().map_err(|_| schema(format!("{what}: invalid scalar `{s}`"))),
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::int)
            .ok_or_else(|| schema(format!("{what}: numbers must be integers; use strings for fractions"))),
        _ => Err(schema(format!("{what}: expected a scalar string"))),
    }
}

fn rational(v: &Value, what: &str) -> Result<Rat, GeometryError> {
    scalar(v, what)?.as_rat().ok_or_else(|| schema(format!("{what}: jets must be real rationals")))
}

fn multi_index(key: &str, len: usize, what: &str) -> Result<MultiIndex, GeometryError> {
    if len == 0 && key.trim().is_empty() {
        return Ok(Vec::new());
    }
    let idx: Result<Vec<u32>, _> = key.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let idx = idx.map_err(|_| schema(format!("{what}: bad multi-index `{key}`")))?;
    if idx.len() != len {
        return Err(schema(format!("{what}: multi-index `{key}` should have {len} entries")));
    }
    Ok(idx)
}

fn index_key(a: &[u32]) -> String {
    a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, GeometryError> {
    v.as_object().ok_or_else(|| schema(format!("{what}: expected an object")))
}

fn jet_table(v: &Value, nvars: usize, what: &str) -> Result<JetTable, GeometryError> {
    let mut t = JetTable::new();
    for (k, val) in object(v, what)? {
        let r = rational(val, what)?;
        if !r.is_zero() {
            t.insert(multi_index(k, nvars, what)?, r);
        }
    }
    Ok(t)
}

fn max_jet_order<'a>(tables: impl Iterator<Item = &'a JetTable>) -> u32 {
    tables.flat_map(|t| t.keys().map(|a| a.iter().sum::<u32>())).max().unwrap_or(0)
}

/// Expands a symmetric tensor table into monomial coefficients, checking
/// that entries related by permutation agree.
fn symmetric_tensor(v: &Value, n: usize, rank: usize, what: &str) -> Result<BTreeMap<MultiIndex, Rat>, GeometryError> {
    let mut by_sorted: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    for (k, val) in object(v, what)? {
        let idx = multi_index(k, rank, what)?;
        if idx.iter().any(|i| *i as usize >= n) {
            return Err(schema(format!("{what}: index out of range in `{k}`")));
        }
        let r = rational(val, what)?;
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        if let Some(prev) = by_sorted.get(&sorted) {
            if *prev != r {
                return Err(schema(format!("{what}: table is not symmetric at `{k}`")));
            }
        }
        by_sorted.insert(sorted, r);
    }
    let mut out = BTreeMap::new();
    for (sorted, r) in by_sorted {
        let mut beta = vec![0u32; n];
        for i in &sorted {
            beta[*i as usize] += 1;
        }
        // Number of index tuples with this content: rank!/β!.
        let mut count = Rat::factorial(rank as u32);
        for b in &beta {
            count = &count / &Rat::factorial(*b);
        }
        out.insert(beta, &r * &count);
    }
    Ok(out)
}

fn parse_chart(v: &Value, kind: Kind, n: usize, big_n: usize, pos: usize) -> Result<Chart, GeometryError> {
    let obj = object(v, "chart")?;
    let id = obj.get("id").and_then(Value::as_str).map(str::to_string).unwrap_or_else(|| format!("chart{pos}"));
    let what = format!("chart `{id}`");
    let weight = scalar(obj.get("weight").ok_or_else(|| schema(format!("{what}: missing weight")))?, &what)?;
    let declared = obj.get("max_order").map(|m| m.as_u64().map(|x| x as u32).ok_or_else(|| schema("max_order must be an integer")));
    let declared = declared.transpose()?;
    Ok(match kind {
        Kind::EuclideanDomain => {
            let jets = match obj.get("jets") {
                Some(j) => jet_table(j, n - 1, &what)?,
                None => JetTable::new(),
            };
            let max_order = declared.unwrap_or(COMPLETE_ORDER);
            Chart::Boundary(BoundaryChart { id, weight, jets, max_order })
        }
        Kind::ClosedSubmanifold => {
            let funcs = object(obj.get("functions").ok_or_else(|| schema(format!("{what}: missing functions")))?, &what)?;
            let mut functions = Vec::new();
            for l in n + 1..=big_n {
                let f = funcs.get(&format!("phi_{l}")).ok_or_else(|| schema(format!("{what}: missing phi_{l}")))?;
                functions.push(jet_table(f, n, &what)?);
            }
            let max_order = declared.unwrap_or(COMPLETE_ORDER);
            Chart::Submanifold(SubmanifoldChart { id, weight, functions, max_order })
        }
        Kind::DistanceJets => {
            let mut dsq: BTreeMap<(MultiIndex, MultiIndex), Rat> = BTreeMap::new();
            let zero = vec![0u32; n];
            let mut add = |a: MultiIndex, b: MultiIndex, r: Rat| {
                let e = dsq.entry((a, b)).or_insert(Rat::ZERO);
                *e = &*e + &r;
            };
            if let Some(m) = obj.get("metric") {
                for (b, r) in symmetric_tensor(m, n, 2, &what)? {
                    add(zero.clone(), b, r);
                }
            }
            if let Some(forms) = obj.get("forms") {
                for (deg, table) in object(forms, &what)? {
                    let j: usize = deg.parse().map_err(|_| schema(format!("{what}: form degree `{deg}`")))?;
                    if j < 3 {
                        return Err(schema(format!("{what}: forms start at degree 3")));
                    }
                    for (b, r) in symmetric_tensor(table, n, j, &what)? {
                        add(zero.clone(), b, r);
                    }
                }
            }
            if let Some(t) = obj.get("dsq") {
                for (k, val) in object(t, &what)? {
                    let (a, b) = k.split_once(';').ok_or_else(|| schema(format!("{what}: dsq key `{k}` needs `α;β`")))?;
                    let a = multi_index(a, n, &what)?;
                    let b = multi_index(b, n, &what)?;
                    add(a, b, rational(val, &what)?);
                }
            }
            dsq.retain(|_, r| !r.is_zero());
            let max_order = declared.unwrap_or(COMPLETE_ORDER).max(2);
            Chart::DistanceJets(DistanceJetChart { id, weight, dsq, max_order })
        }
    })
}

/// Parses and validates a spec from JSON text.
pub fn parse_spec(text: &str) -> Result<GeometrySpec, GeometryError> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let obj = object(&v, "spec")?;
    let kind: Kind = serde_json::from_value(obj.get("kind").cloned().ok_or_else(|| schema("missing kind"))?)
        .map_err(|_| schema("kind must be euclidean_domain, closed_submanifold or distance_jets"))?;
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| schema("missing integer n"))? as usize;
    if !(1..=4).contains(&n) {
        return Err(schema(format!("dimension n = {n} outside 1..=4")));
    }
    let big_n = obj.get("N").and_then(Value::as_u64).map(|v| v as usize).unwrap_or(n);
    let interior_volume = scalar(obj.get("interior_volume").ok_or_else(|| schema("missing interior_volume"))?, "interior_volume")?;
    let charts_v = obj.get("charts").and_then(Value::as_array).ok_or_else(|| schema("missing charts array"))?;
    let charts = charts_v
        .iter()
        .enumerate()
        .map(|(i, c)| parse_chart(c, kind, n, big_n, i))
        .collect::<Result<Vec<_>, _>>()?;
    let shape = match obj.get("shape") {
        Some(s) => {
            let name = s.get("name").and_then(Value::as_str).ok_or_else(|| schema("shape.name"))?;
            let mut params = BTreeMap::new();
            if let Some(p) = s.get("params") {
                for (k, val) in object(p, "shape.params")? {
                    params.insert(k.clone(), rational(val, "shape.params")?);
                }
            }
            Some(Shape::from_name(name, &params)?)
        }
        None => None,
    };
    let flag = |k: &str| obj.get(k).and_then(Value::as_bool).unwrap_or(true);
    let spec = GeometrySpec {
        label: obj.get("label").and_then(Value::as_str).unwrap_or("spec").to_string(),
        kind,
        n: n as u32,
        big_n: big_n as u32,
        interior_volume,
        charts,
        shape,
        exact: flag("exact"),
        smooth: flag("smooth"),
    };
    spec.validate()?;
    Ok(spec)
}

/// Reads a spec file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<GeometrySpec, GeometryError> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p)
        .map_err(|e| GeometryError::Io { path: p.display().to_string(), reason: e.to_string() })?;
    parse_spec(&text)
}

fn jets_json(t: &JetTable) -> Value {
    Value::Object(t.iter().map(|(a, v)| (index_key(a), Value::String(v.to_string()))).collect())
}

/// Serializes a spec; [`parse_spec`] reads the output back unchanged.
pub fn spec_to_json(spec: &GeometrySpec) -> Value {
    let charts: Vec<Value> = spec
        .charts
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("id".into(), json!(c.id()));
            m.insert("weight".into(), json!(c.weight().to_string()));
            m.insert("max_order".into(), json!(c.max_order()));
            match c {
                Chart::Boundary(b) => {
                    m.insert("jets".into(), jets_json(&b.jets));
                }
                Chart::Submanifold(s) => {
                    let f: Map<String, Value> = s
                        .functions
                        .iter()
                        .enumerate()
                        .map(|(i, t)| (format!("phi_{}", spec.n as usize + 1 + i), jets_json(t)))
                        .collect();
                    m.insert("functions".into(), Value::Object(f));
                }
                Chart::DistanceJets(d) => {
                    let t: Map<String, Value> = d
                        .dsq
                        .iter()
                        .map(|((a, b), v)| (format!("{};{}", index_key(a), index_key(b)), Value::String(v.to_string())))
                        .collect();
                    m.insert("dsq".into(), Value::Object(t));
                }
            }
            Value::Object(m)
        })
        .collect();
    let mut out = Map::new();
    out.insert("label".into(), json!(spec.label));
    out.insert("kind".into(), json!(spec.kind.as_str()));
    out.insert("n".into(), json!(spec.n));
    out.insert("N".into(), json!(spec.big_n));
    out.insert("interior_volume".into(), json!(spec.interior_volume.to_string()));
    out.insert("exact".into(), json!(spec.exact));
    out.insert("smooth".into(), json!(spec.smooth));
    if let Some(s) = &spec.shape {
        let params: Map<String, Value> = s.params().into_iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
        out.insert("shape".into(), json!({ "name": s.name(), "params": params }));
    }
    out.insert("charts".into(), Value::Array(charts));
    Value::Object(out)
}

/// Convenience for tests and examples: the highest jet order present.
pub fn stored_jet_order(spec: &GeometrySpec) -> u32 {
    let mut best = 0;
    for c in &spec.charts {
        best = best.max(match c {
            Chart::Boundary(b) => max_jet_order(std::iter::once(&b.jets)),
            Chart::Submanifold(s) => max_jet_order(s.functions.iter()),
            Chart::DistanceJets(d) => d.dsq.keys().map(|(_, b)| b.iter().sum()).max().unwrap_or(0),
        });
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::builtin_spec;

    #[test]
    fn minimal_flat_chart() {
        let text = r#"{"kind":"euclidean_domain","n":2,"interior_volume":"1",
            "charts":[{"id":"p","weight":"1"}]}"#;
        let spec = parse_spec(text).unwrap();
        let Chart::Boundary(b) = &spec.charts[0] else { panic!() };
        assert!(b.jets.is_empty());
    }

    #[test]
    fn unit_curvature_chart() {
        let text = r#"{"kind":"euclidean_domain","n":3,"interior_volume":"1",
            "charts":[{"id":"p","weight":"1","jets":{"2,0":"1/1"}}]}"#;
        let spec = parse_spec(text).unwrap();
        let Chart::Boundary(b) = &spec.charts[0] else { panic!() };
        assert_eq!(b.jets[&vec![2, 0]], Rat::ONE);
    }

    #[test]
    fn asymmetric_metric_rejected() {
        let text = r#"{"kind":"distance_jets","n":2,"interior_volume":"1",
            "charts":[{"id":"p","weight":"1","metric":{"0,0":"1","1,1":"1","0,1":"1/4","1,0":"1/2"}}]}"#;
        assert!(matches!(parse_spec(text), Err(GeometryError::Schema(_))));
    }

    #[test]
    fn indefinite_metric_rejected() {
        let text = r#"{"kind":"distance_jets","n":2,"interior_volume":"1",
            "charts":[{"id":"p","weight":"1","metric":{"0,0":"1","1,1":"-1"}}]}"#;
        assert!(matches!(parse_spec(text), Err(GeometryError::BadChart { .. })));
    }

    #[test]
    fn gradient_in_boundary_chart_rejected() {
        let text = r#"{"kind":"euclidean_domain","n":2,"interior_volume":"1",
            "charts":[{"id":"p","weight":"1","jets":{"1":"1"}}]}"#;
        assert!(parse_spec(text).is_err());
    }

    #[test]
    fn builtins_round_trip() {
        for (shape, order) in [
            (Shape::Disk { r: Rat::new(3, 2) }, 6),
            (Shape::Shell3 { r_in: Rat::new(1, 2), r_out: Rat::new(3, 2) }, 5),
            (Shape::SphereGeodesic { r: Rat::ONE }, 5),
            (Shape::SphereSubmanifold { r: Rat::int(2) }, 5),
            (Shape::Interval { length: Rat::int(2) }, 3),
        ] {
            let spec = builtin_spec(&shape, order).unwrap();
            let text = spec_to_json(&spec).to_string();
            assert_eq!(parse_spec(&text).unwrap(), spec, "{}", shape.label());
        }
    }
}
