//! Internal consistency suites for the symbolic engines.
//!
//! Every check is exact: composition residuals must vanish identically in the
//! tracked jets, parity and flat-chart values are compared as rationals, and
//! the scaling law is checked on exact tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assembly::scaling_check;
use crate::boundary::{multi_indices, BoundaryConventions, BoundaryEngine};
use crate::expr::Rat;
use crate::geometry::{builtin_spec, jets_required_order, Chart, JetTable, Kind, Shape, SubmanifoldChart};
use crate::expr::Scalar;
use crate::interior::interior_densities;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Settings for [`run_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestConfig {
    pub dims: Vec<u32>,
    /// Highest symbol order checked in residual suites.
    pub max_order: u32,
    pub charts: usize,
    pub seed: u64,
    pub conventions: BoundaryConventions,
}

impl Default for SelfTestConfig {
    fn default() -> Self {
        SelfTestConfig { dims: vec![2, 3], max_order: 3, charts: 20, seed: 1, conventions: BoundaryConventions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub config: SelfTestConfig,
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-3..=3), rng.gen_range(1..=4))
}

/// Random graph jets of orders `2..=order` over `vars` variables.
pub fn random_graph_jets(rng: &mut ChaCha8Rng, vars: usize, order: u32) -> JetTable {
    let mut jets = JetTable::new();
    for d in 2..=order {
        for a in multi_indices(vars, d) {
            let v = small_rat(rng);
            if !v.is_zero() {
                jets.insert(a, v);
            }
        }
    }
    jets
}

/// A random hypersurface chart `x ↦ (x, f(x))` with `f(0) = 0`.
pub fn random_submanifold_chart(rng: &mut ChaCha8Rng, n: usize, order: u32) -> Chart {
    let mut f = random_graph_jets(rng, n, order);
    for a in multi_indices(n, 1) {
        f.insert(a, small_rat(rng));
    }
    Chart::Submanifold(SubmanifoldChart { id: "random".into(), weight: Scalar::one(), functions: vec![f], max_order: order })
}

fn check(suite: &str, name: String, result: Result<(), String>) -> Check {
    let (passed, detail) = match result {
        Ok(()) => (true, String::new()),
        Err(e) => (false, e),
    };
    Check { suite: suite.into(), name, passed, detail }
}

/// Factorization and inverse residuals through `max_order` on random charts.
pub fn residual_suite(cfg: &SelfTestConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let k_max = cfg.max_order + 1;
    for &n in &cfg.dims {
        for c in 0..cfg.charts {
            let jets = random_graph_jets(&mut rng, n as usize - 1, k_max + 1);
            let result = (|| {
                let eng = BoundaryEngine::new(&jets, n as usize, k_max, cfg.conventions).map_err(|e| e.to_string())?;
                let q = eng.q_symbols();
                let f = eng.factor(&q).map_err(|e| e.to_string())?;
                eng.factor_residual(&q, &f).map_err(|e| format!("factorization: {e}"))?;
                let w = eng.inverse_factors(&f);
                eng.inverse_residual(&f, &w).map_err(|e| format!("inverse: {e}"))
            })();
            out.push(check("residuals", format!("n={n} chart={c}"), result));
        }
    }
    out
}

/// Odd interior densities vanish on random hypersurface charts.
pub fn parity_suite(cfg: &SelfTestConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let k = cfg.max_order.max(1);
    let mut out = Vec::new();
    for &n in &cfg.dims {
        for c in 0..cfg.charts.min(5) {
            let chart = random_submanifold_chart(&mut rng, n as usize, jets_required_order(k, Kind::ClosedSubmanifold));
            let result = interior_densities(&chart, n as usize, k, cfg.conventions.signs)
                .map_err(|e| e.to_string())
                .and_then(|a| match a.iter().enumerate().find(|(j, v)| j % 2 == 1 && !v.is_zero()) {
                    Some((j, v)) => Err(format!("a_{j} = {v}")),
                    None => Ok(()),
                });
            out.push(check("parity", format!("n={n} chart={c}"), result));
        }
    }
    out
}

/// On a flat boundary `B̂_1 = μ` and `B̂_k = 0` for `2 ≤ k ≤ 4`.
pub fn flat_suite(cfg: &SelfTestConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for &n in &cfg.dims {
        let result = BoundaryEngine::new(&JetTable::new(), n as usize, 4, cfg.conventions)
            .and_then(|e| e.densities())
            .map_err(|e| e.to_string())
            .and_then(|b| {
                let mu = Rat::new(n as i64 + 1, 2);
                if b[0] != mu {
                    return Err(format!("B_1 = {}, expected {mu}", b[0]));
                }
                match b.iter().enumerate().skip(1).find(|(_, v)| !v.is_zero()) {
                    Some((k, v)) => Err(format!("B_{} = {v}", k + 1)),
                    None => Ok(()),
                }
            });
        out.push(check("flat", format!("n={n}"), result));
    }
    out
}

/// `c_k(rX) = r^{n−k} c_k(X)` on built-in shapes for `K ≤ min(max_order, 4)`.
pub fn scaling_suite(cfg: &SelfTestConfig) -> Vec<Check> {
    let k = cfg.max_order.min(4);
    let cases = [
        (Shape::Disk { r: Rat::ONE }, Rat::int(2)),
        (Shape::Ball3 { r: Rat::new(1, 2) }, Rat::int(3)),
        (Shape::SphereGeodesic { r: Rat::ONE }, Rat::new(3, 2)),
    ];
    cases
        .iter()
        .filter(|(s, _)| cfg.dims.contains(&s.dim()))
        .map(|(shape, r)| {
            let result = builtin_spec(shape, jets_required_order(k, Kind::EuclideanDomain).max(3))
                .map_err(|e| e.to_string())
                .and_then(|spec| scaling_check(&spec, k, r, cfg.conventions).map_err(|e| e.to_string()))
                .and_then(|rep| if rep.passed() { Ok(()) } else { Err(format!("mismatch at k = {:?}", rep.mismatches())) });
            check("scaling", format!("{} r={r}", shape.label()), result)
        })
        .collect()
}

/// All suites in a fixed order.
pub fn run_all(cfg: &SelfTestConfig) -> SelfTestReport {
    let mut checks = residual_suite(cfg);
    checks.extend(parity_suite(cfg));
    checks.extend(flat_suite(cfg));
    checks.extend(scaling_suite(cfg));
    SelfTestReport { config: cfg.clone(), checks }
}
