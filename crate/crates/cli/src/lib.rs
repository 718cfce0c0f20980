//! Parameter sweeps and figure data for the `sto` command-line tool.
//!
//! A sweep config is flat `key = value` text:
//!
//! ```text
//! # four points
//! n = 1024, 4096
//! m = 16
//! c_star = 1:3:4
//! c_s = 1
//! epsilon = 0.1
//! quantities = plans, conqcc_bound
//! seed = 7
//! ```
//!
//! List items are separated by commas; `lo:step:hi` expands to an inclusive
//! arithmetic range and is evaluated in exact rational arithmetic.

use std::fmt;
use std::path::PathBuf;

use sto_core::bounds::{conqcc_lower_bound, exact_lower_bound, qcc_lower_bound, ConqccMode};
use sto_core::cost::cost_to_f64;
use sto_core::problem::random_instance;
use sto_core::schedules::{
    alg2_displayed_cost, best_inner_iterations, build_alg1, hybrid_cost_asymptotic, hybrid_formula_cost,
    max_inner_iterations, optimize_hybrid_with,
};
use sto_core::statevec::{run_schedule, success_probability};
use sto_core::subspace::{audit_schedule, AuditOptions};
use sto_core::{parse_cost, Cost, Exec, OracleAssignment, ProblemInstance};

/// A malformed config or flag; the binary exits with status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Sweep columns, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    Alg1Cost,
    Alg2Cost,
    HybridTInner,
    HybridCost,
    HybridAsymptotic,
    QccBound,
    ConqccBound,
    ExactBound,
    ExactDiagnostic,
    Success,
    LedgerCost,
    AuditMaxRate,
    AuditBound,
    AuditPass,
}

impl Quantity {
    pub const ALL: [Quantity; 14] = [
        Quantity::Alg1Cost,
        Quantity::Alg2Cost,
        Quantity::HybridTInner,
        Quantity::HybridCost,
        Quantity::HybridAsymptotic,
        Quantity::QccBound,
        Quantity::ConqccBound,
        Quantity::ExactBound,
        Quantity::ExactDiagnostic,
        Quantity::Success,
        Quantity::LedgerCost,
        Quantity::AuditMaxRate,
        Quantity::AuditBound,
        Quantity::AuditPass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Alg1Cost => "alg1_cost",
            Quantity::Alg2Cost => "alg2_cost",
            Quantity::HybridTInner => "hybrid_t_inner",
            Quantity::HybridCost => "hybrid_cost",
            Quantity::HybridAsymptotic => "hybrid_asymptotic",
            Quantity::QccBound => "qcc_bound",
            Quantity::ConqccBound => "conqcc_bound",
            Quantity::ExactBound => "exact_bound",
            Quantity::ExactDiagnostic => "exact_diagnostic",
            Quantity::Success => "success",
            Quantity::LedgerCost => "ledger_cost",
            Quantity::AuditMaxRate => "audit_max_rate",
            Quantity::AuditBound => "audit_bound",
            Quantity::AuditPass => "audit_pass",
        }
    }

    /// A single quantity name or one of the groups `plans`, `bounds`,
    /// `simulations`, `audits`.
    pub fn parse_group(name: &str) -> Result<Vec<Quantity>, UsageError> {
        use Quantity::*;
        Ok(match name {
            "plans" => vec![Alg1Cost, Alg2Cost, HybridTInner, HybridCost, HybridAsymptotic],
            "bounds" => vec![QccBound, ConqccBound, ExactBound, ExactDiagnostic],
            "simulations" => vec![Success, LedgerCost],
            "audits" => vec![AuditMaxRate, AuditBound, AuditPass],
            other => vec![*Self::ALL
                .iter()
                .find(|q| q.name() == other)
                .ok_or_else(|| usage(format!("unknown quantity {other:?}")))?],
        })
    }

    fn needs_plan(self) -> bool {
        matches!(self, Quantity::Success | Quantity::LedgerCost | Quantity::AuditMaxRate | Quantity::AuditPass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub c_star: Vec<Cost>,
    pub c_s: Vec<Cost>,
    pub epsilon: Vec<f64>,
    /// Sorted and deduplicated.
    pub quantities: Vec<Quantity>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

fn expand<T>(key: &str, value: &str, parse: impl Fn(&str) -> Option<T>, step: impl Fn(&T, &T, &T) -> Option<Vec<T>>) -> Result<Vec<T>, UsageError> {
    let bad = |item: &str| usage(format!("{key}: cannot parse {item:?}"));
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim) {
        let parts: Vec<&str> = item.split(':').map(str::trim).collect();
        match parts[..] {
            [one] => out.push(parse(one).ok_or_else(|| bad(one))?),
            [lo, st, hi] => {
                let (lo, st, hi) = (parse(lo).ok_or_else(|| bad(lo))?, parse(st).ok_or_else(|| bad(st))?, parse(hi).ok_or_else(|| bad(hi))?);
                let values = step(&lo, &st, &hi).ok_or_else(|| usage(format!("{key}: range {item:?} needs a positive step and lo <= hi")))?;
                out.extend(values);
            }
            _ => return Err(bad(item)),
        }
    }
    Ok(out)
}

const MAX_RANGE: usize = 1_000_000;

fn rational_range(lo: &Cost, step: &Cost, hi: &Cost) -> Option<Vec<Cost>> {
    if *step <= Cost::from_integer(0) || lo > hi {
        return None;
    }
    let mut out = Vec::new();
    let mut x = *lo;
    while x <= *hi && out.len() < MAX_RANGE {
        out.push(x);
        x += step;
    }
    Some(out)
}

fn parse_costs(key: &str, value: &str) -> Result<Vec<Cost>, UsageError> {
    expand(key, value, |s| parse_cost(s).ok(), rational_range)
}

fn parse_sizes(key: &str, value: &str) -> Result<Vec<usize>, UsageError> {
    expand(key, value, |s| s.parse::<usize>().ok(), |lo, st, hi| {
        (*st > 0 && lo <= hi).then(|| (*lo..=*hi).step_by(*st).collect())
    })
}

fn set_once<T>(slot: &mut Option<T>, value: T, idx: usize, key: &str) -> Result<(), UsageError> {
    match slot.replace(value) {
        Some(_) => Err(usage(format!("line {}: duplicate key {key:?}", idx + 1))),
        None => Ok(()),
    }
}

fn require<T>(value: Option<T>, key: &str) -> Result<T, UsageError> {
    value.ok_or_else(|| usage(format!("missing key {key:?}")))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut n = None;
        let mut m = None;
        let mut c_star = None;
        let mut c_s = None;
        let mut epsilon = None;
        let mut quantities = None;
        let mut out = None;
        let mut seed = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("line {}: expected `key = value`", idx + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => set_once(&mut n, parse_sizes(key, value)?, idx, key)?,
                "m" => set_once(&mut m, parse_sizes(key, value)?, idx, key)?,
                "c_star" => set_once(&mut c_star, parse_costs(key, value)?, idx, key)?,
                "c_s" => set_once(&mut c_s, parse_costs(key, value)?, idx, key)?,
                "epsilon" => {
                    let eps = parse_costs(key, value)?.iter().map(cost_to_f64).collect();
                    set_once(&mut epsilon, eps, idx, key)?
                }
                "quantities" => {
                    let mut qs = Vec::new();
                    for name in value.split(',').map(str::trim) {
                        qs.extend(Quantity::parse_group(name)?);
                    }
                    set_once(&mut quantities, qs, idx, key)?
                }
                "out" => set_once(&mut out, PathBuf::from(value), idx, key)?,
                "seed" => {
                    let s = value.parse::<u64>().map_err(|_| usage(format!("seed: cannot parse {value:?}")))?;
                    set_once(&mut seed, s, idx, key)?
                }
                other => return Err(usage(format!("line {}: unknown key {other:?}", idx + 1))),
            }
        }
        let mut quantities = quantities.unwrap_or_else(|| {
            let mut q = Quantity::parse_group("plans").unwrap();
            q.extend(Quantity::parse_group("bounds").unwrap());
            q
        });
        quantities.sort();
        quantities.dedup();
        let config = SweepConfig {
            n: require(n, "n")?,
            m: require(m, "m")?,
            c_star: require(c_star, "c_star")?,
            c_s: require(c_s, "c_s")?,
            epsilon: epsilon.unwrap_or_else(|| vec![0.1]),
            quantities,
            out,
            seed: seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.n.is_empty() || self.m.is_empty() || self.c_star.is_empty() || self.c_s.is_empty() || self.epsilon.is_empty() {
            return Err(usage("grid is empty"));
        }
        if self.quantities.is_empty() {
            return Err(usage("no quantities requested"));
        }
        Ok(())
    }

    /// Grid points in output order: `n` varies slowest, `epsilon` fastest.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &m in &self.m {
                for &c_star in &self.c_star {
                    for &c_s in &self.c_s {
                        for &epsilon in &self.epsilon {
                            out.push(GridPoint { n, m, c_star, c_s, epsilon });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub m: usize,
    pub c_star: Cost,
    pub c_s: Cost,
    pub epsilon: f64,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} M={} c_star={} c_s={} epsilon={}",
            self.n,
            self.m,
            num(&self.c_star),
            num(&self.c_s),
            self.epsilon
        )
    }
}

/// CSV cell for an exact cost.
pub fn num(c: &Cost) -> String {
    cost_to_f64(c).to_string()
}

/// Largest `N` the statevector simulation is run at.
pub const SIMULATION_LIMIT: usize = 1 << 22;

fn evaluate(point: &GridPoint, quantities: &[Quantity], seed: u64, exec: Exec) -> sto_core::Result<Vec<String>> {
    let inst = ProblemInstance::new(point.n, point.m, point.c_star, point.c_s, point.epsilon)?;
    let plan = if quantities.iter().any(|q| q.needs_plan()) { Some(optimize_hybrid_with(&inst, exec)?) } else { None };
    let audit = if quantities.iter().any(|q| matches!(q, Quantity::AuditMaxRate | Quantity::AuditBound | Quantity::AuditPass)) {
        let a = OracleAssignment::new(point.n, 0..point.m, Some(0))?;
        let schedule = plan.as_ref().map(|p| p.plan.schedule.clone()).unwrap_or_default();
        Some(audit_schedule(&inst, &a, &schedule, AuditOptions::default())?)
    } else {
        None
    };
    let mut row = Vec::with_capacity(quantities.len());
    for q in quantities {
        let cell = match q {
            Quantity::Alg1Cost => num(&build_alg1(&inst)?.formula_cost),
            Quantity::Alg2Cost => num(&hybrid_formula_cost(&inst, max_inner_iterations(&inst))?),
            Quantity::HybridTInner => best_inner_iterations(&inst, exec)?.0.to_string(),
            Quantity::HybridCost => num(&best_inner_iterations(&inst, exec)?.1),
            Quantity::HybridAsymptotic => hybrid_cost_asymptotic(&inst).to_string(),
            Quantity::QccBound => qcc_lower_bound(&inst).value.to_string(),
            Quantity::ConqccBound => conqcc_lower_bound(&inst, ConqccMode::Asymptotic)?.value.to_string(),
            Quantity::ExactBound => exact_lower_bound(&inst)?.report.value.to_string(),
            Quantity::ExactDiagnostic => exact_lower_bound(&inst)?.diagnostic.map(|c| c.to_string()).unwrap_or_default(),
            Quantity::Success | Quantity::LedgerCost => {
                if point.n > SIMULATION_LIMIT {
                    return Err(sto_core::Error::InvalidParameter(format!(
                        "statevector simulation is limited to N <= {SIMULATION_LIMIT}"
                    )));
                }
                let schedule = &plan.as_ref().expect("plan computed").plan.schedule;
                let a = random_instance(point.n, point.m, true, seed)?;
                let (state, ledger) = run_schedule(&inst, &a, schedule)?;
                if *q == Quantity::Success {
                    success_probability(&state, &a)?.to_string()
                } else {
                    num(&ledger.total())
                }
            }
            Quantity::AuditMaxRate => audit.as_ref().and_then(|t| t.max_rate()).map(|r| r.to_string()).unwrap_or_default(),
            Quantity::AuditBound => audit.as_ref().expect("audit computed").bound_per_cost.to_string(),
            Quantity::AuditPass => u8::from(audit.as_ref().expect("audit computed").passes()).to_string(),
        };
        row.push(cell);
    }
    Ok(row)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// Header plus one row per successful grid point, in grid order.
    pub csv: String,
    pub rows: usize,
    pub failures: Vec<(GridPoint, String)>,
}

pub fn run_sweep(config: &SweepConfig, exec: Exec) -> Result<SweepOutput, UsageError> {
    config.validate()?;
    let points = config.points();
    let results = exec.map(&points, |p| evaluate(p, &config.quantities, config.seed, exec));
    let mut w = csv_writer();
    let header = ["n", "m", "c_star", "c_s", "epsilon"].into_iter().chain(config.quantities.iter().map(|q| q.name()));
    w.write_record(header).expect("in-memory write");
    let mut failures = Vec::new();
    let mut rows = 0;
    for (p, r) in points.iter().zip(results) {
        match r {
            Ok(cells) => {
                let mut record = vec![p.n.to_string(), p.m.to_string(), num(&p.c_star), num(&p.c_s), p.epsilon.to_string()];
                record.extend(cells);
                w.write_record(&record).expect("in-memory write");
                rows += 1;
            }
            Err(e) => failures.push((*p, e.to_string())),
        }
    }
    Ok(SweepOutput { csv: finish(w), rows, failures })
}

/// Figure-2 data: `c_S = 0.01, ..., 1.00` at `c_* = 1`, `N = 10^4`, `M = 400`, `epsilon = 0`.
pub fn fig2(exec: Exec) -> sto_core::Result<String> {
    let grid: Vec<i128> = (1..=100).collect();
    let rows = exec.map(&grid, |&k| -> sto_core::Result<Vec<String>> {
        let c_s = Cost::new(k, 100);
        let inst = ProblemInstance::new(10_000, 400, Cost::from_integer(1), c_s, 0.0)?;
        Ok(vec![
            format!("{:.2}", cost_to_f64(&c_s)),
            hybrid_cost_asymptotic(&inst).to_string(),
            num(&best_inner_iterations(&inst, Exec::Sequential)?.1),
            num(&build_alg1(&inst)?.formula_cost),
            num(&alg2_displayed_cost(&inst)?),
            conqcc_lower_bound(&inst, ConqccMode::Asymptotic)?.value.to_string(),
            qcc_lower_bound(&inst).value.to_string(),
        ])
    });
    let mut w = csv_writer();
    w.write_record([
        "c_s",
        "hybrid_asymptotic",
        "hybrid_exact_optimized",
        "alg1_cost",
        "alg2_cost",
        "conqcc_asymptotic",
        "qcc_adversary",
    ])
    .expect("in-memory write");
    for r in rows {
        w.write_record(&r?).expect("in-memory write");
    }
    Ok(finish(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_exact() {
        let c = SweepConfig::parse("n = 100\nm = 4\nc_star = 1\nc_s = 0.1:0.1:0.3\nepsilon = 0:0.1:0.3").unwrap();
        assert_eq!(c.c_s, vec![Cost::new(1, 10), Cost::new(2, 10), Cost::new(3, 10)]);
        assert_eq!(c.epsilon, vec![0.0, 0.1, 0.2, 0.3]);
        let d = SweepConfig::parse("n = 10:5:25, 99\nm = 2\nc_star = 1\nc_s = 1").unwrap();
        assert_eq!(d.n, vec![10, 15, 20, 25, 99]);
    }

    #[test]
    fn groups_expand_and_dedup() {
        let c = SweepConfig::parse("n=10\nm=2\nc_star=1\nc_s=1\nquantities = hybrid_cost, plans").unwrap();
        assert_eq!(c.quantities.len(), 5);
        assert_eq!(c.quantities[0], Quantity::Alg1Cost);
    }

    #[test]
    fn malformed_configs() {
        for text in [
            "n = 10\nm = 2\nc_star = 1",
            "n = 10\nm = 2\nc_star = 1\nc_s = 1\nfoo = 3",
            "n = 10\nn = 11\nm = 2\nc_star = 1\nc_s = 1",
            "n = ten\nm = 2\nc_star = 1\nc_s = 1",
            "n = 10\nm = 2\nc_star = 1\nc_s = 3:1:1",
            "n = 10\nm = 2\nc_star = 1\nc_s = 1\nquantities = teleport",
            "n = 10\nm 2",
        ] {
            assert!(SweepConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn failing_points_are_listed_not_written() {
        let c = SweepConfig::parse("n = 10\nm = 2, 20\nc_star = 1\nc_s = 1").unwrap();
        let out = run_sweep(&c, Exec::Sequential).unwrap();
        assert_eq!(out.rows, 1);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].0.m, 20);
    }
}
