//! Closed-form quantum lower bounds.

use std::f64::consts::PI;

use num_traits::{ToPrimitive, Zero};

use crate::cost::{cost_to_f64, format_cost, Cost};
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::schedules::phi_opt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMode {
    ExactInteger,
    Asymptotic,
}

impl BoundMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundMode::ExactInteger => "exact_integer",
            BoundMode::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub mode: BoundMode,
    /// How the value was obtained.
    pub provenance: String,
}

impl BoundReport {
    fn new(name: &str, value: f64, mode: BoundMode, provenance: impl Into<String>) -> Self {
        Self { name: name.to_string(), value: value.max(0.0), mode, provenance: provenance.into() }
    }
}

/// CSV with columns `name,value,mode,provenance`.
pub fn bounds_to_csv(reports: &[BoundReport]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
    w.write_record(["name", "value", "mode", "provenance"]).map_err(io)?;
    for r in reports {
        w.write_record([r.name.as_str(), &r.value.to_string(), r.mode.as_str(), r.provenance.as_str()]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn check_epsilon(epsilon: f64, max: f64) -> Result<()> {
    if !(0.0..=max).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in [0, {max}], got {epsilon}")));
    }
    Ok(())
}

/// `(1 - 2 sqrt(eps (1 - eps))) / 2 * sqrt(mu mu' / (l l'))`.
pub fn basic_adversary_bound(mu: f64, mu_prime: f64, l: f64, l_prime: f64, epsilon: f64) -> Result<f64> {
    if [mu, mu_prime, l, l_prime].iter().any(|&x| x.is_nan() || x <= 0.0) {
        return Err(Error::InvalidParameter("adversary weights must be positive".into()));
    }
    check_epsilon(epsilon, 0.5)?;
    let factor = ((1.0 - 2.0 * (epsilon * (1.0 - epsilon)).sqrt()) / 2.0).max(0.0);
    Ok(factor * (mu * mu_prime / (l * l_prime)).sqrt())
}

/// `(1 - 2 sqrt(eps (1 - eps)) - 2 eps) / 2`, clamped at zero.
pub fn adversary_prefactor(epsilon: f64) -> f64 {
    ((1.0 - (2.0 * (epsilon * (1.0 - epsilon)).sqrt() + 2.0 * epsilon)) / 2.0).max(0.0)
}

/// `max{c_S g sqrt(N - M + 1), c_* g sqrt(M)}`.
pub fn qcc_lower_bound(instance: &ProblemInstance) -> BoundReport {
    let g = adversary_prefactor(instance.epsilon());
    let (n, m) = (instance.n() as f64, instance.m() as f64);
    let set_term = cost_to_f64(&instance.c_s()) * g * (n - m + 1.0).sqrt();
    let star_term = cost_to_f64(&instance.c_star()) * g * m.sqrt();
    BoundReport::new(
        "qcc_adversary",
        set_term.max(star_term),
        BoundMode::ExactInteger,
        "adversary method; paired-removal matrix bounds c_S queries, same-set matrix bounds c_* queries",
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstoParams {
    pub m_star: u64,
    pub m_s: u64,
    pub scale: Cost,
}

/// Largest `i >= 1` with `ceil((pi/4) sqrt i) + 1 <= budget`.
pub fn block_size(budget: Cost) -> Result<u64> {
    let whole = budget.floor().to_integer();
    if whole < 2 {
        return Err(Error::EstoInfeasible { scaled_cost: format_cost(&budget) });
    }
    let admissible = |i: u64| ((PI / 4.0) * (i as f64).sqrt()).ceil() + 1.0 <= whole as f64;
    let l = (whole - 1) as f64;
    let mut i = ((4.0 * l / PI).powi(2)).floor().to_u64().unwrap_or(1).max(1);
    while i > 1 && !admissible(i) {
        i -= 1;
    }
    while admissible(i + 1) {
        i += 1;
    }
    Ok(i)
}

pub fn esto_params(c_star: Cost, c_s: Cost, scale: Cost) -> Result<EstoParams> {
    if scale <= Cost::zero() {
        return Err(Error::InvalidParameter("scale K must be positive".into()));
    }
    Ok(EstoParams { m_star: block_size(c_star * scale)?, m_s: block_size(c_s * scale)?, scale })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConqccMode {
    /// Block sizes computed at costs scaled by `K`.
    ExactInteger(Cost),
    Asymptotic,
}

pub fn conqcc_lower_bound(instance: &ProblemInstance, mode: ConqccMode) -> Result<BoundReport> {
    let eps = instance.epsilon();
    let base = 1.0 - 2.0 * (eps * (1.0 - eps)).sqrt();
    let (n, m) = (instance.n() as f64, instance.m() as f64);
    match mode {
        ConqccMode::ExactInteger(k) => {
            let p = esto_params(instance.c_star(), instance.c_s(), k)?;
            let value = base / 4.0 * (m * p.m_star as f64).sqrt().max(((n - m + 1.0) * p.m_s as f64).sqrt()) / cost_to_f64(&k);
            Ok(BoundReport::new(
                "conqcc",
                value,
                BoundMode::ExactInteger,
                format!("expanded single-oracle search, block sizes m_* = {}, m_S = {} at K = {}", p.m_star, p.m_s, format_cost(&k)),
            ))
        }
        ConqccMode::Asymptotic => {
            let value = base / PI
                * (cost_to_f64(&instance.c_star()) * m.sqrt()).max(cost_to_f64(&instance.c_s()) * (n - m + 1.0).sqrt());
            Ok(BoundReport::new(
                "conqcc",
                value,
                BoundMode::Asymptotic,
                "expanded single-oracle search in the K -> infinity limit, using m(Kc)/K^2 -> (4c/pi)^2",
            ))
        }
    }
}

/// Regime diagnostic below which the Grover-like bound is trusted.
pub const REGIME_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactBound {
    pub report: BoundReport,
    /// `c_S sqrt N / (c_* sqrt(eps) 2 M cos(phi_opt + sqrt(M/N)))`; `None` at `eps = 0`.
    pub diagnostic: Option<f64>,
}

impl ExactBound {
    /// `Some(true)` when the diagnostic is at most [`REGIME_THRESHOLD`].
    pub fn in_regime(&self) -> Option<bool> {
        self.diagnostic.map(|c| c <= REGIME_THRESHOLD)
    }
}

/// Lower bound for every Grover-like algorithm:
/// `(c_S sqrt(N) asin sqrt(1 - eps) / 2) sec(phi_opt + sqrt(M/N))`.
pub fn exact_lower_bound(instance: &ProblemInstance) -> Result<ExactBound> {
    let (n, m) = (instance.n(), instance.m());
    if m < 2 || n <= m {
        return Err(Error::DegenerateFrame { n, m });
    }
    let s = instance.sqrt_density();
    let cos = (phi_opt(instance) + s).cos();
    let c_s = cost_to_f64(&instance.c_s());
    let c_star = cost_to_f64(&instance.c_star());
    let eps = instance.epsilon();
    let value = c_s * (n as f64).sqrt() * (1.0 - eps).sqrt().asin() / 2.0 / cos;
    let diagnostic = (eps > 0.0).then(|| c_s * (n as f64).sqrt() / (c_star * eps.sqrt() * 2.0 * m as f64 * cos));
    let regime = match diagnostic {
        None => "diagnostic unavailable at epsilon = 0".to_string(),
        Some(c) if c <= REGIME_THRESHOLD => format!("in regime, C = {c}"),
        Some(c) => format!("asymptotic-regime only, C = {c}"),
    };
    Ok(ExactBound {
        report: BoundReport::new(
            "grover_like_exact",
            value,
            BoundMode::Asymptotic,
            format!("progress-function bound for Grover-like algorithms; {regime}"),
        ),
        diagnostic,
    })
}

/// Every bound that applies to `instance`, skipping those whose
/// preconditions fail.
pub fn all_bounds(instance: &ProblemInstance, scale: Cost) -> Vec<BoundReport> {
    let mut out = vec![qcc_lower_bound(instance)];
    if let Ok(r) = conqcc_lower_bound(instance, ConqccMode::Asymptotic) {
        out.push(r);
    }
    if let Ok(r) = conqcc_lower_bound(instance, ConqccMode::ExactInteger(scale)) {
        out.push(r);
    }
    if let Ok(r) = exact_lower_bound(instance) {
        out.push(r.report);
    }
    out
}
