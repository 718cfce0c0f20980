//! Amplitude-amplification arithmetic and schedule compilers.
//!
//! Every plan is a flat [`Schedule`] over the three Grover-like primitives.
//! The hybrid family is indexed by `t_inner`, the number of `[O_S, G]`
//! rounds that rotate `|N>` part of the way toward `|S>`. `t_inner = 0` is
//! plain Grover search with `O_*`; the largest admissible `t_inner` is the
//! full two-stage search.
//!
//! Reflection about a prepared state `B|N>` is compiled as
//! `B_rev, G, B`, which is valid because each primitive is its own
//! inverse. One outer iteration is `[O_*, B_rev, G, B]`.
//!
//! Each plan carries two costs. `formula_cost` is the closed-form
//! `tau * (c_* + 2 t c_S)` that the optimizer minimizes. `predicted_cost`
//! prices the compiled schedule, which also pays once for the initial
//! preparation `B`, so it exceeds `formula_cost` by `t * c_S`.

use std::f64::consts::FRAC_PI_2;

use crate::cost::{cost_to_f64, Cost};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::problem::ProblemInstance;
use crate::rootfind::optimal_angle;
use crate::statevec::{Primitive, Schedule};

/// Ceilings absorb this much floating-point noise, so that e.g.
/// `(pi/2 - pi/6) / (pi/3)` rounds to `1` rather than `2`.
pub const CEIL_SLACK: f64 = 1e-10;

/// Overlaps at or below this are treated as exactly zero.
const ZERO_OVERLAP: f64 = 1e-12;

fn ceil_nonneg(x: f64) -> u64 {
    (x - CEIL_SLACK).ceil().max(0.0) as u64
}

fn int_cost(n: u64) -> Cost {
    Cost::from_integer(n as i128)
}

/// Number of amplitude-amplification rounds needed to lift an overlap `p`
/// with the target to at least `sqrt(1 - alpha)`:
/// `ceil((asin sqrt(1 - alpha) - asin p) / (2 asin p))`, floored at zero.
pub fn aa_iterations(p: f64, alpha: f64) -> Result<u64> {
    if p == 0.0 {
        return Err(Error::ZeroOverlap);
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("overlap must lie in (0, 1], got {p}")));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let a = p.asin();
    Ok(ceil_nonneg(((1.0 - alpha).sqrt().asin() - a) / (2.0 * a)))
}

/// `tau * (c_T + 2 c_A)`.
pub fn aa_cost(tau: u64, c_t: Cost, c_a: Cost) -> Cost {
    int_cost(tau) * (c_t + c_a * Cost::from_integer(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AaParams {
    pub p: f64,
    pub alpha: f64,
    pub tau: u64,
}

impl AaParams {
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        Ok(Self { p, alpha, tau: aa_iterations(p, alpha)? })
    }

    /// Overlap with the target after `tau` rounds: `sin((2 tau + 1) asin p)`.
    pub fn final_overlap(&self) -> f64 {
        ((2 * self.tau + 1) as f64 * self.p.asin()).sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub schedule: Schedule,
    pub predicted_q_star: u64,
    pub predicted_q_s: u64,
    /// Exact price of `schedule`.
    pub predicted_cost: Cost,
    /// Closed-form cost `tau * (c_* + 2 t c_S)`, without the preparation stage.
    pub formula_cost: Cost,
    /// `|<i*|final>|^2` implied by the rotation angles.
    pub predicted_success: f64,
}

impl Plan {
    fn from_schedule(instance: &ProblemInstance, schedule: Schedule, formula_cost: Cost, success: f64) -> Self {
        let (q_star, q_s) = schedule.query_counts();
        let predicted_cost = instance.c_star() * int_cost(q_star) + instance.c_s() * int_cost(q_s);
        Self { schedule, predicted_q_star: q_star, predicted_q_s: q_s, predicted_cost, formula_cost, predicted_success: success }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridPlan {
    pub t_inner: u64,
    pub tau_outer: u64,
    /// Residual weight outside `|S>` after the inner stage.
    pub alpha: f64,
    pub plan: Plan,
}

/// `asin sqrt(M/N)`, the rotation angle of one `[O_S, G]` round.
pub fn inner_angle(instance: &ProblemInstance) -> f64 {
    instance.sqrt_density().min(1.0).asin()
}

/// `[O_S, G]` repeated `t` times.
pub fn inner_stage(t: u64) -> Schedule {
    Schedule::from_steps(vec![Primitive::OracleS, Primitive::Diffusion]).repeated(t)
}

/// `B` followed by `tau` rounds of `[O_*, B_rev, G, B]`.
pub fn compile_two_stage(t_inner: u64, tau: u64) -> Schedule {
    let inner = inner_stage(t_inner);
    let mut iterate = Schedule::from_steps(vec![Primitive::OracleStar]);
    iterate.append(&inner.reversed());
    iterate.push(Primitive::Diffusion);
    iterate.append(&inner);
    let mut schedule = inner;
    schedule.append(&iterate.repeated(tau));
    schedule
}

/// Largest admissible inner round count, `aa_iterations(sqrt(M/N), 0)`.
pub fn max_inner_iterations(instance: &ProblemInstance) -> u64 {
    aa_iterations(instance.sqrt_density(), 0.0).expect("sqrt(M/N) lies in (0, 1]")
}

/// `<i*|B|N> = sin((2t + 1) asin sqrt(M/N)) / sqrt(M)`.
pub fn inner_overlap(instance: &ProblemInstance, t_inner: u64) -> f64 {
    ((2 * t_inner + 1) as f64 * inner_angle(instance)).sin() / (instance.m() as f64).sqrt()
}

fn check_window(instance: &ProblemInstance, t_inner: u64) -> Result<()> {
    let max = max_inner_iterations(instance);
    if t_inner > max {
        return Err(Error::Overshoot { t_inner, max });
    }
    Ok(())
}

/// Outer rounds for a given inner stage:
/// `ceil(asin sqrt(1 - eps) / (2 asin p) - 1/2)` with `p` the inner overlap.
pub fn hybrid_outer_iterations(instance: &ProblemInstance, t_inner: u64) -> Result<u64> {
    check_window(instance, t_inner)?;
    let p = inner_overlap(instance, t_inner);
    // An inner stage landing on a zero of the sine leaves only rounding noise.
    if p <= ZERO_OVERLAP {
        return Err(Error::ZeroOverlap);
    }
    let target = (1.0 - instance.epsilon()).sqrt().asin();
    Ok(ceil_nonneg(target / (2.0 * p.asin()) - 0.5))
}

/// Closed-form hybrid cost `tau * (c_* + 2 t c_S)` at a given `t_inner`.
pub fn hybrid_formula_cost(instance: &ProblemInstance, t_inner: u64) -> Result<Cost> {
    let tau = hybrid_outer_iterations(instance, t_inner)?;
    Ok(aa_cost(tau, instance.c_star(), instance.c_s() * int_cost(t_inner)))
}

pub fn build_hybrid(instance: &ProblemInstance, t_inner: u64) -> Result<HybridPlan> {
    let tau = hybrid_outer_iterations(instance, t_inner)?;
    let p = inner_overlap(instance, t_inner);
    let s = ((2 * t_inner + 1) as f64 * inner_angle(instance)).sin();
    let success = ((2 * tau + 1) as f64 * p.asin()).sin().powi(2);
    let formula = aa_cost(tau, instance.c_star(), instance.c_s() * int_cost(t_inner));
    let plan = Plan::from_schedule(instance, compile_two_stage(t_inner, tau), formula, success);
    Ok(HybridPlan { t_inner, tau_outer: tau, alpha: 1.0 - s * s, plan })
}

/// Grover search with `O_*` alone.
pub fn build_alg1(instance: &ProblemInstance) -> Result<Plan> {
    let p = 1.0 / (instance.n() as f64).sqrt();
    let aa = AaParams::new(p, instance.epsilon())?;
    let schedule = compile_two_stage(0, aa.tau);
    Ok(Plan::from_schedule(instance, schedule, instance.c_star() * int_cost(aa.tau), aa.final_overlap().powi(2)))
}

/// Full rotation to `|S>` followed by amplification toward `|i*>`: the
/// hybrid plan at the largest admissible `t_inner`. The outer round count
/// uses the overlap the inner stage actually reaches.
pub fn build_alg2(instance: &ProblemInstance) -> Result<HybridPlan> {
    build_hybrid(instance, max_inner_iterations(instance))
}

/// Two-stage cost with the outer count computed from the idealized overlap
/// `1/sqrt(M)` instead of the reached one.
pub fn alg2_displayed_cost(instance: &ProblemInstance) -> Result<Cost> {
    let t0 = max_inner_iterations(instance);
    let tau = aa_iterations(1.0 / (instance.m() as f64).sqrt(), instance.epsilon())?;
    Ok(aa_cost(tau, instance.c_star(), instance.c_s() * int_cost(t0)))
}

/// Continuous optimal angle: the root of
/// `tan(phi + sqrt(M/N)) = phi + (c_*/c_S) sqrt(M/N)`, or `0` if none is positive.
pub fn phi_opt(instance: &ProblemInstance) -> f64 {
    optimal_angle(instance.sqrt_density(), instance.cost_ratio())
}

/// `(c_S sqrt(N) asin sqrt(1 - eps) / 2) * sec(phi_opt + sqrt(M/N))`.
pub fn hybrid_cost_asymptotic(instance: &ProblemInstance) -> f64 {
    let s = instance.sqrt_density();
    let base = cost_to_f64(&instance.c_s()) * (instance.n() as f64).sqrt() * (1.0 - instance.epsilon()).sqrt().asin() / 2.0;
    base / (phi_opt(instance) + s).cos()
}

pub fn optimize_hybrid(instance: &ProblemInstance) -> Result<HybridPlan> {
    optimize_hybrid_with(instance, Exec::default())
}

/// Exhaustive minimization of the closed-form cost over every admissible
/// `t_inner`; ties go to the smaller `t_inner`.
pub fn optimize_hybrid_with(instance: &ProblemInstance, exec: Exec) -> Result<HybridPlan> {
    let (t, _) = best_inner_iterations(instance, exec)?;
    build_hybrid(instance, t)
}

/// `(t_inner, formula_cost)` of the cheapest hybrid plan, without compiling it.
/// Inner stages that leave no overlap with the marked item are skipped.
pub fn best_inner_iterations(instance: &ProblemInstance, exec: Exec) -> Result<(u64, Cost)> {
    let window = max_inner_iterations(instance) as usize + 1;
    let costs = exec.map_range(window, |t| hybrid_formula_cost(instance, t as u64));
    let mut best: Option<(u64, Cost)> = None;
    for (t, cost) in costs.into_iter().enumerate() {
        let cost = match cost {
            Err(Error::ZeroOverlap) => continue,
            c => c?,
        };
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((t as u64, cost));
        }
    }
    Ok(best.expect("window is never empty"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostEnvelope {
    pub alg1_cost: Cost,
    pub alg2_cost: Cost,
    pub hybrid_cost: Cost,
    pub hybrid_t_inner: u64,
    /// `max(c_* sqrt(M), c_S sqrt(N))`.
    pub qcc_big_o: f64,
}

pub fn cost_envelope(instance: &ProblemInstance) -> Result<CostEnvelope> {
    let alg1_cost = build_alg1(instance)?.formula_cost;
    let alg2_cost = hybrid_formula_cost(instance, max_inner_iterations(instance))?;
    let (hybrid_t_inner, hybrid_cost) = best_inner_iterations(instance, Exec::default())?;
    let qcc_big_o = (cost_to_f64(&instance.c_star()) * (instance.m() as f64).sqrt())
        .max(cost_to_f64(&instance.c_s()) * (instance.n() as f64).sqrt());
    Ok(CostEnvelope { alg1_cost, alg2_cost, hybrid_cost, hybrid_t_inner, qcc_big_o })
}

/// Angle of the inner stage measured the way the continuous optimum is:
/// `2 t sqrt(M/N)`.
pub fn inner_phase(instance: &ProblemInstance, t_inner: u64) -> f64 {
    2.0 * t_inner as f64 * instance.sqrt_density()
}

/// Whether one outer round is small enough that the ceiling cannot rotate
/// past the success window: `2 asin p <= pi - 2 asin sqrt(1 - eps)`.
pub fn outer_step_fits_window(instance: &ProblemInstance, t_inner: u64) -> bool {
    let step = 2.0 * inner_overlap(instance, t_inner).asin();
    step <= 2.0 * (FRAC_PI_2 - (1.0 - instance.epsilon()).sqrt().asin())
}
