//! Seeded Monte Carlo estimates and the fake set-oracle reduction.
//!
//! Trial `t` of a run with seed `s` uses its own ChaCha stream `(s, t)`, so
//! estimates are identical whether trials run in parallel or not.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_strategy, run_with_oracle, Strategy};
use crate::bounds::{BoundMode, BoundReport};
use crate::cost::cost_to_f64;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::problem::{CostLedger, OracleAssignment, OracleKind, ProblemInstance};

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub estimate: f64,
    /// `sqrt(p (1 - p) / trials)`; zero when every trial agrees.
    pub stderr: f64,
}

impl McEstimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Self { trials, estimate: p, stderr: (p * (1.0 - p) / trials as f64).sqrt() }
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    Ok(())
}

/// Which random inputs a Monte Carlo run draws. Sets always have size `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputMix {
    /// Even trials have a marked item, odd trials do not.
    #[default]
    Balanced,
    MarkedOnly,
}

fn trial_input(instance: &ProblemInstance, trial: u64, mix: InputMix, rng: &mut ChaCha8Rng) -> Result<OracleAssignment> {
    let (n, m) = (instance.n(), instance.m());
    let set = sample(rng, n, m).into_vec();
    let marked = mix == InputMix::MarkedOnly || trial.is_multiple_of(2);
    let i_star = marked.then(|| set[rng.random_range(0..m)]);
    OracleAssignment::new(n, set, i_star)
}

/// Fraction of seeded random inputs on which `strategy` answers correctly.
pub fn monte_carlo_success(
    strategy: &dyn Strategy,
    instance: &ProblemInstance,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<McEstimate> {
    check_trials(trials)?;
    let outcomes = exec.map_range(trials as usize, |t| -> Result<bool> {
        let mut rng = trial_rng(seed, t as u64);
        let input = trial_input(instance, t as u64, InputMix::Balanced, &mut rng)?;
        Ok(run_strategy(strategy, instance, &input, &mut rng)?.answer == input.sto_value())
    });
    let mut hits = 0;
    for o in outcomes {
        hits += u64::from(o?);
    }
    Ok(McEstimate::from_counts(hits, trials))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FakeFsRun {
    pub answer: bool,
    /// Every query, real or simulated, is an `f_*` query here.
    pub ledger: CostLedger,
    /// False exactly when the marked item exists and lies in `T`.
    pub valid: bool,
    /// Queries the wrapped strategy believes it made, `(q_*, q_S)`.
    pub inner_counts: (u64, u64),
}

/// Runs `strategy` with `f_S` replaced by `f_T(i) OR f_*(i)` for a random
/// `T` of size `M - 1`. Only `f_*` of `assignment` is consulted.
pub fn simulate_with_fake_fs(
    strategy: &dyn Strategy,
    instance: &ProblemInstance,
    assignment: &OracleAssignment,
    rng: &mut ChaCha8Rng,
) -> Result<FakeFsRun> {
    let (n, m) = (instance.n(), instance.m());
    if assignment.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: assignment.n() });
    }
    let mut in_t = vec![false; n];
    for i in sample(rng, n, m - 1) {
        in_t[i] = true;
    }
    let valid = assignment.i_star().is_none_or(|i| !in_t[i]);
    let mut real = CostLedger::new(instance);
    let run = run_with_oracle(strategy, instance, rng, |kind, i, ledger| {
        ledger.charge(kind);
        real.charge(OracleKind::Star);
        let star = assignment.query(OracleKind::Star, i)?;
        Ok(match kind {
            OracleKind::Star => star,
            OracleKind::Set => in_t[i] || star,
        })
    })?;
    Ok(FakeFsRun { answer: run.answer, ledger: real, valid, inner_counts: (run.ledger.q_star, run.ledger.q_s) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FakeFsSummary {
    pub success: McEstimate,
    pub validity: McEstimate,
}

/// Monte Carlo over [`simulate_with_fake_fs`].
pub fn monte_carlo_fake_fs(
    strategy: &dyn Strategy,
    instance: &ProblemInstance,
    mix: InputMix,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<FakeFsSummary> {
    check_trials(trials)?;
    let outcomes = exec.map_range(trials as usize, |t| -> Result<(bool, bool)> {
        let mut rng = trial_rng(seed, t as u64);
        let input = trial_input(instance, t as u64, mix, &mut rng)?;
        let run = simulate_with_fake_fs(strategy, instance, &input, &mut rng)?;
        Ok((run.answer == input.sto_value(), run.valid))
    });
    let (mut hits, mut valid) = (0, 0);
    for o in outcomes {
        let (h, v) = o?;
        hits += u64::from(h);
        valid += u64::from(v);
    }
    Ok(FakeFsSummary { success: McEstimate::from_counts(hits, trials), validity: McEstimate::from_counts(valid, trials) })
}

/// Minimum of `q_* c_* + q_S c_S` subject to `q_* >= gamma1 M` and
/// `q_* + q_S >= gamma2 N`; for `M/N > 1/9` only the first constraint is
/// available and the value is `gamma1 M c_*`.
pub fn rcc_bounded_bound(instance: &ProblemInstance, gamma1: f64, gamma2: f64) -> Result<BoundReport> {
    if !(gamma1 > 0.0 && gamma2 > 0.0) {
        return Err(Error::InvalidParameter("gamma1 and gamma2 must be positive".into()));
    }
    let (n, m) = (instance.n() as f64, instance.m() as f64);
    let (c_star, c_s) = (cost_to_f64(&instance.c_star()), cost_to_f64(&instance.c_s()));
    let floor = gamma1 * m;
    let (value, provenance) = if m / n > 1.0 / 9.0 {
        (floor * c_star, "dense set: only the q_* >= gamma1 M constraint applies".to_string())
    } else {
        let split = floor * c_star + (gamma2 * n - floor).max(0.0) * c_s;
        let star_only = floor.max(gamma2 * n) * c_star;
        (split.min(star_only), format!("two-vertex linear program, gamma1 = {gamma1}, gamma2 = {gamma2}"))
    };
    Ok(BoundReport { name: "rcc_bounded".into(), value, mode: BoundMode::Asymptotic, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::strategies::{Alg4, Alg5, FlipAnswer};
    use crate::cost::Cost;

    fn inst(n: usize, m: usize, c_star: i128, c_s: i128) -> ProblemInstance {
        ProblemInstance::new(n, m, Cost::from_integer(c_star), Cost::from_integer(c_s), 0.0).unwrap()
    }

    #[test]
    fn exact_strategy_never_fails() {
        let e = monte_carlo_success(&Alg4, &inst(20, 4, 3, 1), 200, 7, Exec::default()).unwrap();
        assert_eq!((e.estimate, e.stderr), (1.0, 0.0));
        let one = monte_carlo_success(&Alg4, &inst(20, 4, 3, 1), 1, 7, Exec::default()).unwrap();
        assert_eq!(one.stderr, 0.0);
        assert!(monte_carlo_success(&Alg4, &inst(20, 4, 3, 1), 0, 7, Exec::default()).is_err());
    }

    #[test]
    fn estimates_do_not_depend_on_exec() {
        let s = FlipAnswer { base: Alg5::default(), flip: 0.25 };
        let i = inst(50, 5, 3, 1);
        let a = monte_carlo_fake_fs(&s, &i, InputMix::Balanced, 500, 11, Exec::Sequential).unwrap();
        let b = monte_carlo_fake_fs(&s, &i, InputMix::Balanced, 500, 11, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fake_oracle_accounting() {
        let i = inst(30, 4, 3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..50 {
            let a = crate::problem::random_instance(30, 4, seed % 2 == 0, seed).unwrap();
            let run = simulate_with_fake_fs(&Alg5::default(), &i, &a, &mut rng).unwrap();
            assert_eq!(run.ledger.q_s, 0);
            assert_eq!(run.ledger.q_star, run.inner_counts.0 + run.inner_counts.1);
            if !a.is_marked() {
                assert!(run.valid);
            }
            if run.valid {
                assert_eq!(run.answer, a.sto_value());
            }
        }
    }

    #[test]
    fn bounded_error_program() {
        let flat = inst(1000, 10, 1, 1);
        assert!((rcc_bounded_bound(&flat, 1.0, 1.0).unwrap().value - 1000.0).abs() < 1e-9);
        let steep = inst(1000, 10, 1000, 1);
        assert!((rcc_bounded_bound(&steep, 1.0, 1.0).unwrap().value - (10_000.0 + 990.0)).abs() < 1e-9);
        let dense = inst(90, 20, 7, 1);
        assert!((rcc_bounded_bound(&dense, 0.5, 1.0).unwrap().value - 70.0).abs() < 1e-9);
        assert!(rcc_bounded_bound(&dense, 0.0, 1.0).is_err());
    }
}
