//! Classical query strategies, the zero-error adversary game, and the
//! Monte Carlo harness for randomized strategies.

pub mod game;
pub mod montecarlo;
pub mod strategies;

use rand_chacha::ChaCha8Rng;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::problem::{CostLedger, OracleAssignment, OracleKind, ProblemInstance};

pub use game::{adversary_game, rcc0, worst_case_over_seeds, GameOutcome};
pub use montecarlo::{
    monte_carlo_fake_fs, monte_carlo_success, rcc_bounded_bound, simulate_with_fake_fs, FakeFsRun, FakeFsSummary,
    InputMix, McEstimate,
};
pub use strategies::{heuristic_corpus, Alg4, Alg5, FlipAnswer, Interleaved, PrefixSetThenStar, StarScan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Query(OracleKind, usize),
    Halt(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryRecord {
    pub kind: OracleKind,
    pub index: usize,
    pub answer: bool,
}

/// A classical decision procedure. Deterministic strategies ignore `rng`;
/// randomized ones draw from it, so fixing the seed derandomizes them.
pub trait Strategy: Send + Sync {
    fn name(&self) -> String;
    fn next(&self, n: usize, m: usize, history: &[QueryRecord], rng: &mut ChaCha8Rng) -> Action;
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn next(&self, n: usize, m: usize, history: &[QueryRecord], rng: &mut ChaCha8Rng) -> Action {
        (**self).next(n, m, history, rng)
    }
}

/// Queries allowed before a run is declared non-halting.
pub fn step_limit(n: usize) -> usize {
    4 * n.max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub answer: bool,
    pub ledger: CostLedger,
    pub history: Vec<QueryRecord>,
}

impl Run {
    pub fn cost(&self) -> Cost {
        self.ledger.total()
    }
}

/// Plays `strategy` against a fixed input.
pub fn run_strategy(
    strategy: &dyn Strategy,
    instance: &ProblemInstance,
    assignment: &OracleAssignment,
    rng: &mut ChaCha8Rng,
) -> Result<Run> {
    run_with_oracle(strategy, instance, rng, |kind, i, ledger| {
        ledger.charge(kind);
        assignment.query(kind, i)
    })
}

/// Plays `strategy` against an arbitrary answering rule; `answer` charges
/// the ledger itself.
pub(crate) fn run_with_oracle<F>(
    strategy: &dyn Strategy,
    instance: &ProblemInstance,
    rng: &mut ChaCha8Rng,
    mut answer: F,
) -> Result<Run>
where
    F: FnMut(OracleKind, usize, &mut CostLedger) -> Result<bool>,
{
    let (n, m) = (instance.n(), instance.m());
    let limit = step_limit(n);
    let mut ledger = CostLedger::new(instance);
    let mut history = Vec::new();
    loop {
        match strategy.next(n, m, &history, rng) {
            Action::Halt(answer) => return Ok(Run { answer, ledger, history }),
            Action::Query(kind, index) => {
                if history.len() >= limit {
                    return Err(Error::StepLimit { limit });
                }
                let a = answer(kind, index, &mut ledger)?;
                history.push(QueryRecord { kind, index, answer: a });
            }
        }
    }
}
