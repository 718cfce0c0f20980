//! The zero-error adversary game.
//!
//! The adversary answers adaptively while keeping the answer undecided as
//! long as it can:
//!
//! 1. the first `M - 1` items queried with `f_S` are members of `S`;
//! 2. once all items but one have been touched by either oracle, the
//!    untouched item is committed to `S`;
//! 3. `f_*` answers 0 unless the queried item is the last candidate left for
//!    the marked item, which makes the last completely queried item marked.
//!
//! A halt is certified when its answer is right for every input consistent
//! with the transcript. Unmarked inputs may have any set, so answer 0 is
//! certified exactly when no marked input remains consistent, and answer 1
//! exactly when some `f_*` query returned 1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{run_with_oracle, Strategy};
use crate::cost::{format_cost, Cost};
use crate::error::Result;
use crate::problem::{OracleKind, ProblemInstance};

/// `min{N c_*, (N - 1) c_S + M c_*}`.
pub fn rcc0(instance: &ProblemInstance) -> Cost {
    let n = Cost::from_integer(instance.n() as i128);
    let m = Cost::from_integer(instance.m() as i128);
    let one = Cost::from_integer(1);
    (n * instance.c_star()).min((n - one) * instance.c_s() + m * instance.c_star())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Membership {
    Unknown,
    In,
    Out,
}

#[derive(Debug, Clone)]
struct Adversary {
    n: usize,
    m: usize,
    membership: Vec<Membership>,
    /// Result of an `f_*` query, if one was made.
    star: Vec<Option<bool>>,
    /// Items answered 1 under rule 1.
    rule_one: usize,
    touched: Vec<bool>,
    revealed: Option<usize>,
}

impl Adversary {
    fn new(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            membership: vec![Membership::Unknown; n],
            star: vec![None; n],
            rule_one: 0,
            touched: vec![false; n],
            revealed: None,
        }
    }

    fn count(&self, state: Membership) -> usize {
        self.membership.iter().filter(|&&s| s == state).count()
    }

    /// Whether `(S, c)` with `|S| = M` can still be the input.
    fn candidate(&self, c: usize, excluded: Option<usize>) -> bool {
        if Some(c) == excluded || self.membership[c] == Membership::Out || self.star[c] == Some(false) {
            return false;
        }
        let ins = self.count(Membership::In) + usize::from(self.membership[c] != Membership::In);
        ins <= self.m && self.m <= self.n - self.count(Membership::Out)
    }

    fn marked_consistent(&self) -> bool {
        self.revealed.is_some() || (0..self.n).any(|c| self.candidate(c, None))
    }

    fn touch(&mut self, i: usize) {
        self.touched[i] = true;
        let untouched: Vec<usize> = (0..self.n).filter(|&j| !self.touched[j]).collect();
        if let [last] = untouched[..] {
            if self.membership[last] == Membership::Unknown && self.count(Membership::In) < self.m {
                self.membership[last] = Membership::In;
            }
        }
    }

    fn answer_set(&mut self, i: usize) -> bool {
        let a = match self.membership[i] {
            Membership::In => true,
            Membership::Out => false,
            Membership::Unknown => {
                let rule_one = self.revealed.is_none() && self.rule_one + 1 < self.m;
                // Saying 0 must leave room for a set of size M.
                let room = self.n - self.count(Membership::Out) > self.m;
                if rule_one || !room {
                    if rule_one {
                        self.rule_one += 1;
                    }
                    self.membership[i] = Membership::In;
                    true
                } else {
                    self.membership[i] = Membership::Out;
                    false
                }
            }
        };
        self.touch(i);
        a
    }

    fn answer_star(&mut self, i: usize) -> bool {
        let a = match self.star[i] {
            Some(a) => a,
            None if self.revealed.is_some() => false,
            None => {
                let others = (0..self.n).any(|c| self.candidate(c, Some(i)));
                let hit = !others && self.candidate(i, None);
                if hit {
                    self.revealed = Some(i);
                    self.membership[i] = Membership::In;
                }
                hit
            }
        };
        self.star[i] = Some(a);
        self.touch(i);
        a
    }

    fn certifies(&self, answer: bool) -> bool {
        if answer {
            self.revealed.is_some()
        } else {
            !self.marked_consistent()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameOutcome {
    pub strategy: String,
    pub answer: bool,
    /// The strategy's answer holds on every input consistent with the transcript.
    pub certified: bool,
    pub forced_cost: Cost,
    pub transcript: Vec<(OracleKind, usize, bool, Cost)>,
}

impl GameOutcome {
    /// CSV with columns `step,kind,index,answer,cumulative_cost`; the final
    /// row records the halt.
    pub fn transcript_csv(&self) -> String {
        let mut out = String::from("step,kind,index,answer,cumulative_cost\n");
        for (step, (kind, index, answer, cost)) in self.transcript.iter().enumerate() {
            let kind = match kind {
                OracleKind::Star => "star",
                OracleKind::Set => "set",
            };
            out.push_str(&format!("{step},{kind},{index},{},{}\n", u8::from(*answer), format_cost(cost)));
        }
        out.push_str(&format!(
            "{},halt,,{},{}\n",
            self.transcript.len(),
            u8::from(self.answer),
            format_cost(&self.forced_cost)
        ));
        out
    }
}

/// Plays the adversary against a deterministic strategy (randomized ones are
/// fixed by `seed`).
pub fn adversary_game(strategy: &dyn Strategy, instance: &ProblemInstance, seed: u64) -> Result<GameOutcome> {
    let mut adv = Adversary::new(instance.n(), instance.m());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transcript = Vec::new();
    let run = run_with_oracle(strategy, instance, &mut rng, |kind, i, ledger| {
        if i >= instance.n() {
            return Err(crate::error::Error::IndexOutOfRange { index: i, n: instance.n() });
        }
        ledger.charge(kind);
        let a = match kind {
            OracleKind::Set => adv.answer_set(i),
            OracleKind::Star => adv.answer_star(i),
        };
        transcript.push((kind, i, a, ledger.total()));
        Ok(a)
    })?;
    Ok(GameOutcome {
        strategy: strategy.name(),
        answer: run.answer,
        certified: adv.certifies(run.answer),
        forced_cost: run.cost(),
        transcript,
    })
}

/// Largest forced cost over `seeds` for a randomized strategy.
pub fn worst_case_over_seeds(
    strategy: &dyn Strategy,
    instance: &ProblemInstance,
    seeds: impl IntoIterator<Item = u64>,
) -> Result<Option<GameOutcome>> {
    let mut worst: Option<GameOutcome> = None;
    for seed in seeds {
        let g = adversary_game(strategy, instance, seed)?;
        if worst.as_ref().is_none_or(|w| g.forced_cost > w.forced_cost) {
            worst = Some(g);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::strategies::{heuristic_corpus, Alg4, Alg5};
    use crate::classical::{Action, QueryRecord};
    use crate::error::Error;

    fn inst(n: usize, m: usize, c_star: i128, c_s: i128) -> ProblemInstance {
        ProblemInstance::new(n, m, Cost::from_integer(c_star), Cost::from_integer(c_s), 0.0).unwrap()
    }

    #[test]
    fn rcc0_values() {
        assert_eq!(rcc0(&inst(10, 3, 5, 1)), Cost::from_integer(24));
        assert_eq!(rcc0(&inst(10, 3, 2, 2)), Cost::from_integer(20));
        assert_eq!(rcc0(&inst(7, 7, 3, 1)), Cost::from_integer(21));
    }

    #[test]
    fn game_forces_both_branches() {
        for n in 1..=12 {
            for m in 1..=n {
                let i = inst(n, m, 7, 2);
                let g4 = adversary_game(&Alg4, &i, 0).unwrap();
                assert!(g4.certified && g4.answer);
                assert_eq!(g4.forced_cost, Cost::from_integer(7 * n as i128));
                let g5 = adversary_game(&Alg5::default(), &i, 0).unwrap();
                assert!(g5.certified);
                assert_eq!(g5.forced_cost, Cost::from_integer(2 * (n as i128 - 1) + 7 * m as i128), "{n} {m}");
            }
        }
    }

    #[test]
    fn corpus_never_beats_rcc0() {
        for n in 2..=10 {
            for m in 1..=n {
                let i = inst(n, m, 5, 1);
                for s in heuristic_corpus(n) {
                    let g = adversary_game(s.as_ref(), &i, 0).unwrap();
                    assert!(g.certified, "{} {n} {m}", s.name());
                    assert!(g.forced_cost >= rcc0(&i), "{} {n} {m}", s.name());
                }
            }
        }
    }

    struct Guess;
    impl Strategy for Guess {
        fn name(&self) -> String {
            "guess".into()
        }
        fn next(&self, _n: usize, _m: usize, h: &[QueryRecord], _r: &mut ChaCha8Rng) -> Action {
            if h.is_empty() {
                Action::Query(OracleKind::Star, 0)
            } else {
                Action::Halt(false)
            }
        }
    }

    struct Forever;
    impl Strategy for Forever {
        fn name(&self) -> String {
            "forever".into()
        }
        fn next(&self, _n: usize, _m: usize, _h: &[QueryRecord], _r: &mut ChaCha8Rng) -> Action {
            Action::Query(OracleKind::Set, 0)
        }
    }

    #[test]
    fn uncertified_and_runaway_strategies() {
        let i = inst(5, 2, 3, 1);
        let g = adversary_game(&Guess, &i, 0).unwrap();
        assert!(!g.certified);
        assert_eq!(adversary_game(&Forever, &i, 0), Err(Error::StepLimit { limit: 20 }));
    }

    #[test]
    fn transcript_format() {
        let g = adversary_game(&Alg4, &inst(3, 1, 2, 1), 0).unwrap();
        let csv = g.transcript_csv();
        assert_eq!(csv, "step,kind,index,answer,cumulative_cost\n0,star,0,0,2\n1,star,1,0,4\n2,star,2,1,6\n3,halt,,1,6\n");
    }
}
