//! Concrete classical strategies.
//!
//! Every strategy here except [`FlipAnswer`] is deterministic and zero-error:
//! it answers correctly on every input. Each reconstructs its position from
//! the history alone.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Action, QueryRecord, Strategy};
use crate::problem::OracleKind;

fn any_star_hit(history: &[QueryRecord]) -> bool {
    history.iter().any(|r| r.kind == OracleKind::Star && r.answer)
}

/// Queries `f_*` on every item in order; never stops early.
#[derive(Debug, Clone, Copy, Default)]
pub struct Alg4;

impl Strategy for Alg4 {
    fn name(&self) -> String {
        "alg4".into()
    }

    fn next(&self, n: usize, _m: usize, history: &[QueryRecord], _rng: &mut ChaCha8Rng) -> Action {
        if history.len() < n {
            Action::Query(OracleKind::Star, history.len())
        } else {
            Action::Halt(any_star_hit(history))
        }
    }
}

/// `f_*` on every item in the given order, stopping at the first hit.
#[derive(Debug, Clone, Copy)]
pub struct StarScan {
    pub descending: bool,
}

impl Strategy for StarScan {
    fn name(&self) -> String {
        if self.descending { "star_scan_desc" } else { "star_scan_asc" }.into()
    }

    fn next(&self, n: usize, _m: usize, history: &[QueryRecord], _rng: &mut ChaCha8Rng) -> Action {
        if any_star_hit(history) {
            return Action::Halt(true);
        }
        let j = history.len();
        if j == n {
            return Action::Halt(false);
        }
        Action::Query(OracleKind::Star, if self.descending { n - 1 - j } else { j })
    }
}

/// `f_S` on all items but the last, then `f_*` on the members found (plus
/// the last item if only `M - 1` were found). With `stop_early`, the `f_S`
/// scan ends as soon as `M` members are known.
#[derive(Debug, Clone, Copy, Default)]
pub struct Alg5 {
    pub stop_early: bool,
}

impl Strategy for Alg5 {
    fn name(&self) -> String {
        if self.stop_early { "alg5_stop_early" } else { "alg5" }.into()
    }

    fn next(&self, n: usize, m: usize, history: &[QueryRecord], _rng: &mut ChaCha8Rng) -> Action {
        let set_queries: Vec<&QueryRecord> = history.iter().filter(|r| r.kind == OracleKind::Set).collect();
        let found: Vec<usize> = set_queries.iter().filter(|r| r.answer).map(|r| r.index).collect();
        let scan_done = set_queries.len() + 1 >= n || (self.stop_early && found.len() >= m);
        if !scan_done {
            return Action::Query(OracleKind::Set, set_queries.len());
        }
        if any_star_hit(history) {
            return Action::Halt(true);
        }
        let candidates: Vec<usize> = if found.len() == m {
            found
        } else if found.len() + 1 == m && set_queries.len() + 1 == n {
            found.into_iter().chain(std::iter::once(n - 1)).collect()
        } else {
            return Action::Halt(false);
        };
        let star_queries = history.len() - set_queries.len();
        match candidates.get(star_queries) {
            Some(&i) => Action::Query(OracleKind::Star, i),
            None => Action::Halt(false),
        }
    }
}

/// `f_S` on the first `prefix` items, then `f_*` on every item not known to
/// lie outside `S`.
#[derive(Debug, Clone, Copy)]
pub struct PrefixSetThenStar {
    pub prefix: usize,
}

impl Strategy for PrefixSetThenStar {
    fn name(&self) -> String {
        format!("prefix_set_{}_then_star", self.prefix)
    }

    fn next(&self, n: usize, _m: usize, history: &[QueryRecord], _rng: &mut ChaCha8Rng) -> Action {
        let prefix = self.prefix.min(n);
        if history.len() < prefix {
            return Action::Query(OracleKind::Set, history.len());
        }
        if any_star_hit(history) {
            return Action::Halt(true);
        }
        let outside = |i: usize| history[..prefix].iter().any(|r| r.index == i && !r.answer);
        let done = history.len() - prefix;
        match (0..n).filter(|&i| !outside(i)).nth(done) {
            Some(i) => Action::Query(OracleKind::Star, i),
            None => Action::Halt(false),
        }
    }
}

/// For each item in turn: `f_S`, and `f_*` if it is a member.
#[derive(Debug, Clone, Copy, Default)]
pub struct Interleaved;

impl Strategy for Interleaved {
    fn name(&self) -> String {
        "interleaved".into()
    }

    fn next(&self, n: usize, _m: usize, history: &[QueryRecord], _rng: &mut ChaCha8Rng) -> Action {
        if any_star_hit(history) {
            return Action::Halt(true);
        }
        match history.last() {
            Some(r) if r.kind == OracleKind::Set && r.answer => Action::Query(OracleKind::Star, r.index),
            Some(r) if r.index + 1 == n => Action::Halt(false),
            Some(r) => Action::Query(OracleKind::Set, r.index + 1),
            None if n == 0 => Action::Halt(false),
            None => Action::Query(OracleKind::Set, 0),
        }
    }
}

/// Runs `base` and flips its answer with probability `flip`.
pub struct FlipAnswer<S> {
    pub base: S,
    pub flip: f64,
}

impl<S: Strategy> Strategy for FlipAnswer<S> {
    fn name(&self) -> String {
        format!("{}_flip_{}", self.base.name(), self.flip)
    }

    fn next(&self, n: usize, m: usize, history: &[QueryRecord], rng: &mut ChaCha8Rng) -> Action {
        match self.base.next(n, m, history, rng) {
            Action::Halt(a) => Action::Halt(if rng.random_bool(self.flip) { !a } else { a }),
            q => q,
        }
    }
}

/// Deterministic zero-error strategies used to probe the adversary game.
pub fn heuristic_corpus(n: usize) -> Vec<Box<dyn Strategy>> {
    vec![
        Box::new(Alg4),
        Box::new(StarScan { descending: false }),
        Box::new(StarScan { descending: true }),
        Box::new(Alg5 { stop_early: false }),
        Box::new(Alg5 { stop_early: true }),
        Box::new(PrefixSetThenStar { prefix: n / 2 }),
        Box::new(PrefixSetThenStar { prefix: n }),
        Box::new(Interleaved),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::run_strategy;
    use crate::cost::Cost;
    use crate::problem::{marked_family, unmarked_family, ProblemInstance};
    use rand::SeedableRng;

    #[test]
    fn corpus_is_zero_error_on_small_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for n in 1..=7 {
            for m in 1..=n {
                let inst = ProblemInstance::new(n, m, Cost::from_integer(3), Cost::from_integer(1), 0.0).unwrap();
                let mut inputs = marked_family(n, m);
                for size in 0..=n {
                    inputs.extend(unmarked_family(n, size));
                }
                for s in heuristic_corpus(n) {
                    for a in &inputs {
                        let run = run_strategy(s.as_ref(), &inst, a, &mut rng).unwrap();
                        assert_eq!(run.answer, a.sto_value(), "{} on {a:?}", s.name());
                    }
                }
            }
        }
    }

    #[test]
    fn alg4_always_pays_n_star_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = ProblemInstance::new(6, 2, Cost::from_integer(5), Cost::from_integer(1), 0.0).unwrap();
        for a in marked_family(6, 2) {
            let run = run_strategy(&Alg4, &inst, &a, &mut rng).unwrap();
            assert_eq!((run.ledger.q_star, run.ledger.q_s), (6, 0));
        }
    }

    #[test]
    fn alg5_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = ProblemInstance::new(6, 3, Cost::from_integer(5), Cost::from_integer(1), 0.0).unwrap();
        // Marked item is the one index the f_S scan never touches.
        let a = crate::problem::OracleAssignment::new(6, [0, 2, 5], Some(5)).unwrap();
        let run = run_strategy(&Alg5::default(), &inst, &a, &mut rng).unwrap();
        assert!(run.answer);
        assert_eq!(run.ledger.q_s, 5);
        // Wrong set size among the scanned items.
        let b = crate::problem::OracleAssignment::new(6, [0], None).unwrap();
        let run = run_strategy(&Alg5::default(), &inst, &b, &mut rng).unwrap();
        assert!(!run.answer);
        assert_eq!(run.ledger.q_star, 0);
    }
}
