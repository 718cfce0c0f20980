//! Problem instances, hidden inputs, and cost accounting.
//!
//! Items are indexed `0..N`. An [`OracleAssignment`] fixes the hidden pair
//! `(f_*, f_S)`: an optional marked item and the set `S`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{cost_to_f64, is_positive, Cost};
use crate::error::{Error, Result};

/// The parameters `(N, M, c_*, c_S, epsilon)` of one search problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    n: usize,
    m: usize,
    c_star: Cost,
    c_s: Cost,
    epsilon: f64,
}

impl ProblemInstance {
    pub fn new(n: usize, m: usize, c_star: Cost, c_s: Cost, epsilon: f64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidInstance(format!("need 1 <= M <= N, got N = {n}, M = {m}")));
        }
        if !is_positive(&c_s) {
            return Err(Error::InvalidInstance("c_S must be positive".into()));
        }
        if c_star < c_s {
            return Err(Error::InvalidInstance("need c_* >= c_S".into()));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidInstance(format!("epsilon must lie in [0, 1), got {epsilon}")));
        }
        Ok(Self { n, m, c_star, c_s, epsilon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn c_star(&self) -> Cost {
        self.c_star
    }

    pub fn c_s(&self) -> Cost {
        self.c_s
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn cost_of(&self, kind: OracleKind) -> Cost {
        match kind {
            OracleKind::Star => self.c_star,
            OracleKind::Set => self.c_s,
        }
    }

    /// `c_* / c_S` as a float.
    pub fn cost_ratio(&self) -> f64 {
        cost_to_f64(&(self.c_star / self.c_s))
    }

    /// `sqrt(M / N)`, the overlap of the uniform state with `|S>`.
    pub fn sqrt_density(&self) -> f64 {
        (self.m as f64 / self.n as f64).sqrt()
    }

    /// Same instance with both costs multiplied by `k`.
    pub fn scaled(&self, k: Cost) -> Result<Self> {
        Self::new(self.n, self.m, self.c_star * k, self.c_s * k, self.epsilon)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.n, self.m, self.c_star, self.c_s, epsilon)
    }

    /// Checks that `a` is a legal input for this instance.
    pub fn admits(&self, a: &OracleAssignment) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.n() });
        }
        if a.is_marked() && a.set_size() != self.m {
            return Err(Error::InvalidInstance(format!(
                "marked assignment needs |S| = {}, got {}",
                self.m,
                a.set_size()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleKind {
    /// `f_*`, which recognizes the marked item.
    Star,
    /// `f_S`, set membership.
    Set,
}

/// A concrete hidden input: optional marked item `i*` and the set `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAssignment {
    n: usize,
    i_star: Option<usize>,
    members: Vec<usize>,
    in_set: Vec<bool>,
}

impl OracleAssignment {
    /// Builds an assignment over `0..n`. Duplicate set members are merged.
    pub fn new(n: usize, set: impl IntoIterator<Item = usize>, i_star: Option<usize>) -> Result<Self> {
        let mut in_set = vec![false; n];
        for i in set {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            in_set[i] = true;
        }
        if let Some(i) = i_star {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if !in_set[i] {
                return Err(Error::InvalidInstance(format!("marked item {i} is not in S")));
            }
        }
        let members = (0..n).filter(|&i| in_set[i]).collect();
        Ok(Self { n, i_star, members, in_set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i_star(&self) -> Option<usize> {
        self.i_star
    }

    pub fn is_marked(&self) -> bool {
        self.i_star.is_some()
    }

    /// Sorted members of `S`.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn set_size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.in_set.get(i).copied().unwrap_or(false)
    }

    /// Evaluates `f_*(i)` or `f_S(i)`.
    pub fn query(&self, kind: OracleKind, i: usize) -> Result<bool> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(match kind {
            OracleKind::Star => self.i_star == Some(i),
            OracleKind::Set => self.in_set[i],
        })
    }

    /// The value of the search problem: whether a marked item exists.
    pub fn sto_value(&self) -> bool {
        self.i_star.is_some()
    }
}

/// Which size the set takes when no item is marked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnmarkedSize {
    /// `|S| = M`, indistinguishable from a marked input by `f_S` alone.
    M,
    /// `|S| = M - 1`, the input left after removing `i*` from a marked one.
    MMinusOne,
}

fn check_sizes(n: usize, m: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidInstance(format!("need 1 <= M <= N, got N = {n}, M = {m}")));
    }
    Ok(())
}

/// Uniformly random assignment: `|S| = M`, and if `marked`, a uniformly
/// random `i*` in `S`. Deterministic in `seed`.
pub fn random_instance(n: usize, m: usize, marked: bool, seed: u64) -> Result<OracleAssignment> {
    check_sizes(n, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = sample(&mut rng, n, m).into_vec();
    let i_star = marked.then(|| set[rng.random_range(0..m)]);
    OracleAssignment::new(n, set, i_star)
}

/// Uniformly random unmarked assignment with the requested set size.
pub fn random_unmarked(n: usize, m: usize, size: UnmarkedSize, seed: u64) -> Result<OracleAssignment> {
    check_sizes(n, m)?;
    let k = match size {
        UnmarkedSize::M => m,
        UnmarkedSize::MMinusOne => m - 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = sample(&mut rng, n, k).into_vec();
    OracleAssignment::new(n, set, None)
}

/// All `k`-subsets of `0..n` as sorted index lists, in increasing bitmask order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(n < 32, "subset enumeration is for small N");
    (0u32..(1u32 << n))
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Every marked assignment with `|S| = m`, ordered by set then by `i*`.
pub fn marked_family(n: usize, m: usize) -> Vec<OracleAssignment> {
    subsets_of_size(n, m)
        .into_iter()
        .flat_map(|set| {
            set.clone()
                .into_iter()
                .map(move |i| OracleAssignment::new(n, set.clone(), Some(i)).expect("valid by construction"))
        })
        .collect()
}

/// Every unmarked assignment with `|S| = size`.
pub fn unmarked_family(n: usize, size: usize) -> Vec<OracleAssignment> {
    subsets_of_size(n, size)
        .into_iter()
        .map(|set| OracleAssignment::new(n, set, None).expect("valid by construction"))
        .collect()
}

/// Query counts with the instance costs needed to price them exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostLedger {
    pub q_star: u64,
    pub q_s: u64,
    c_star: Cost,
    c_s: Cost,
}

impl CostLedger {
    pub fn new(instance: &ProblemInstance) -> Self {
        Self::with_costs(instance.c_star(), instance.c_s())
    }

    pub fn with_costs(c_star: Cost, c_s: Cost) -> Self {
        Self { q_star: 0, q_s: 0, c_star, c_s }
    }

    pub fn charge(&mut self, kind: OracleKind) {
        match kind {
            OracleKind::Star => self.q_star += 1,
            OracleKind::Set => self.q_s += 1,
        }
    }

    pub fn total(&self) -> Cost {
        self.c_star * Cost::from_integer(self.q_star as i128) + self.c_s * Cost::from_integer(self.q_s as i128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_of_four(i_star: Option<usize>) -> OracleAssignment {
        // S = {1, 2} in one-based terms.
        OracleAssignment::new(4, [0, 1], i_star).unwrap()
    }

    #[test]
    fn star_query_hits_only_the_marked_item() {
        let a = two_of_four(Some(0));
        assert!(a.query(OracleKind::Star, 0).unwrap());
        assert!(!a.query(OracleKind::Star, 1).unwrap());
        let b = two_of_four(None);
        assert!(!b.query(OracleKind::Star, 0).unwrap());
    }

    #[test]
    fn set_query_is_membership() {
        let a = two_of_four(Some(0));
        assert!(!a.query(OracleKind::Set, 2).unwrap());
        assert!(a.query(OracleKind::Set, 1).unwrap());
    }

    #[test]
    fn query_out_of_range_is_rejected() {
        let a = two_of_four(None);
        assert_eq!(a.query(OracleKind::Set, 4), Err(Error::IndexOutOfRange { index: 4, n: 4 }));
    }

    #[test]
    fn sto_value_follows_the_marked_item() {
        let inst = ProblemInstance::new(10, 3, Cost::from_integer(2), Cost::from_integer(1), 0.0).unwrap();
        let marked = OracleAssignment::new(10, [2, 5, 7], Some(5)).unwrap();
        assert!(marked.sto_value());
        inst.admits(&marked).unwrap();
        assert!(!OracleAssignment::new(10, [], None).unwrap().sto_value());
        let full_unmarked = OracleAssignment::new(10, [1, 2, 3], None).unwrap();
        assert!(!full_unmarked.sto_value());
        inst.admits(&full_unmarked).unwrap();
    }

    #[test]
    fn marked_item_must_be_in_set() {
        assert!(OracleAssignment::new(4, [0, 1], Some(3)).is_err());
        let inst = ProblemInstance::new(4, 3, Cost::from_integer(1), Cost::from_integer(1), 0.0).unwrap();
        assert!(inst.admits(&two_of_four(Some(0))).is_err());
    }

    #[test]
    fn instance_invariants() {
        let one = Cost::from_integer(1);
        assert!(ProblemInstance::new(4, 5, one, one, 0.0).is_err());
        assert!(ProblemInstance::new(4, 0, one, one, 0.0).is_err());
        assert!(ProblemInstance::new(4, 2, one, Cost::from_integer(2), 0.0).is_err());
        assert!(ProblemInstance::new(4, 2, one, Cost::from_integer(0), 0.0).is_err());
        assert!(ProblemInstance::new(4, 2, one, one, 1.0).is_err());
    }

    #[test]
    fn random_instance_shape() {
        let a = random_instance(4, 2, true, 7).unwrap();
        assert_eq!(a.set_size(), 2);
        assert!(a.contains(a.i_star().unwrap()));
        let full = random_instance(4, 4, true, 123).unwrap();
        assert_eq!(full.members(), &[0, 1, 2, 3]);
        assert_eq!(random_instance(50, 7, true, 99).unwrap(), random_instance(50, 7, true, 99).unwrap());
        assert!(random_instance(3, 4, true, 0).is_err());
    }

    #[test]
    fn unmarked_families_sizes() {
        let a = random_unmarked(20, 5, UnmarkedSize::MMinusOne, 1).unwrap();
        assert_eq!(a.set_size(), 4);
        assert!(!a.is_marked());
        assert_eq!(marked_family(4, 2).len(), 12);
        assert_eq!(unmarked_family(4, 1).len(), 4);
        assert_eq!(subsets_of_size(5, 2).len(), 10);
    }

    #[test]
    fn ledger_total_is_exact() {
        let inst = ProblemInstance::new(8, 2, Cost::new(1, 3), Cost::new(1, 7), 0.1).unwrap();
        let mut ledger = CostLedger::new(&inst);
        for _ in 0..3 {
            ledger.charge(OracleKind::Star);
        }
        for _ in 0..7 {
            ledger.charge(OracleKind::Set);
        }
        assert_eq!(ledger.total(), Cost::from_integer(2));
    }
}
