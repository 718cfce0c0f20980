//! Exact statevector simulation of Grover-like schedules.
//!
//! Only three primitives exist: the diffusion `G = I - 2|N><N|`, the set
//! oracle `O_S` and the item oracle `O_*`. All three are real, so amplitudes
//! are stored as `f64`. Diffusion runs in `O(N)` by mean subtraction and no
//! renormalization is ever applied.

use std::fmt;

use crate::error::{Error, Result};
use crate::problem::{CostLedger, OracleAssignment, OracleKind, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Diffusion,
    OracleS,
    OracleStar,
}

impl Primitive {
    pub fn mnemonic(self) -> &'static str {
        match self {
            Primitive::Diffusion => "G",
            Primitive::OracleS => "OS",
            Primitive::OracleStar => "O*",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Self> {
        match s {
            "G" => Some(Primitive::Diffusion),
            "OS" => Some(Primitive::OracleS),
            "O*" => Some(Primitive::OracleStar),
            _ => None,
        }
    }

    /// The oracle this primitive queries; diffusion is free.
    pub fn oracle(self) -> Option<OracleKind> {
        match self {
            Primitive::Diffusion => None,
            Primitive::OracleS => Some(OracleKind::Set),
            Primitive::OracleStar => Some(OracleKind::Star),
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// A flat sequence of primitives, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    steps: Vec<Primitive>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<Primitive>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Primitive] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, p: Primitive) {
        self.steps.push(p);
    }

    pub fn append(&mut self, other: &Schedule) {
        self.steps.extend_from_slice(&other.steps);
    }

    pub fn repeated(&self, times: u64) -> Schedule {
        let mut steps = Vec::with_capacity(self.steps.len() * times as usize);
        for _ in 0..times {
            steps.extend_from_slice(&self.steps);
        }
        Schedule { steps }
    }

    /// The inverse schedule. Every primitive is an involution, so reversing
    /// the order is enough.
    pub fn reversed(&self) -> Schedule {
        Schedule { steps: self.steps.iter().rev().copied().collect() }
    }

    /// `(q_star, q_s)` query counts.
    pub fn query_counts(&self) -> (u64, u64) {
        self.steps.iter().fold((0, 0), |(qs, qset), p| match p.oracle() {
            Some(OracleKind::Star) => (qs + 1, qset),
            Some(OracleKind::Set) => (qs, qset + 1),
            None => (qs, qset),
        })
    }

    pub fn ledger(&self, instance: &ProblemInstance) -> CostLedger {
        let mut ledger = CostLedger::new(instance);
        for kind in self.steps.iter().filter_map(|p| p.oracle()) {
            ledger.charge(kind);
        }
        ledger
    }
}

impl FromIterator<Primitive> for Schedule {
    fn from_iter<I: IntoIterator<Item = Primitive>>(iter: I) -> Self {
        Schedule { steps: iter.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<f64>,
}

impl StateVector {
    /// The uniform superposition `|N>`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        Ok(Self { amps: vec![1.0 / (n as f64).sqrt(); n] })
    }

    pub fn basis(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let mut amps = vec![0.0; n];
        amps[i] = 1.0;
        Ok(Self { amps })
    }

    pub fn from_amplitudes(amps: Vec<f64>) -> Self {
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    pub fn inner(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Applies one primitive in place.
    pub fn apply(&mut self, op: Primitive, assignment: &OracleAssignment) -> Result<()> {
        if assignment.n() != self.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), found: assignment.n() });
        }
        match op {
            Primitive::Diffusion => {
                let shift = 2.0 * self.amps.iter().sum::<f64>() / self.amps.len() as f64;
                self.amps.iter_mut().for_each(|a| *a -= shift);
            }
            Primitive::OracleS => {
                for &i in assignment.members() {
                    self.amps[i] = -self.amps[i];
                }
            }
            Primitive::OracleStar => {
                if let Some(i) = assignment.i_star() {
                    self.amps[i] = -self.amps[i];
                }
            }
        }
        Ok(())
    }
}

pub fn uniform_state(n: usize) -> Result<StateVector> {
    StateVector::uniform(n)
}

pub fn apply_primitive(state: &StateVector, op: Primitive, assignment: &OracleAssignment) -> Result<StateVector> {
    let mut next = state.clone();
    next.apply(op, assignment)?;
    Ok(next)
}

/// Runs `schedule` from the uniform state and returns the final state with
/// the ledger of oracle uses.
pub fn run_schedule(
    instance: &ProblemInstance,
    assignment: &OracleAssignment,
    schedule: &Schedule,
) -> Result<(StateVector, CostLedger)> {
    instance.admits(assignment)?;
    let mut state = StateVector::uniform(instance.n())?;
    let mut ledger = CostLedger::new(instance);
    for &op in schedule.steps() {
        state.apply(op, assignment)?;
        if let Some(kind) = op.oracle() {
            ledger.charge(kind);
        }
    }
    Ok((state, ledger))
}

/// `|<i*|state>|^2`.
pub fn success_probability(state: &StateVector, assignment: &OracleAssignment) -> Result<f64> {
    let i = assignment.i_star().ok_or(Error::NoMarkedItem)?;
    if assignment.n() != state.len() {
        return Err(Error::DimensionMismatch { expected: state.len(), found: assignment.n() });
    }
    Ok(state.amps[i] * state.amps[i])
}
