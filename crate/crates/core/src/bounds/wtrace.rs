//! The adversary progress functional along a concrete schedule.
//!
//! `W^t = sum_{r,c} B_rc u_r w_c <psi_r^t | psi_c^t>`, where `(u; w)/sqrt 2`
//! is the principal eigenvector of the symmetric adversary matrix and
//! `psi_x^t` is the state after `t` steps on input `x`. `W^0 = ||Gamma||`.
//!
//! A Grover-like algorithm outputs an index, not a bit, so its final states
//! on marked and unmarked inputs need not be far apart. With
//! `final_check` the trace appends one coherent `f_*` query on the output
//! register, after which overlaps only count indices where the two inputs
//! agree on `f_*`. That extra step is an ordinary `f_*` query and obeys the
//! same per-step bound.

use nalgebra::DMatrix;

use crate::bounds::adversary::{build_adversary, check_regime, Construction};
use crate::error::Result;
use crate::problem::{OracleAssignment, OracleKind};
use crate::statevec::{Primitive, Schedule, StateVector};

/// Largest `N` for which the trace is computed.
pub const TRACE_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStep {
    Primitive(Primitive),
    /// The appended `f_*` check of the output index.
    FinalCheck,
}

impl TraceStep {
    pub fn oracle(self) -> Option<OracleKind> {
        match self {
            TraceStep::Primitive(p) => p.oracle(),
            TraceStep::FinalCheck => Some(OracleKind::Star),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WTrace {
    pub construction: Construction,
    /// `values[0]` is `W^0`; `values[t]` follows `steps[t - 1]`.
    pub values: Vec<f64>,
    pub steps: Vec<TraceStep>,
    pub gamma_norm: f64,
    pub max_d_star_norm: f64,
    pub max_d_s_norm: f64,
    /// Smallest success probability over the marked inputs, before the check.
    pub min_success: f64,
}

impl WTrace {
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("trace holds W^0")
    }

    /// Largest `|W^{t-1} - W^t| - 2 max_i ||Gamma o D_i||` over oracle steps,
    /// and largest `|dW|` over diffusion steps.
    pub fn step_excess(&self) -> (f64, f64) {
        let mut oracle_excess = f64::NEG_INFINITY;
        let mut diffusion_change: f64 = 0.0;
        for (t, step) in self.steps.iter().enumerate() {
            let dw = (self.values[t + 1] - self.values[t]).abs();
            match step.oracle() {
                Some(OracleKind::Star) => oracle_excess = oracle_excess.max(dw - 2.0 * self.max_d_star_norm),
                Some(OracleKind::Set) => oracle_excess = oracle_excess.max(dw - 2.0 * self.max_d_s_norm),
                None => diffusion_change = diffusion_change.max(dw),
            }
        }
        (oracle_excess, diffusion_change)
    }

    /// `(2 sqrt(eps (1 - eps)) + 2 eps) ||Gamma||`.
    pub fn final_target(&self, epsilon: f64) -> f64 {
        (2.0 * (epsilon * (1.0 - epsilon)).sqrt() + 2.0 * epsilon) * self.gamma_norm
    }
}

fn weighted_overlap(block: &DMatrix<f64>, weights: &DMatrix<f64>, overlaps: &DMatrix<f64>) -> f64 {
    block.component_mul(weights).component_mul(overlaps).sum()
}

fn overlaps(
    rows: &[StateVector],
    cols: &[StateVector],
    row_inputs: &[OracleAssignment],
    col_inputs: &[OracleAssignment],
    checked: bool,
) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        if !checked {
            return rows[r].inner(&cols[c]);
        }
        let (x, y) = (row_inputs[r].i_star(), col_inputs[c].i_star());
        let (a, b) = (rows[r].amplitudes(), cols[c].amplitudes());
        let mut v = rows[r].inner(&cols[c]);
        if x != y {
            for i in [x, y].into_iter().flatten() {
                v -= a[i] * b[i];
            }
        }
        v
    })
}

pub fn w_progress_trace(
    schedule: &Schedule,
    n: usize,
    m: usize,
    construction: Construction,
    final_check: bool,
) -> Result<WTrace> {
    check_regime(n, m, TRACE_LIMIT)?;
    let adv = build_adversary(n, m, construction)?;
    let (u, w, sigma) = adv.principal_vectors();
    let weights = &u * w.transpose();
    let mut rows: Vec<StateVector> = vec![StateVector::uniform(n)?; adv.rows.len()];
    let mut cols: Vec<StateVector> = vec![StateVector::uniform(n)?; adv.cols.len()];

    let mut values = vec![weighted_overlap(&adv.block, &weights, &overlaps(&rows, &cols, &adv.rows, &adv.cols, false))];
    let mut steps = Vec::with_capacity(schedule.len() + 1);
    for &op in schedule.steps() {
        for (s, x) in rows.iter_mut().zip(&adv.rows) {
            s.apply(op, x)?;
        }
        for (s, y) in cols.iter_mut().zip(&adv.cols) {
            s.apply(op, y)?;
        }
        values.push(weighted_overlap(&adv.block, &weights, &overlaps(&rows, &cols, &adv.rows, &adv.cols, false)));
        steps.push(TraceStep::Primitive(op));
    }
    if final_check {
        values.push(weighted_overlap(&adv.block, &weights, &overlaps(&rows, &cols, &adv.rows, &adv.cols, true)));
        steps.push(TraceStep::FinalCheck);
    }
    let min_success = rows
        .iter()
        .zip(&adv.rows)
        .map(|(s, x)| {
            let a = s.amplitudes()[x.i_star().expect("rows are marked")];
            a * a
        })
        .fold(1.0, f64::min);
    Ok(WTrace {
        construction,
        values,
        steps,
        gamma_norm: sigma,
        max_d_star_norm: adv.max_filtered_norm(OracleKind::Star),
        max_d_s_norm: adv.max_filtered_norm(OracleKind::Set),
        min_success,
    })
}
