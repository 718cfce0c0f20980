//! Simulation and verification laboratory for search with two
//! differently-priced oracles.
//!
//! A problem instance hides a marked item `i*` inside a set `S` of known
//! size `M` out of `N` items. The set oracle `f_S` is cheap, the item oracle
//! `f_*` is expensive, and an algorithm pays `q_* c_* + q_S c_S`. This crate
//! builds the amplitude-amplification schedules for that problem, simulates
//! them exactly, optimizes the hybrid schedule, and evaluates the quantum
//! and classical cost bounds so they can be checked against each other.
//!
//! Module map:
//!
//! - [`problem`]: instances, hidden inputs, oracle evaluation, cost ledgers
//! - [`statevec`]: exact `N`-dimensional statevector simulation
//! - [`schedules`]: iteration counts, schedule compilers, hybrid optimizer
//! - [`subspace`]: three-dimensional polar dynamics and the progress auditor
//! - [`bounds`]: adversary matrices and every quantum lower bound
//! - [`classical`]: zero-error games, classical strategies, Monte Carlo
//! - [`exec`]: data-parallel batch evaluation with a sequential fallback

pub mod bounds;
pub mod classical;
pub mod cost;
pub mod error;
pub mod exec;
pub mod plan_format;
pub mod problem;
#[cfg(test)]
mod proptests;
pub mod rootfind;
pub mod schedules;
pub mod statevec;
pub mod subspace;

pub use cost::{format_cost, parse_cost, Cost};
pub use error::{Error, Result};
pub use exec::Exec;
pub use problem::{CostLedger, OracleAssignment, OracleKind, ProblemInstance};
pub use statevec::{Primitive, Schedule, StateVector};
