//! Quantum lower bounds: brute-force adversary matrices, the closed-form
//! bounds built on them, and the adversary progress functional.

pub mod adversary;
pub mod formulas;
pub mod wtrace;

pub use adversary::{adversary_matrices, build_adversary, spectral_norm, AdversaryMatrix, AdversaryReport, Construction};
pub use formulas::{
    adversary_prefactor, all_bounds, basic_adversary_bound, block_size, bounds_to_csv, conqcc_lower_bound, esto_params,
    exact_lower_bound, qcc_lower_bound, BoundMode, BoundReport, ConqccMode, EstoParams, ExactBound, REGIME_THRESHOLD,
};
pub use wtrace::{w_progress_trace, TraceStep, WTrace};
