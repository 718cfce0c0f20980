//! Randomized invariants across modules.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{conqcc_lower_bound, exact_lower_bound, qcc_lower_bound, ConqccMode};
use crate::classical::{simulate_with_fake_fs, Alg4, Alg5};
use crate::cost::Cost;
use crate::problem::{marked_family, random_instance, subsets_of_size, unmarked_family, OracleAssignment, ProblemInstance};
use crate::schedules::{
    build_alg1, build_alg2, build_hybrid, hybrid_cost_asymptotic, max_inner_iterations, optimize_hybrid,
    outer_step_fits_window, phi_opt,
};
use crate::statevec::{run_schedule, success_probability, Primitive, Schedule, StateVector};
use crate::subspace::{apply_polar, embed, frame, progress, run_exact, success_from_polar, PolarPoint};

fn instance(n: usize, m: usize, c_star: Cost, c_s: Cost, eps: f64) -> ProblemInstance {
    ProblemInstance::new(n, m, c_star, c_s, eps).unwrap()
}

fn primitive() -> impl Strategy<Value = Primitive> {
    prop_oneof![Just(Primitive::Diffusion), Just(Primitive::OracleS), Just(Primitive::OracleStar)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compiled_hybrids_hit_their_predicted_success(
        log_n in 8u32..=12, log_m in 2u32..=6, ratio in 1i128..200, eps_idx in 0usize..2, frac in 0.0f64..=1.0, seed in 0u64..1000,
    ) {
        let (n, m) = (1usize << log_n, 1usize << log_m);
        let eps = [0.1, 0.2][eps_idx];
        let inst = instance(n, m, Cost::from_integer(ratio), Cost::from_integer(1), eps);
        let t = (frac * max_inner_iterations(&inst) as f64).round() as u64;
        let plan = build_hybrid(&inst, t).unwrap();
        let a = random_instance(n, m, true, seed).unwrap();
        let (state, ledger) = run_schedule(&inst, &a, &plan.plan.schedule).unwrap();
        let p = success_probability(&state, &a).unwrap();
        prop_assert!((p - plan.plan.predicted_success).abs() < 1e-9);
        prop_assert_eq!(ledger.total(), plan.plan.predicted_cost);
        prop_assert_eq!((ledger.q_star, ledger.q_s), (plan.plan.predicted_q_star, plan.plan.predicted_q_s));
        if outer_step_fits_window(&inst, t) {
            prop_assert!(p >= 1.0 - eps - 1e-9);
        }
    }

    #[test]
    fn polar_and_statevector_agree(
        n in 3usize..=512, m_frac in 0.0f64..1.0, steps in prop::collection::vec(primitive(), 0..=200), seed in 0u64..1000,
    ) {
        let m = 2 + ((n - 3) as f64 * m_frac) as usize;
        let inst = instance(n, m, Cost::from_integer(3), Cost::from_integer(1), 0.1);
        let f = frame(&inst).unwrap();
        let a = random_instance(n, m, true, seed).unwrap();
        let schedule = Schedule::from_steps(steps);
        let (state, _) = run_schedule(&inst, &a, &schedule).unwrap();
        let polar = *run_exact(&f, &schedule).last().unwrap();
        let sv = success_probability(&state, &a).unwrap();
        prop_assert!((sv - success_from_polar(polar, &f)).abs() < 1e-8);
        let embedded = embed(&state, &a, &f).unwrap();
        prop_assert!((success_from_polar(embedded, &f) - sv).abs() < 1e-8);
    }

    #[test]
    fn progress_steps_obey_their_bounds(theta in 1e-3f64..1.5, phi in -3.1f64..3.1, log_n in 6u32..20, m in 2usize..50) {
        let n = (1usize << log_n).max(m + 1);
        let inst = instance(n, m, Cost::from_integer(20), Cost::from_integer(1), 0.1);
        let f = frame(&inst).unwrap();
        let p = PolarPoint::gauged(theta, phi);
        let h = progress(p, &f).unwrap();
        let g = apply_polar(p, Primitive::Diffusion, &f);
        prop_assert!((progress(g, &f).unwrap() - h).abs() < 1e-12);
        let s = apply_polar(p, Primitive::OracleS, &f);
        prop_assert!((progress(s, &f).unwrap() - h).abs() <= 2.0 * f.phi0 * f.k + 1e-12);
    }

    #[test]
    fn scaling_costs_scales_bounds(num in 1i128..50, den in 1i128..50, ratio in 1i128..100, log_n in 8u32..20) {
        let n = 1usize << log_n;
        let m = (n / 64).max(2);
        let k = Cost::new(num, den);
        let base = instance(n, m, Cost::from_integer(ratio), Cost::from_integer(1), 0.1);
        let scaled = base.scaled(k).unwrap();
        let (f0, f1) = (frame(&base).unwrap(), frame(&scaled).unwrap());
        prop_assert_eq!(f0.phi_opt, f1.phi_opt);
        prop_assert_eq!(f0.k, f1.k);
        let kf = num as f64 / den as f64;
        let b0 = exact_lower_bound(&base).unwrap().report.value;
        let b1 = exact_lower_bound(&scaled).unwrap().report.value;
        prop_assert!((b1 - kf * b0).abs() <= 1e-12 * b1);
        prop_assert!((qcc_lower_bound(&scaled).value - kf * qcc_lower_bound(&base).value).abs() <= 1e-12 * b1);
    }

    #[test]
    fn phi_opt_solves_its_equation(log_n in 6u32..30, m_frac in 0.0f64..0.5, ratio in 1.0f64..1e4) {
        let n = 1usize << log_n;
        let m = ((n as f64 * m_frac) as usize).max(2);
        let inst = instance(n, m, Cost::new((ratio * 1000.0) as i128, 1000), Cost::from_integer(1), 0.1);
        let s = inst.sqrt_density();
        let phi = phi_opt(&inst);
        if phi > 0.0 {
            let r = inst.cost_ratio();
            let slope = (phi + s).tan().powi(2);
            prop_assert!(((phi + s).tan() - phi - r * s).abs() <= 1e-10 * (1.0 + slope));
        }
    }

    #[test]
    fn optimizer_dominates_and_bounds_stay_below(log_n in 8u32..16, m_frac in 0.0f64..0.25, ratio in 1i128..500, eps_idx in 0usize..3) {
        let n = 1usize << log_n;
        let m = ((n as f64 * m_frac) as usize).max(2);
        let eps = [0.0, 0.1, 0.3][eps_idx];
        let inst = instance(n, m, Cost::from_integer(ratio), Cost::from_integer(1), eps);
        let best = optimize_hybrid(&inst).unwrap();
        prop_assert!(best.plan.formula_cost <= build_alg1(&inst).unwrap().formula_cost);
        prop_assert!(best.plan.formula_cost <= build_alg2(&inst).unwrap().plan.formula_cost);
        let hybrid = crate::cost::cost_to_f64(&best.plan.predicted_cost);
        prop_assert!(qcc_lower_bound(&inst).value <= hybrid);
        prop_assert!(conqcc_lower_bound(&inst, ConqccMode::Asymptotic).unwrap().value <= hybrid);
        let exact = exact_lower_bound(&inst).unwrap();
        prop_assert!((exact.report.value - hybrid_cost_asymptotic(&inst)).abs() <= 1e-12 * exact.report.value);
        // The bound is zeroth order: it holds up to a factor
        // 1 - O(C) - O(M^{-1/2}) - O(sqrt(M/N)), taken here with unit constants.
        if let (Some(true), Some(c)) = (exact.in_regime(), exact.diagnostic) {
            let slack = 1.0 - c - 1.0 / (m as f64).sqrt() - inst.sqrt_density();
            prop_assert!(exact.report.value * slack <= hybrid);
        }
    }
}

#[test]
fn phi_opt_is_monotone_in_cost_ratio() {
    for (n, m) in [(10_000usize, 1usize), (1_000_000, 1000), (4096, 64)] {
        let mut last = 0.0;
        for j in 0..60 {
            let ratio = 10f64.powf(j as f64 / 10.0);
            let inst = instance(n, m.max(1), Cost::new((ratio * 1e6) as i128, 1_000_000), Cost::from_integer(1), 0.1);
            let phi = phi_opt(&inst);
            assert!(phi >= last, "{n} {m} {ratio}");
            last = phi;
        }
    }
}

#[test]
fn classical_algorithms_are_exact_on_every_small_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=8 {
        for m in 1..=n {
            let inst = instance(n, m, Cost::from_integer(4), Cost::from_integer(1), 0.0);
            let mut inputs = marked_family(n, m);
            inputs.extend(unmarked_family(n, m));
            if m > 1 {
                inputs.extend(unmarked_family(n, m - 1));
            }
            for a in &inputs {
                for s in [&Alg4 as &dyn crate::classical::Strategy, &Alg5::default()] {
                    let run = crate::classical::run_strategy(s, &inst, a, &mut rng).unwrap();
                    assert_eq!(run.answer, a.sto_value());
                }
            }
        }
    }
}

/// With every possible `T`, a valid fake set oracle leaves Alg5's answer intact.
#[test]
fn fake_set_oracle_preserves_answers_when_valid() {
    for n in 2..=8 {
        for m in 1..=n {
            let inst = instance(n, m, Cost::from_integer(4), Cost::from_integer(1), 0.0);
            let mut inputs = marked_family(n, m);
            inputs.extend(unmarked_family(n, m));
            let ts = subsets_of_size(n, m - 1);
            for a in &inputs {
                // Drive the reduction with a seed that reproduces each T in turn.
                for t in &ts {
                    let fake_s: Vec<usize> = t.iter().copied().chain(a.i_star()).collect();
                    let valid = a.i_star().is_none_or(|i| !t.contains(&i));
                    let simulated = OracleAssignment::new(n, fake_s, a.i_star()).unwrap();
                    let mut rng = ChaCha8Rng::seed_from_u64(0);
                    let run = crate::classical::run_strategy(&Alg5::default(), &inst, &simulated, &mut rng).unwrap();
                    if valid {
                        assert_eq!(run.answer, a.sto_value());
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 31 + m as u64);
                let run = simulate_with_fake_fs(&Alg5::default(), &inst, a, &mut rng).unwrap();
                if run.valid {
                    assert_eq!(run.answer, a.sto_value());
                }
            }
        }
    }
}

#[test]
fn random_corpus_success_is_explained_by_the_window() {
    let mut below = 0;
    let mut total = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [256usize, 1024, 4096] {
        for m in [4usize, 8, 16, 32, 64] {
            for eps in [0.1, 0.2] {
                let inst = instance(n, m, Cost::from_integer(rng.random_range(1..100)), Cost::from_integer(1), eps);
                let plan = optimize_hybrid(&inst).unwrap();
                for seed in 0..30 {
                    let a = random_instance(n, m, true, seed).unwrap();
                    let (state, _) = run_schedule(&inst, &a, &plan.plan.schedule).unwrap();
                    let p = success_probability(&state, &a).unwrap();
                    total += 1;
                    if p < 1.0 - eps - 1e-9 {
                        below += 1;
                        assert!(!outer_step_fits_window(&inst, plan.t_inner), "{n} {m} {eps}");
                    }
                }
            }
        }
    }
    assert!(below < total);
}

#[test]
fn uniform_state_sits_at_the_origin() {
    let inst = instance(100, 10, Cost::from_integer(2), Cost::from_integer(1), 0.1);
    let f = frame(&inst).unwrap();
    let a = random_instance(100, 10, true, 4).unwrap();
    let p = embed(&StateVector::uniform(100).unwrap(), &a, &f).unwrap();
    assert!(p.theta.abs() < 1e-12);
}
