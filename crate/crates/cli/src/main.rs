use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sto_cli::{fig2, num, run_sweep, SweepConfig, UsageError};
use sto_core::bounds::{all_bounds, bounds_to_csv, exact_lower_bound};
use sto_core::classical::{
    adversary_game, heuristic_corpus, monte_carlo_fake_fs, monte_carlo_success, rcc0, FlipAnswer, InputMix, Strategy,
};
use sto_core::plan_format::PlanFile;
use sto_core::problem::random_instance;
use sto_core::schedules::{optimize_hybrid_with, phi_opt};
use sto_core::statevec::{run_schedule, success_probability};
use sto_core::subspace::{audit_schedule, AuditOptions};
use sto_core::{parse_cost, Exec, ProblemInstance};

/// Search with a cheap set oracle and an expensive item oracle: plans,
/// simulations, bounds and classical games.
#[derive(Parser, Debug)]
#[command(name = "sto", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replay a plan file on a seeded random assignment
    Simulate {
        /// Plan file: header `N M c_star c_s epsilon`, then one of G, OS, O* per line
        plan: PathBuf,
        /// Replay on an input without a marked item
        #[arg(long)]
        unmarked: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Optimize the hybrid schedule for an instance
    Optimize {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Print every applicable lower bound as CSV
    Bounds {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Cost scale for the exact-integer bound
        #[arg(long, default_value = "1000")]
        scale: String,
        #[command(flatten)]
        common: Common,
    },
    /// Play the zero-error adversary game and optionally estimate success
    Classical {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Strategy name; see the error message for the list
        #[arg(long, default_value = "alg5")]
        strategy: String,
        /// Flip the strategy's answer with this probability
        #[arg(long)]
        flip: Option<f64>,
        /// Monte Carlo trials (0 skips the estimate)
        #[arg(long, default_value_t = 0)]
        trials: u64,
        /// Also run the strategy behind the fake set oracle
        #[arg(long)]
        fake_set: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a grid of instances described by a `key = value` config file
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Data behind the cost-versus-c_S figure (c_* = 1, N = 10^4, M = 400)
    Fig2 {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Cost of the item oracle; decimals and `p/q` are exact
    #[arg(long)]
    c_star: String,
    #[arg(long, default_value = "1")]
    c_s: String,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

impl InstanceArgs {
    fn build(&self) -> Result<ProblemInstance> {
        let c_star = parse_cost(&self.c_star).map_err(|e| UsageError(format!("--c-star: {e}")))?;
        let c_s = parse_cost(&self.c_s).map_err(|e| UsageError(format!("--c-s: {e}")))?;
        ProblemInstance::new(self.n, self.m, c_star, c_s, self.epsilon).map_err(|e| UsageError(e.to_string()).into())
    }
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Parallel)]
    mode: Mode,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Sequential,
    Parallel,
}

impl From<Mode> for Exec {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sequential => Exec::Sequential,
            Mode::Parallel => Exec::Parallel,
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn simulate(plan: &Path, unmarked: bool, common: &Common) -> Result<()> {
    let text = std::fs::read_to_string(plan).with_context(|| format!("cannot read {}", plan.display()))?;
    let plan = PlanFile::parse(&text).map_err(|e| UsageError(format!("{}: {e}", plan.display())))?;
    let inst = &plan.instance;
    let seed = common.seed.unwrap_or(0);
    let a = random_instance(inst.n(), inst.m(), !unmarked, seed)?;
    let (state, ledger) = run_schedule(inst, &a, &plan.schedule)?;
    let mut summary = String::new();
    writeln!(summary, "steps = {}", plan.schedule.len())?;
    writeln!(summary, "i_star = {}", a.i_star().map(|i| i.to_string()).unwrap_or_else(|| "none".into()))?;
    writeln!(summary, "q_star = {}\nq_s = {}\ncost = {}", ledger.q_star, ledger.q_s, num(&ledger.total()))?;
    if a.is_marked() {
        writeln!(summary, "success = {}", success_probability(&state, &a)?)?;
    }
    // The progress trace needs a marked item and a proper frame.
    if a.is_marked() && inst.m() >= 2 && inst.n() > inst.m() {
        let trace = audit_schedule(inst, &a, &plan.schedule, AuditOptions::default())?;
        writeln!(summary, "audit_bound = {}\naudit_pass = {}", trace.bound_per_cost, trace.passes())?;
        if let Some(out) = &common.out {
            emit(Some(out), &trace.to_csv())?;
        }
    } else if common.out.is_some() {
        bail!("a progress trace needs a marked item and N > M >= 2");
    }
    print!("{summary}");
    Ok(())
}

fn optimize(instance: &InstanceArgs, common: &Common) -> Result<()> {
    let inst = instance.build()?;
    let plan = optimize_hybrid_with(&inst, common.mode.into())?;
    let mut s = String::new();
    writeln!(s, "t_inner = {}\ntau_outer = {}\nalpha = {}", plan.t_inner, plan.tau_outer, plan.alpha)?;
    writeln!(s, "q_star = {}\nq_s = {}", plan.plan.predicted_q_star, plan.plan.predicted_q_s)?;
    writeln!(s, "predicted_cost = {}\nformula_cost = {}", num(&plan.plan.predicted_cost), num(&plan.plan.formula_cost))?;
    writeln!(s, "predicted_success = {}\nphi_opt = {}", plan.plan.predicted_success, phi_opt(&inst))?;
    if let Ok(b) = exact_lower_bound(&inst) {
        writeln!(s, "grover_like_bound = {}", b.report.value)?;
    }
    print!("{s}");
    if let Some(out) = &common.out {
        emit(Some(out), &PlanFile::new(inst, plan.plan.schedule).to_text())?;
    }
    Ok(())
}

fn pick_strategy(name: &str, n: usize) -> Result<Box<dyn Strategy>> {
    let corpus = heuristic_corpus(n);
    let names: Vec<String> = corpus.iter().map(|s| s.name()).collect();
    corpus
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| UsageError(format!("unknown strategy {name:?}; choose one of {}", names.join(", "))).into())
}

fn classical(instance: &InstanceArgs, name: &str, flip: Option<f64>, trials: u64, fake_set: bool, common: &Common) -> Result<()> {
    let inst = instance.build()?;
    let base = pick_strategy(name, inst.n())?;
    let strategy: Box<dyn Strategy> = match flip {
        Some(p) if (0.0..=1.0).contains(&p) => Box::new(FlipAnswer { base, flip: p }),
        Some(p) => return Err(UsageError(format!("--flip must lie in [0, 1], got {p}")).into()),
        None => base,
    };
    let seed = common.seed.unwrap_or(0);
    let exec: Exec = common.mode.into();
    let game = adversary_game(strategy.as_ref(), &inst, seed)?;
    let mut s = String::new();
    writeln!(s, "strategy = {}\nanswer = {}\ncertified = {}", game.strategy, game.answer, game.certified)?;
    writeln!(s, "forced_cost = {}\nrcc0 = {}", num(&game.forced_cost), num(&rcc0(&inst)))?;
    if trials > 0 {
        let e = monte_carlo_success(strategy.as_ref(), &inst, trials, seed, exec)?;
        writeln!(s, "success = {}\nsuccess_stderr = {}", e.estimate, e.stderr)?;
        if fake_set {
            let f = monte_carlo_fake_fs(strategy.as_ref(), &inst, InputMix::Balanced, trials, seed, exec)?;
            writeln!(s, "fake_set_success = {}\nfake_set_success_stderr = {}", f.success.estimate, f.success.stderr)?;
            let v = monte_carlo_fake_fs(strategy.as_ref(), &inst, InputMix::MarkedOnly, trials, seed, exec)?;
            writeln!(s, "fake_set_validity_marked = {}", v.validity.estimate)?;
        }
    }
    match &common.out {
        Some(out) => {
            emit(Some(out), &game.transcript_csv())?;
            print!("{s}");
        }
        None => {
            print!("{}", game.transcript_csv());
            eprint!("{s}");
        }
    }
    Ok(())
}

fn sweep(config: &Path, common: &Common) -> Result<()> {
    let text = std::fs::read_to_string(config).with_context(|| format!("cannot read {}", config.display()))?;
    let mut cfg = SweepConfig::parse(&text).map_err(|e| UsageError(format!("{}: {e}", config.display())))?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if common.out.is_some() {
        cfg.out = common.out.clone();
    }
    let out = run_sweep(&cfg, common.mode.into())?;
    emit(cfg.out.as_deref(), &out.csv)?;
    for (p, e) in &out.failures {
        eprintln!("failed at {p}: {e}");
    }
    if !out.failures.is_empty() {
        bail!("{} of {} grid points failed", out.failures.len(), out.failures.len() + out.rows);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate { plan, unmarked, common } => simulate(plan, *unmarked, common),
        Command::Optimize { instance, common } => optimize(instance, common),
        Command::Bounds { instance, scale, common } => {
            let inst = instance.build()?;
            let scale = parse_cost(scale).map_err(|e| UsageError(format!("--scale: {e}")))?;
            emit(common.out.as_deref(), &bounds_to_csv(&all_bounds(&inst, scale))?)
        }
        Command::Classical { instance, strategy, flip, trials, fake_set, common } => {
            classical(instance, strategy, *flip, *trials, *fake_set, common)
        }
        Command::Sweep { config, common } => sweep(config, common),
        Command::Fig2 { common } => emit(common.out.as_deref(), &fig2(common.mode.into()).map_err(|e| anyhow!(e))?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
