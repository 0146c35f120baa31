//! The modulus-chain pipeline: base enumeration modulo `M_1`, lifting through
//! `M_2, M_3, ...`, and exact verification once every summand is determinate.

mod base;
mod bits;
mod checkpoint;
mod lift;
mod types;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

pub use base::{
    enumerate_base_solutions, enumerate_base_solutions_with, BaseOptions, DEFAULT_RANGE_BOUND,
};
pub use bits::{bit_count_table, BitCount};
pub use checkpoint::{
    format_solution_line, parse_checkpoint, parse_solution_line, write_checkpoint, Checkpoint,
};
pub use lift::{
    balanced_split, compute_lift_plan, lift_balanced, lift_unbalanced, LiftCase, LiftPlan,
    LiftStep, DEFAULT_MEMORY_CAP,
};
pub use types::{
    format_solution, Direction, ExactSolution, ExpProgression, PowerProgression, ProblemSpec,
    RingShapes, SolutionModM,
};

use crate::error::{Error, Result};
use crate::planner::Chain;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Per-side cap on meet-in-the-middle list entries.
    pub memory_cap: usize,
    /// Finalize each solution as soon as all its summands are determinate.
    pub early_finalize: bool,
    pub base_range_bound: usize,
    /// Re-check every emitted solution against the full modulus.
    pub check_soundness: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            workers: None,
            memory_cap: DEFAULT_MEMORY_CAP,
            early_finalize: true,
            base_range_bound: DEFAULT_RANGE_BOUND,
            check_soundness: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepReport {
    /// Chain index `i` (1-based) of the modulus reached.
    pub index: usize,
    /// Solutions carried in from the previous modulus (0 for the base step).
    pub input: usize,
    /// Solutions modulo `M_i` before finalization.
    pub produced: usize,
    pub balanced: usize,
    pub unbalanced: usize,
    /// Solutions with all summands determinate that were checked exactly here.
    pub finalized: usize,
    /// Of those, the ones that are genuine integer solutions.
    pub verified: usize,
    /// Solutions carried on to the next modulus.
    pub remaining: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct TerminationReport {
    pub steps: Vec<StepReport>,
    /// First chain index at which no modular solution was left to lift.
    pub terminated_at: Option<usize>,
    /// Odd `n > 1` in the mirror direction: nothing to search.
    pub parity_shortcut: bool,
}

/// Outcome of a chain run. `complete` is false only when the chain ran out with
/// `remaining` solutions still indeterminate.
#[derive(Clone, Debug)]
pub struct ChainRun {
    pub spec: ProblemSpec,
    pub solutions: Vec<ExactSolution>,
    pub report: TerminationReport,
    pub remaining: Vec<SolutionModM>,
    pub complete: bool,
}

/// Called after each chain index with the step report, the surviving modular
/// solutions and every exact solution found so far.
pub type StepObserver<'a> = dyn FnMut(&StepReport, &[SolutionModM], &[ExactSolution]) + 'a;

pub fn solve_chain(spec: &ProblemSpec, chain: &Chain) -> Result<ChainRun> {
    solve_chain_with(spec, chain, &SolveOptions::default(), &mut |_, _, _| {})
}

pub fn solve_chain_with(
    spec: &ProblemSpec,
    chain: &Chain,
    opts: &SolveOptions,
    observer: &mut StepObserver<'_>,
) -> Result<ChainRun> {
    run(spec, chain, opts, None, observer)
}

/// Continues a run from a checkpoint taken at `checkpoint.index`.
pub fn resume_chain(
    spec: &ProblemSpec,
    chain: &Chain,
    checkpoint: Checkpoint,
    opts: &SolveOptions,
    observer: &mut StepObserver<'_>,
) -> Result<ChainRun> {
    if checkpoint.index == 0 || checkpoint.index > chain.len() {
        return Err(Error::InvalidInput(format!(
            "checkpoint index {} outside the chain",
            checkpoint.index
        )));
    }
    run(spec, chain, opts, Some(checkpoint), observer)
}

fn run(
    spec: &ProblemSpec,
    chain: &Chain,
    opts: &SolveOptions,
    resume: Option<Checkpoint>,
    observer: &mut StepObserver<'_>,
) -> Result<ChainRun> {
    if chain.is_empty() {
        return Err(Error::InvalidInput("empty chain".into()));
    }
    let mut report = TerminationReport::default();
    if spec.direction == Direction::TwoAsSumOfThrees && spec.n > 1 && spec.n % 2 == 1 {
        report.parity_shortcut = true;
        return Ok(ChainRun {
            spec: *spec,
            solutions: Vec::new(),
            report,
            remaining: Vec::new(),
            complete: true,
        });
    }
    let pool = match opts.workers {
        Some(w) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let mut exact: Vec<ExactSolution> = Vec::new();
    let (start, mut working) = match resume {
        Some(cp) => {
            exact = cp.found;
            (cp.index, cp.solutions)
        }
        None => {
            let t0 = Instant::now();
            let base_opts = BaseOptions {
                range_bound: opts.base_range_bound,
                distinct_determinate: true,
            };
            let sols = enumerate_base_solutions_with(spec, chain.modulus(1), &base_opts)?;
            let ring = RingShapes::new(spec.direction, chain.modulus(1))?;
            let mut step = StepReport {
                index: 1,
                input: 0,
                produced: sols.len(),
                balanced: 0,
                unbalanced: 0,
                finalized: 0,
                verified: 0,
                remaining: 0,
                elapsed: Duration::ZERO,
            };
            let sols = finalize_step(
                spec,
                &ring,
                sols,
                opts,
                chain.len() == 1,
                &mut step,
                &mut exact,
            );
            step.elapsed = t0.elapsed();
            observer(&step, &sols, &exact);
            let done = sols.is_empty();
            report.steps.push(step);
            if done {
                report.terminated_at = Some(1);
            }
            (1, sols)
        }
    };

    if report.terminated_at.is_none() && !working.is_empty() {
        let mut prev = RingShapes::new(spec.direction, chain.modulus(start))?;
        for i in start + 1..=chain.len() {
            let t0 = Instant::now();
            let next = RingShapes::new(spec.direction, chain.modulus(i))?;
            let step = LiftStep::from_rings(*spec, i, prev, next.clone())?
                .pin_zero(true)
                .memory_cap(opts.memory_cap);
            let lift_all = || -> Result<Vec<(LiftCase, Vec<SolutionModM>)>> {
                working.par_iter().map(|s| step.lift(s)).collect()
            };
            let lifted = match &pool {
                Some(p) => p.install(lift_all)?,
                None => lift_all()?,
            };
            let mut rep = StepReport {
                index: i,
                input: working.len(),
                produced: 0,
                balanced: 0,
                unbalanced: 0,
                finalized: 0,
                verified: 0,
                remaining: 0,
                elapsed: Duration::ZERO,
            };
            let mut sols = Vec::new();
            for (case, out) in lifted {
                match case {
                    LiftCase::Balanced => rep.balanced += 1,
                    LiftCase::Unbalanced => rep.unbalanced += 1,
                }
                sols.extend(out);
            }
            sols.par_sort_unstable();
            sols.dedup();
            if opts.check_soundness {
                for s in &sols {
                    assert!(
                        s.satisfies(spec, &next.modulus),
                        "unsound lift {s:?} modulo {}",
                        next.modulus
                    );
                }
            }
            rep.produced = sols.len();
            working = finalize_step(
                spec,
                &next,
                sols,
                opts,
                i == chain.len(),
                &mut rep,
                &mut exact,
            );
            rep.elapsed = t0.elapsed();
            observer(&rep, &working, &exact);
            report.steps.push(rep);
            prev = next;
            if working.is_empty() {
                report.terminated_at = Some(i);
                break;
            }
        }
    } else if report.terminated_at.is_none() {
        report.terminated_at = Some(start);
    }

    exact.sort_unstable();
    exact.dedup();
    let complete = working.is_empty();
    let run = ChainRun {
        spec: *spec,
        solutions: exact,
        report,
        remaining: working,
        complete,
    };
    if complete {
        Ok(run)
    } else {
        Err(Error::ChainExhausted {
            index: chain.len(),
            remaining: run.remaining.len(),
            partial: Box::new(run),
        })
    }
}

/// Moves solutions whose summands are all determinate to exact verification;
/// returns the ones that must keep lifting.
fn finalize_step(
    spec: &ProblemSpec,
    ring: &RingShapes,
    sols: Vec<SolutionModM>,
    opts: &SolveOptions,
    last: bool,
    rep: &mut StepReport,
    exact: &mut Vec<ExactSolution>,
) -> Vec<SolutionModM> {
    let ready = |s: &SolutionModM| s.all_determinate(ring);
    let (done, keep): (Vec<_>, Vec<_>) = if opts.early_finalize || last || sols.iter().all(ready) {
        sols.into_iter().partition(|s| ready(s))
    } else {
        (Vec::new(), sols)
    };
    rep.finalized = done.len();
    for s in &done {
        if let Some(e) = finalize(spec, s) {
            rep.verified += 1;
            exact.push(e);
        }
    }
    rep.remaining = keep.len();
    keep
}

/// The integer solution behind a modular one whose summands are all determinate,
/// if the exact sum is a power of the left-hand base.
pub fn finalize(spec: &ProblemSpec, sol: &SolutionModM) -> Option<ExactSolution> {
    if !sol.exponents.windows(2).all(|w| w[0] < w[1]) {
        return None;
    }
    let s = BigUint::from(spec.summand_base());
    let mut sum = sol.exponents.iter().try_fold(BigUint::zero(), |acc, &a| {
        Some(acc + s.pow(u32::try_from(a).ok()?))
    })?;
    let p = BigUint::from(spec.power_base());
    let mut x = 0u64;
    while !sum.is_zero() && (&sum % &p).is_zero() {
        sum /= &p;
        x += 1;
    }
    if sum.to_u64() != Some(1) {
        return None;
    }
    let e = ExactSolution::checked(x, sol.exponents.clone(), spec.direction);
    debug_assert!(e.verified);
    Some(e)
}
