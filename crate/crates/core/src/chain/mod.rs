//! The lazy base-exchange Metropolis chain.
//!
//! From state `S`, draw `i ∈ S` and `j ∉ S` uniformly and independently,
//! set `T = S - i + j`, and move to `T` with probability
//! `½ · min(1, w(T) / w(S))`; otherwise stay. The chain is reversible with
//! respect to the normalized masses and stays put with probability at least
//! one half.
//!
//! Every step consumes, in order: one draw for the position of `i` in the
//! sorted current set, one for the position of `j` in the sorted complement,
//! and one uniform in `[0, 1)` for the acceptance test. The acceptance draw
//! is taken even when `T` has zero mass, so the RNG position after `t` steps
//! depends only on `t`.

mod budget;
mod rng;

pub use budget::{mixing_budget, stationary_transition_prob, BudgetOptions, CMuSource, MixingBudget};
pub(crate) use budget::{exchange_probability, tau_from};
pub use rng::{chain_rng, ChainRng};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{HomogeneousDistribution, Subset};
use crate::error::{Error, Result};

/// Configuration for [`sample`] and [`sample_many`]. The laziness of the
/// chain is fixed at one half.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// Run exactly this many steps instead of the mixing budget.
    pub steps_override: Option<u64>,
    /// Options for the budget computation when no override is given.
    pub budget: BudgetOptions,
}

impl ChainConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        ChainConfig {
            epsilon,
            seed,
            steps_override: None,
            budget: BudgetOptions::default(),
        }
    }

    pub fn with_steps(mut self, steps: u64) -> Self {
        self.steps_override = Some(steps);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::input(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        Ok(())
    }
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig::new(0.01, 0)
    }
}

/// A proposed exchange `T = S - removed + added`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposal {
    pub removed: usize,
    pub added: usize,
    pub target: Subset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Moved,
    Rejected,
    /// The proposal had zero mass.
    Infeasible,
    /// `k == 0` or `k == n`: the chain has a single state.
    Degenerate,
}

/// Mutable state of one chain over a shared distribution.
pub struct ChainRun<'d, D: HomogeneousDistribution + ?Sized> {
    dist: &'d D,
    current: Vec<usize>,
    absent: Vec<usize>,
    current_logmass: f64,
    rng: ChainRng,
    step_count: u64,
    accept_count: u64,
    reject_infeasible_count: u64,
}

impl<'d, D: HomogeneousDistribution + ?Sized> ChainRun<'d, D> {
    /// Starts a chain at `start`, which must be a support member.
    pub fn new(dist: &'d D, start: &Subset, rng: ChainRng) -> Result<Self> {
        let logmass = dist.log_mass(start)?;
        if logmass == f64::NEG_INFINITY {
            return Err(Error::input(format!("start state {start} has zero mass")));
        }
        Ok(ChainRun {
            dist,
            current: start.as_slice().to_vec(),
            absent: start.complement(dist.ground_size()),
            current_logmass: logmass,
            rng,
            step_count: 0,
            accept_count: 0,
            reject_infeasible_count: 0,
        })
    }

    pub fn current(&self) -> Subset {
        Subset::from_sorted(self.current.clone())
    }

    pub fn current_logmass(&self) -> f64 {
        self.current_logmass
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn accept_count(&self) -> u64 {
        self.accept_count
    }

    pub fn reject_infeasible_count(&self) -> u64 {
        self.reject_infeasible_count
    }

    pub fn is_degenerate(&self) -> bool {
        self.current.is_empty() || self.absent.is_empty()
    }

    fn draw_positions(&mut self) -> (usize, usize) {
        let pi = self.rng.random_range(0..self.current.len() as u64) as usize;
        let pj = self.rng.random_range(0..self.absent.len() as u64) as usize;
        (pi, pj)
    }

    fn exchanged(&self, pi: usize, j: usize) -> Vec<usize> {
        let mut t = self.current.clone();
        replace_sorted(&mut t, pi, j);
        t
    }

    /// Draws a proposal without moving. Consumes the two index draws of a
    /// step but not the acceptance draw. `None` for a single-state chain.
    pub fn propose(&mut self) -> Option<Proposal> {
        if self.is_degenerate() {
            return None;
        }
        let (pi, pj) = self.draw_positions();
        let (i, j) = (self.current[pi], self.absent[pj]);
        Some(Proposal {
            removed: i,
            added: j,
            target: Subset::from_sorted(self.exchanged(pi, j)),
        })
    }

    /// One transition of the lazy Metropolis chain.
    pub fn step(&mut self) -> StepOutcome {
        if self.is_degenerate() {
            return StepOutcome::Degenerate;
        }
        let (pi, pj) = self.draw_positions();
        let u: f64 = self.rng.random();
        self.step_count += 1;

        let (i, j) = (self.current[pi], self.absent[pj]);
        let target = self.exchanged(pi, j);
        let target_logmass = self.dist.log_mass_unchecked(&target);
        if target_logmass == f64::NEG_INFINITY {
            self.reject_infeasible_count += 1;
            return StepOutcome::Infeasible;
        }
        let ratio = (target_logmass - self.current_logmass).exp();
        if u < 0.5 * ratio.min(1.0) {
            self.current = target;
            replace_sorted(&mut self.absent, pj, i);
            self.current_logmass = target_logmass;
            self.accept_count += 1;
            StepOutcome::Moved
        } else {
            StepOutcome::Rejected
        }
    }

    /// Runs `steps` transitions; returns immediately for a single-state chain.
    pub fn run(&mut self, steps: u64) {
        if self.is_degenerate() {
            return;
        }
        for _ in 0..steps {
            self.step();
        }
    }

    /// Recomputes the mass of the current state and checks it against the
    /// cached value.
    pub fn validate(&self) -> Result<()> {
        let fresh = self.dist.log_mass_unchecked(&self.current);
        if fresh == f64::NEG_INFINITY || (fresh - self.current_logmass).abs() > 1e-9 {
            return Err(Error::numerical(format!(
                "cached log-mass {} disagrees with recomputed {fresh}",
                self.current_logmass
            )));
        }
        Ok(())
    }

    pub fn outcome(&self) -> SampleOutcome {
        SampleOutcome {
            subset: self.current(),
            steps: self.step_count,
            accepts: self.accept_count,
            rejected_infeasible: self.reject_infeasible_count,
        }
    }
}

/// Replaces `v[pos]` with `x` and restores ascending order.
fn replace_sorted(v: &mut [usize], mut pos: usize, x: usize) {
    v[pos] = x;
    while pos > 0 && v[pos - 1] > x {
        v.swap(pos - 1, pos);
        pos -= 1;
    }
    while pos + 1 < v.len() && v[pos + 1] < x {
        v.swap(pos, pos + 1);
        pos += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleOutcome {
    pub subset: Subset,
    pub steps: u64,
    pub accepts: u64,
    #[serde(skip)]
    pub rejected_infeasible: u64,
}

/// Number of steps a configuration asks for, with the budget when one was
/// computed.
pub fn planned_steps<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    start: &Subset,
    config: &ChainConfig,
) -> Result<(u64, Option<MixingBudget>)> {
    config.validate()?;
    match config.steps_override {
        Some(steps) => {
            if !d.in_support(start)? {
                return Err(Error::input(format!("start state {start} has zero mass")));
            }
            Ok((steps, None))
        }
        None => {
            let budget = mixing_budget(d, start, config.epsilon, &config.budget)?;
            Ok((budget.tau, Some(budget)))
        }
    }
}

/// One approximate sample: runs the chain from `start` on stream 0.
pub fn sample<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    start: &Subset,
    config: &ChainConfig,
) -> Result<SampleOutcome> {
    let (steps, _) = planned_steps(d, start, config)?;
    let mut run = ChainRun::new(d, start, chain_rng(config.seed, 0))?;
    run.run(steps);
    Ok(run.outcome())
}

#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub steps: u64,
    pub budget: Option<MixingBudget>,
    pub outcomes: Vec<SampleOutcome>,
}

/// `count` independent chains from `start`, chain `c` on stream `c`.
/// Results are in chain order regardless of `threads`.
pub fn sample_many<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    start: &Subset,
    config: &ChainConfig,
    count: usize,
    threads: Option<usize>,
) -> Result<SampleBatch> {
    let (steps, budget) = planned_steps(d, start, config)?;
    let run_one = |c: usize| -> Result<SampleOutcome> {
        let mut run = ChainRun::new(d, start, chain_rng(config.seed, c as u64))?;
        run.run(steps);
        Ok(run.outcome())
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::input(format!("could not start worker pool: {e}")))?;
    let outcomes = pool.install(|| (0..count).into_par_iter().map(run_one).collect::<Result<Vec<_>>>())?;
    Ok(SampleBatch {
        steps,
        budget,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{ExplicitTable, KDpp, KSubsets};
    use crate::linalg::SymmetricMatrix;
    use std::collections::HashMap;

    fn s(v: &[usize]) -> Subset {
        Subset::from_sorted(v.to_vec())
    }

    #[test]
    fn replace_sorted_cases() {
        let mut v = vec![1, 4, 7];
        replace_sorted(&mut v, 0, 9);
        assert_eq!(v, vec![4, 7, 9]);
        replace_sorted(&mut v, 2, 0);
        assert_eq!(v, vec![0, 4, 7]);
        replace_sorted(&mut v, 1, 5);
        assert_eq!(v, vec![0, 5, 7]);
    }

    #[test]
    fn proposals_uniform_over_pairs() {
        let d = KDpp::new(SymmetricMatrix::identity(4), 2).unwrap();
        let mut run = ChainRun::new(&d, &s(&[0, 1]), chain_rng(3, 0)).unwrap();
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        let trials = 40_000;
        for _ in 0..trials {
            let p = run.propose().unwrap();
            assert_eq!(p.target, s(&[0, 1]).exchange(p.removed, p.added));
            *counts.entry((p.removed, p.added)).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        // each pair has probability 1/4; 5 sigma band
        let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - trials as f64 / 4.0).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn forced_proposal() {
        let d = KDpp::new(SymmetricMatrix::identity(2), 1).unwrap();
        let mut run = ChainRun::new(&d, &s(&[0]), chain_rng(1, 0)).unwrap();
        for _ in 0..10 {
            assert_eq!(run.propose().unwrap().target, s(&[1]));
        }
    }

    #[test]
    fn same_seed_same_trajectory() {
        let d = KDpp::new(SymmetricMatrix::identity(6), 3).unwrap();
        let traj = |seed| {
            let mut run = ChainRun::new(&d, &s(&[0, 1, 2]), chain_rng(seed, 5)).unwrap();
            (0..200)
                .map(|_| {
                    run.step();
                    run.current()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(traj(9), traj(9));
        assert_ne!(traj(9), traj(10));
    }

    #[test]
    fn uniform_acceptance_is_one_half() {
        let d = KDpp::new(SymmetricMatrix::identity(5), 2).unwrap();
        let mut run = ChainRun::new(&d, &s(&[0, 1]), chain_rng(17, 0)).unwrap();
        let steps = 100_000;
        run.run(steps);
        run.validate().unwrap();
        assert_eq!(run.reject_infeasible_count(), 0);
        let frac = run.accept_count() as f64 / steps as f64;
        assert!((frac - 0.5).abs() < 5.0 * (0.25 / steps as f64).sqrt());
    }

    #[test]
    fn infeasible_proposals_leave_state_unchanged() {
        let t = ExplicitTable::new(4, vec![(s(&[0, 1]), 1.0), (s(&[0, 2]), 2.0)]).unwrap();
        let mut run = ChainRun::new(&t, &s(&[0, 1]), chain_rng(2, 0)).unwrap();
        for _ in 0..1000 {
            let before = run.current();
            let before_inf = run.reject_infeasible_count();
            let out = run.step();
            if out == StepOutcome::Infeasible {
                assert_eq!(run.current(), before);
                assert_eq!(run.reject_infeasible_count(), before_inf + 1);
            }
        }
        assert!(run.reject_infeasible_count() > 0);
    }

    #[test]
    fn half_ratio_acceptance() {
        // from {0,2} (mass 2) the move to {0,1} (mass 1) is accepted w.p. 1/4
        let t = ExplicitTable::new(4, vec![(s(&[0, 1]), 1.0), (s(&[0, 2]), 2.0)]).unwrap();
        let (mut proposed, mut accepted) = (0u64, 0u64);
        for c in 0..200_000 {
            let rng = chain_rng(4, c);
            let mut probe = ChainRun::new(&t, &s(&[0, 2]), rng.clone()).unwrap();
            let mut stepper = ChainRun::new(&t, &s(&[0, 2]), rng).unwrap();
            if probe.propose().unwrap().target == s(&[0, 1]) {
                proposed += 1;
                accepted += (stepper.step() == StepOutcome::Moved) as u64;
            }
        }
        let frac = accepted as f64 / proposed as f64;
        let sigma = (0.25 * 0.75 / proposed as f64).sqrt();
        assert!((frac - 0.25).abs() < 5.0 * sigma, "frac = {frac}");
    }

    #[test]
    fn zero_steps_returns_start() {
        let d = KDpp::new(SymmetricMatrix::identity(5), 2).unwrap();
        let out = sample(&d, &s(&[1, 3]), &ChainConfig::new(0.1, 0).with_steps(0)).unwrap();
        assert_eq!(out.subset, s(&[1, 3]));
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn degenerate_chain_is_already_mixed() {
        let d = KDpp::new(SymmetricMatrix::identity(3), 3).unwrap();
        let out = sample(&d, &s(&[0, 1, 2]), &ChainConfig::new(0.1, 0)).unwrap();
        assert_eq!(out.subset, s(&[0, 1, 2]));
        assert_eq!(out.steps, 0);
        let mut run = ChainRun::new(&d, &s(&[0, 1, 2]), chain_rng(0, 0)).unwrap();
        assert!(run.propose().is_none());
        assert_eq!(run.step(), StepOutcome::Degenerate);
    }

    #[test]
    fn batch_independent_of_thread_count() {
        let d = KDpp::new(SymmetricMatrix::identity(6), 2).unwrap();
        let cfg = ChainConfig::new(0.05, 11);
        let a = sample_many(&d, &s(&[0, 1]), &cfg, 64, Some(1)).unwrap();
        let b = sample_many(&d, &s(&[0, 1]), &cfg, 64, Some(4)).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.steps, a.budget.unwrap().tau);
    }

    #[test]
    fn uniform_kdpp_sampler_close_to_uniform() {
        let d = KDpp::new(SymmetricMatrix::identity(6), 2).unwrap();
        let cfg = ChainConfig::new(0.05, 2024);
        let runs = 100_000;
        let batch = sample_many(&d, &s(&[0, 1]), &cfg, runs, None).unwrap();
        let mut counts: HashMap<Subset, usize> = HashMap::new();
        for o in &batch.outcomes {
            *counts.entry(o.subset.clone()).or_default() += 1;
        }
        let tv: f64 = 0.5
            * KSubsets::new(6, 2)
                .map(|x| (*counts.get(&x).unwrap_or(&0) as f64 / runs as f64 - 1.0 / 15.0).abs())
                .sum::<f64>();
        let bound = 0.05 + 3.0 * (15.0 / (2.0 * runs as f64)).sqrt();
        assert!(tv <= bound, "tv = {tv}, bound = {bound}");
    }
}
