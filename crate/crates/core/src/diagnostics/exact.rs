use std::collections::HashMap;

use crate::distributions::{support, HomogeneousDistribution, Subset};
use crate::error::{Error, Result};

/// Normalized distribution over an enumerated support, states in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    states: Vec<Subset>,
    probs: Vec<f64>,
    log_probs: Vec<f64>,
    index: HashMap<Subset, usize>,
}

impl ExactDistribution {
    /// From explicit states and probabilities, which must be positive and
    /// sum to 1 within 1e-12.
    pub fn new(states: Vec<Subset>, probs: Vec<f64>) -> Result<Self> {
        if states.len() != probs.len() || states.is_empty() {
            return Err(Error::input("need one probability per state and at least one state"));
        }
        if probs.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::input("probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!("probabilities sum to {total}, not 1")));
        }
        let log_probs = probs.iter().map(|p| p.ln()).collect();
        Self::assemble(states, probs, log_probs)
    }

    fn assemble(states: Vec<Subset>, probs: Vec<f64>, log_probs: Vec<f64>) -> Result<Self> {
        let mut index = HashMap::with_capacity(states.len());
        for (pos, s) in states.iter().enumerate() {
            if index.insert(s.clone(), pos).is_some() {
                return Err(Error::input(format!("state {s} listed twice")));
            }
        }
        Ok(ExactDistribution {
            states,
            probs,
            log_probs,
            index,
        })
    }

    pub fn states(&self) -> &[Subset] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `ln π` per state, computed from log-masses rather than from `probs`.
    pub fn log_probs(&self) -> &[f64] {
        &self.log_probs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &Subset) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn prob(&self, s: &Subset) -> f64 {
        self.index_of(s).map_or(0.0, |i| self.probs[i])
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Enumerates the support of `d` and normalizes its masses.
pub fn enumerate<D: HomogeneousDistribution + ?Sized>(d: &D, cap: u64) -> Result<ExactDistribution> {
    let members = support(d, cap)?;
    if members.is_empty() {
        return Err(Error::domain("distribution has empty support"));
    }
    let max = members.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = members.iter().map(|(_, l)| (l - max).exp()).sum();
    let log_z = max + z.ln();
    let log_probs: Vec<f64> = members.iter().map(|(_, l)| l - log_z).collect();
    let probs = log_probs.iter().map(|l| l.exp()).collect();
    let states = members.into_iter().map(|(s, _)| s).collect();
    ExactDistribution::assemble(states, probs, log_probs)
}
