use serde::Serialize;

use crate::diagnostics::c_mu_over_support;
use crate::distributions::{support, HomogeneousDistribution, Subset, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// Probability of the exchange move from a state with log-mass `from` to an
/// adjacent state with log-mass `to`, for a k-homogeneous chain on `n`
/// elements.
#[inline]
pub(crate) fn exchange_probability(from: f64, to: f64, k: usize, n: usize) -> f64 {
    0.5 * (to - from).exp().min(1.0) / (k * (n - k)) as f64
}

/// `P(S, T)` of the lazy exchange chain.
///
/// Zero unless `|S - T| = 1`. For `S == T` this returns the holding
/// probability `1 - Σ_{T' ≠ S} P(S, T')`.
pub fn stationary_transition_prob<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    s: &Subset,
    t: &Subset,
) -> Result<f64> {
    let ls = d.log_mass(s)?;
    let lt = d.log_mass(t)?;
    if ls == f64::NEG_INFINITY {
        return Err(Error::input(format!("{s} is outside the support")));
    }
    if lt == f64::NEG_INFINITY {
        return Err(Error::input(format!("{t} is outside the support")));
    }
    let (n, k) = (d.ground_size(), d.degree());
    if s == t {
        if k == 0 || k == n {
            return Ok(1.0);
        }
        let mut out = 0.0;
        for &i in s.as_slice() {
            for j in s.complement(n) {
                let l = d.log_mass_unchecked(s.exchange(i, j).as_slice());
                if l > f64::NEG_INFINITY {
                    out += exchange_probability(ls, l, k, n);
                }
            }
        }
        return Ok(1.0 - out);
    }
    if s.difference(t).len() != 1 {
        return Ok(0.0);
    }
    Ok(exchange_probability(ls, lt, k, n))
}

/// How [`MixingBudget::c_mu`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CMuSource {
    /// Minimum over exchange-adjacent support pairs, by enumeration.
    Enumerated,
    /// The universal lower bound `1 / (2kn)`.
    UniversalBound,
    /// Single-state support; no steps are needed.
    SingleState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BudgetOptions {
    /// Exact `C_μ` and `μ(S0)` are computed when `C(n, k)` is at most this.
    pub cap: u64,
    /// Lower bound on `ln μ(S0)` (normalized) used when the support is too
    /// large to enumerate.
    pub log_start_mass_lower_bound: Option<f64>,
}

impl Default for BudgetOptions {
    fn default() -> Self {
        BudgetOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            log_start_mass_lower_bound: None,
        }
    }
}

/// `tau = ceil((1 / C_μ) · ln(1 / (ε · μ(S0))))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingBudget {
    pub c_mu: f64,
    pub c_mu_source: CMuSource,
    /// Normalized start mass (or its lower bound); may underflow to 0, in
    /// which case `log_mu_start` carries the value.
    pub mu_start_normalized: f64,
    pub log_mu_start: f64,
    pub epsilon: f64,
    pub tau: u64,
}

pub(crate) fn tau_from(c_mu: f64, log_mu_start: f64, epsilon: f64) -> u64 {
    let t = ((1.0 / c_mu) * (-(epsilon.ln()) - log_mu_start)).ceil();
    if t >= u64::MAX as f64 {
        u64::MAX
    } else {
        t.max(0.0) as u64
    }
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Step count guaranteeing an `epsilon`-approximate sample from `start`.
///
/// Uses the enumerated `C_μ` and exact normalized `μ(S0)` when the support
/// can be enumerated within `opts.cap`; otherwise falls back to
/// `C_μ >= 1/(2kn)` and requires `opts.log_start_mass_lower_bound`.
pub fn mixing_budget<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    start: &Subset,
    epsilon: f64,
    opts: &BudgetOptions,
) -> Result<MixingBudget> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::input(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let l0 = d.log_mass(start)?;
    if l0 == f64::NEG_INFINITY {
        return Err(Error::input(format!("start state {start} is outside the support")));
    }
    let (n, k) = (d.ground_size(), d.degree());
    let single = MixingBudget {
        c_mu: 0.5,
        c_mu_source: CMuSource::SingleState,
        mu_start_normalized: 1.0,
        log_mu_start: 0.0,
        epsilon,
        tau: 0,
    };
    if k == 0 || k == n {
        return Ok(single);
    }

    if d.subset_count() <= opts.cap as u128 {
        let members = support(d, opts.cap)?;
        if members.len() == 1 {
            return Ok(single);
        }
        let c_mu = c_mu_over_support(&members, n, k)?;
        let log_z = log_sum_exp(members.iter().map(|(_, l)| *l));
        let log_mu = l0 - log_z;
        return Ok(MixingBudget {
            c_mu,
            c_mu_source: CMuSource::Enumerated,
            mu_start_normalized: log_mu.exp(),
            log_mu_start: log_mu,
            epsilon,
            tau: tau_from(c_mu, log_mu, epsilon),
        });
    }

    let log_mu = opts.log_start_mass_lower_bound.ok_or_else(|| {
        Error::input(format!(
            "support of C({n}, {k}) sets exceeds the enumeration cap {} and no lower bound on the start mass was supplied",
            opts.cap
        ))
    })?;
    if !(log_mu <= 0.0) {
        return Err(Error::input(format!("start mass lower bound must be <= 1, got ln = {log_mu}")));
    }
    let c_mu = 1.0 / (2 * k * n) as f64;
    Ok(MixingBudget {
        c_mu,
        c_mu_source: CMuSource::UniversalBound,
        mu_start_normalized: log_mu.exp(),
        log_mu_start: log_mu,
        epsilon,
        tau: tau_from(c_mu, log_mu, epsilon),
    })
}
