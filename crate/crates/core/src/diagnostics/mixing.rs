use std::collections::HashSet;

use serde::Serialize;

use super::{ExactDistribution, TransitionMatrix};
use crate::chain::exchange_probability;
use crate::distributions::{support, HomogeneousDistribution, Subset};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, SymmetricMatrix};

/// Largest state space handed to the dense eigensolver.
pub const MAX_DENSE_STATES: usize = 4096;

/// `C_μ` for a singleton support, where the minimum is over an empty set.
pub const SINGLETON_C_MU: f64 = 0.5;

/// Spectral gap `1 - λ₂` of a reversible chain, computed from the
/// symmetrization `D^{1/2} P D^{-1/2}` with `D = diag(π)`.
///
/// A single-state chain has no second eigenvalue; its gap is 1.
pub fn poincare_constant(t: &TransitionMatrix, pi: &ExactDistribution) -> Result<f64> {
    let m = t.dim();
    if m != pi.len() {
        return Err(Error::input(format!(
            "matrix has {m} states, distribution has {}",
            pi.len()
        )));
    }
    if m == 1 {
        return Ok(1.0);
    }
    if m > MAX_DENSE_STATES {
        return Err(Error::Capacity {
            what: "dense spectral gap computation".into(),
            required: m as u128,
            cap: MAX_DENSE_STATES as u64,
        });
    }
    let sqrt_pi: Vec<f64> = pi.log_probs().iter().map(|l| (0.5 * l).exp()).collect();
    let mut a = vec![0.0; m * m];
    for x in 0..m {
        for &(y, p) in t.row(x) {
            a[x * m + y] = sqrt_pi[x] * p / sqrt_pi[y];
        }
    }
    let eig = symmetric_eigen(&SymmetricMatrix::from_row_major(m, a)?)?;
    Ok(1.0 - eig.eigenvalues()[m - 2])
}

/// `min max(P(S,T), P(T,S))` over exchange-adjacent pairs of `members`.
///
/// The result is checked against `1/(2kn)` from below and against
/// `1/(2k(n-k))` within 1e-12.
pub fn c_mu_over_support(members: &[(Subset, f64)], n: usize, k: usize) -> Result<f64> {
    if members.len() == 1 {
        return Ok(SINGLETON_C_MU);
    }
    if k == 0 || k == n {
        return Err(Error::input("a degenerate ground set admits a single state only"));
    }
    let lookup: std::collections::HashMap<&Subset, f64> =
        members.iter().map(|(s, l)| (s, *l)).collect();
    let mut best = f64::INFINITY;
    for (s, ls) in members {
        let outside = s.complement(n);
        for &i in s.as_slice() {
            for &j in &outside {
                if let Some(&lt) = lookup.get(&s.exchange(i, j)) {
                    let pair = exchange_probability(*ls, lt, k, n).max(exchange_probability(lt, *ls, k, n));
                    best = best.min(pair);
                }
            }
        }
    }
    if best == f64::INFINITY {
        return Err(Error::domain(
            "support has no exchange-adjacent pair (not the base set of a matroid)",
        ));
    }
    let lower = 1.0 / (2 * k * n) as f64;
    let expected = 1.0 / (2 * k * (n - k)) as f64;
    if best < lower || (best - expected).abs() > 1e-12 {
        return Err(Error::numerical(format!(
            "C_mu = {best} violates 1/(2kn) = {lower} or differs from 1/(2k(n-k)) = {expected}"
        )));
    }
    Ok(best)
}

/// `C_μ` by enumeration; 1/2 by convention for a single-state support.
pub fn compute_c_mu<D: HomogeneousDistribution + ?Sized>(d: &D, cap: u64) -> Result<f64> {
    let members = support(d, cap)?;
    if members.is_empty() {
        return Err(Error::domain("distribution has empty support"));
    }
    c_mu_over_support(&members, d.ground_size(), d.degree())
}

/// `½ Σ |ν - π|`.
pub fn total_variation(nu: &[f64], pi: &[f64]) -> f64 {
    0.5 * nu.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TvCurve {
    pub points: Vec<(u64, f64)>,
    /// No increase larger than 1e-12 between consecutive points.
    pub monotone: bool,
}

/// Exact `TV(P^t(S0, ·), π)` for `t = 0..=t_max`.
pub fn tv_curve(t: &TransitionMatrix, pi: &ExactDistribution, start: &Subset, t_max: u64) -> Result<TvCurve> {
    let x = pi
        .index_of(start)
        .ok_or_else(|| Error::input(format!("{start} is not a state of the chain")))?;
    let times: Vec<u64> = (0..=t_max).collect();
    let values = tv_at_times(t, pi, x, &times);
    let points: Vec<(u64, f64)> = times.into_iter().zip(values).collect();
    let monotone = points.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    Ok(TvCurve { points, monotone })
}

/// Exact TV distance from stationarity at each of `times` (ascending),
/// starting from state index `x`, by repeated vector-matrix products.
pub fn tv_at_times(t: &TransitionMatrix, pi: &ExactDistribution, x: usize, times: &[u64]) -> Vec<f64> {
    let m = t.dim();
    let mut v = vec![0.0; m];
    v[x] = 1.0;
    let mut scratch = vec![0.0; m];
    let mut now = 0u64;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        debug_assert!(target >= now, "times must be ascending");
        while now < target {
            t.left_multiply(&v, &mut scratch);
            std::mem::swap(&mut v, &mut scratch);
            now += 1;
        }
        out.push(total_variation(&v, pi.probs()));
    }
    out
}

/// True iff the exchange graph on the states is connected.
pub fn exchange_graph_connected(pi: &ExactDistribution, n: usize) -> bool {
    let states = pi.states();
    if states.is_empty() {
        return true;
    }
    let mut seen = HashSet::new();
    let mut queue = vec![0usize];
    seen.insert(0usize);
    while let Some(x) = queue.pop() {
        let s = &states[x];
        let outside = s.complement(n);
        for &i in s.as_slice() {
            for &j in &outside {
                if let Some(y) = pi.index_of(&s.exchange(i, j)) {
                    if seen.insert(y) {
                        queue.push(y);
                    }
                }
            }
        }
    }
    seen.len() == states.len()
}
