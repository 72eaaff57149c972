use serde::Serialize;

use super::{
    build_transition_matrix, c_mu_over_support, check_negative_correlation, enumerate, poincare_constant, tv_curve,
    PairSlack,
};
use crate::chain::tau_from;
use crate::distributions::{check_exchange_property, ExchangeViolation, HomogeneousDistribution, Subset};
use crate::error::{Error, Result};

/// Everything the exact oracles can say about one enumerable instance and
/// one start state.
///
/// `c_mu`, `tau_bound` and `tv_at_tau` are absent when the support has
/// several states but no exchange-adjacent pair, which already refutes the
/// matroid property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub k: usize,
    pub support_size: usize,
    pub epsilon: f64,
    pub start: Subset,
    pub pi_start: f64,
    pub lambda: f64,
    pub c_mu: Option<f64>,
    pub c_mu_lower_bound: f64,
    pub tau_bound: Option<u64>,
    pub tv_curve: Vec<(u64, f64)>,
    pub tv_at_tau: Option<f64>,
    pub tv_monotone: bool,
    pub lambda_ge_c_mu: bool,
    pub negative_correlation_ok: bool,
    pub negative_correlation_worst: Option<PairSlack>,
    pub exchange_ok: bool,
    pub exchange_violation: Option<ExchangeViolation>,
    /// Conventions applied to degenerate instances, in words.
    pub conventions: Vec<String>,
}

impl DiagnosticsReport {
    /// `λ >= C_μ`, `TV(τ) <= ε`, negative correlation and the exchange
    /// property all hold.
    pub fn all_checks_pass(&self) -> bool {
        self.lambda_ge_c_mu
            && self.tv_at_tau.is_some_and(|tv| tv <= self.epsilon)
            && self.negative_correlation_ok
            && self.exchange_ok
    }
}

/// Runs every exact diagnostic on `d` from `start`.
///
/// The TV curve covers `t = 0..=tau_bound`, or `t = 0..=1` when no bound
/// exists.
pub fn diagnose<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    start: &Subset,
    epsilon: f64,
    cap: u64,
) -> Result<DiagnosticsReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::input(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let (n, k) = (d.ground_size(), d.degree());
    let pi = enumerate(d, cap)?;
    let x = pi
        .index_of(start)
        .ok_or_else(|| Error::input(format!("start state {start} is outside the support")))?;
    let exchange = check_exchange_property(d, cap)?;
    let negcorr = check_negative_correlation(&pi, n);
    let matrix = build_transition_matrix(d, &pi)?;
    let lambda = poincare_constant(&matrix, &pi)?;

    let mut conventions = Vec::new();
    let c_mu = if pi.len() == 1 {
        conventions.push("single-state support: lambda = 1, c_mu = 1/2, tau = 0".to_string());
        Some(super::SINGLETON_C_MU)
    } else {
        let members: Vec<(Subset, f64)> = pi
            .states()
            .iter()
            .cloned()
            .zip(pi.log_probs().iter().copied())
            .collect();
        match c_mu_over_support(&members, n, k) {
            Ok(c) => Some(c),
            Err(Error::Domain(_)) => None,
            Err(e) => return Err(e),
        }
    };
    let log_pi_start = pi.log_probs()[x];
    let tau_bound = c_mu.map(|c| if pi.len() == 1 { 0 } else { tau_from(c, log_pi_start, epsilon) });
    let curve = tv_curve(&matrix, &pi, start, tau_bound.unwrap_or(1))?;
    let tv_at_tau = tau_bound.map(|t| curve.points[t as usize].1);

    Ok(DiagnosticsReport {
        n,
        k,
        support_size: pi.len(),
        epsilon,
        start: start.clone(),
        pi_start: pi.probs()[x],
        lambda,
        c_mu,
        c_mu_lower_bound: if k == 0 { 0.5 } else { 1.0 / (2 * k * n) as f64 },
        tau_bound,
        tv_curve: curve.points,
        tv_at_tau,
        tv_monotone: curve.monotone,
        lambda_ge_c_mu: c_mu.is_some_and(|c| lambda >= c - 1e-9),
        negative_correlation_ok: negcorr.holds,
        negative_correlation_worst: negcorr.worst,
        exchange_ok: exchange.holds,
        exchange_violation: exchange.violation,
        conventions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{ExplicitTable, KDpp};
    use crate::linalg::SymmetricMatrix;

    fn s(v: &[usize]) -> Subset {
        Subset::from_sorted(v.to_vec())
    }

    #[test]
    fn uniform_four_two() {
        let d = KDpp::new(SymmetricMatrix::identity(4), 2).unwrap();
        let r = diagnose(&d, &s(&[0, 1]), 0.01, 1000).unwrap();
        assert_eq!(r.c_mu, Some(0.125));
        assert_eq!(r.tau_bound, Some(52));
        assert!(r.lambda >= 0.125);
        assert!(r.all_checks_pass());
        assert_eq!(r.tv_curve.len(), 53);
    }

    #[test]
    fn disjoint_table_fails() {
        let t = ExplicitTable::new(4, vec![(s(&[0, 1]), 1.0), (s(&[2, 3]), 1.0)]).unwrap();
        let r = diagnose(&t, &s(&[0, 1]), 0.1, 1000).unwrap();
        assert!(!r.exchange_ok);
        assert_eq!(r.c_mu, None);
        assert!(r.lambda.abs() < 1e-12);
        assert!(!r.all_checks_pass());
    }

    #[test]
    fn single_state_conventions() {
        let d = KDpp::new(SymmetricMatrix::identity(3), 3).unwrap();
        let r = diagnose(&d, &s(&[0, 1, 2]), 0.1, 1000).unwrap();
        assert_eq!((r.lambda, r.c_mu, r.tau_bound), (1.0, Some(0.5), Some(0)));
        assert_eq!(r.conventions.len(), 1);
        assert!(r.all_checks_pass());
    }
}
