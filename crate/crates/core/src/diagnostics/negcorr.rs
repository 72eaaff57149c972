use serde::Serialize;

use super::ExactDistribution;

/// Absolute slack below which `P(i)P(j) - P(i,j)` counts as a violation.
pub const NEGCORR_SLACK: f64 = -1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairSlack {
    pub i: usize,
    pub j: usize,
    /// `P(i ∈ S) P(j ∈ S) - P(i, j ∈ S)`; negative means positive correlation.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegCorrCheck {
    pub holds: bool,
    /// The pair with the smallest slack, absent when `n < 2`.
    pub worst: Option<PairSlack>,
}

/// First and second inclusion marginals of `pi` over a ground set of `n`.
pub fn marginals(pi: &ExactDistribution, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut single = vec![0.0; n];
    let mut pair = vec![0.0; n * n];
    for (s, &p) in pi.states().iter().zip(pi.probs()) {
        let idx = s.as_slice();
        for (a, &i) in idx.iter().enumerate() {
            single[i] += p;
            for &j in &idx[a + 1..] {
                pair[i * n + j] += p;
            }
        }
    }
    (single, pair)
}

/// Pairwise negative correlation `P(i)P(j) >= P(i,j)` for all `i < j`.
pub fn check_negative_correlation(pi: &ExactDistribution, n: usize) -> NegCorrCheck {
    let (single, pair) = marginals(pi, n);
    let mut worst: Option<PairSlack> = None;
    for i in 0..n {
        for j in i + 1..n {
            let slack = single[i] * single[j] - pair[i * n + j];
            if worst.map_or(true, |w| slack < w.slack) {
                worst = Some(PairSlack { i, j, slack });
            }
        }
    }
    NegCorrCheck {
        holds: worst.map_or(true, |w| w.slack >= NEGCORR_SLACK),
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::enumerate;
    use crate::distributions::{ExplicitTable, KDpp, Subset};
    use crate::linalg::SymmetricMatrix;

    #[test]
    fn uniform_is_negatively_correlated() {
        let d = KDpp::new(SymmetricMatrix::identity(5), 2).unwrap();
        let pi = enumerate(&d, 100).unwrap();
        let c = check_negative_correlation(&pi, 5);
        assert!(c.holds);
        // (2/5)^2 - 1/10
        assert!((c.worst.unwrap().slack - 0.06).abs() < 1e-15);
    }

    #[test]
    fn positively_correlated_table_fails() {
        let s = |v: &[usize]| Subset::from_sorted(v.to_vec());
        let t = ExplicitTable::new(4, vec![(s(&[0, 1]), 1.0), (s(&[2, 3]), 1.0)]).unwrap();
        let pi = enumerate(&t, 100).unwrap();
        let c = check_negative_correlation(&pi, 4);
        assert!(!c.holds);
        let w = c.worst.unwrap();
        assert_eq!((w.i, w.j), (0, 1));
        assert!((w.slack + 0.25).abs() < 1e-15);
    }
}
