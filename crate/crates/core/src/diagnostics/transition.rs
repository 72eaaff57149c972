use super::ExactDistribution;
use crate::chain::exchange_probability;
use crate::distributions::{HomogeneousDistribution, Subset};
use crate::error::{Error, Result};

/// Row-stochastic transition matrix over the states of an
/// [`ExactDistribution`], stored as sorted sparse rows (diagonal included).
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    states: Vec<Subset>,
    rows: Vec<Vec<(usize, f64)>>,
}

/// Worst-case deviations from the structural invariants of a lazy
/// reversible chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixInvariants {
    pub max_row_sum_error: f64,
    pub min_diagonal: f64,
    pub max_detailed_balance_error: f64,
}

impl MatrixInvariants {
    /// Rows sum to 1 within 1e-12, every diagonal is at least 1/2, and
    /// detailed balance holds to 1e-12 relative.
    pub fn holds(&self) -> bool {
        self.max_row_sum_error <= 1e-12
            && self.min_diagonal >= 0.5 - 1e-15
            && self.max_detailed_balance_error <= 1e-12
    }
}

impl TransitionMatrix {
    /// From a dense row-major matrix; rows must sum to 1 within 1e-12.
    pub fn from_dense(states: Vec<Subset>, dense: &[f64]) -> Result<Self> {
        let m = states.len();
        if dense.len() != m * m {
            return Err(Error::input(format!("expected {} entries, got {}", m * m, dense.len())));
        }
        let rows: Vec<Vec<(usize, f64)>> = (0..m)
            .map(|x| {
                (0..m)
                    .filter_map(|y| {
                        let p = dense[x * m + y];
                        (p != 0.0).then_some((y, p))
                    })
                    .collect()
            })
            .collect();
        for (x, row) in rows.iter().enumerate() {
            if row.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) {
                return Err(Error::input(format!("row {x} has an entry outside [0, 1]")));
            }
            let total: f64 = row.iter().map(|e| e.1).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::input(format!("row {x} sums to {total}")));
            }
        }
        Ok(TransitionMatrix { states, rows })
    }

    pub fn states(&self) -> &[Subset] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        let row = &self.rows[x];
        row.binary_search_by_key(&y, |e| e.0).map_or(0.0, |pos| row[pos].1)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let m = self.dim();
        let mut out = vec![0.0; m * m];
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, p) in row {
                out[x * m + y] = p;
            }
        }
        out
    }

    /// `v ↦ v P` for a row vector `v`.
    pub fn left_multiply(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (x, row) in self.rows.iter().enumerate() {
            let vx = v[x];
            if vx == 0.0 {
                continue;
            }
            for &(y, p) in row {
                out[y] += vx * p;
            }
        }
    }

    pub fn invariants(&self, pi: &ExactDistribution) -> MatrixInvariants {
        let probs = pi.probs();
        let mut max_row_sum_error: f64 = 0.0;
        let mut min_diagonal = f64::INFINITY;
        let mut max_db: f64 = 0.0;
        for (x, row) in self.rows.iter().enumerate() {
            let total: f64 = row.iter().map(|e| e.1).sum();
            max_row_sum_error = max_row_sum_error.max((total - 1.0).abs());
            min_diagonal = min_diagonal.min(self.get(x, x));
            for &(y, p) in row {
                if y == x {
                    continue;
                }
                let forward = probs[x] * p;
                let backward = probs[y] * self.get(y, x);
                let scale = forward.abs().max(backward.abs());
                if scale > 0.0 {
                    max_db = max_db.max((forward - backward).abs() / scale);
                }
            }
        }
        MatrixInvariants {
            max_row_sum_error,
            min_diagonal,
            max_detailed_balance_error: max_db,
        }
    }
}

/// Explicit kernel of the lazy exchange chain on the support of `pi`.
///
/// Off-diagonal entries are `½ min(1, π(T)/π(S)) / (k (n-k))` for
/// exchange-adjacent support pairs; the diagonal absorbs the rest.
pub fn build_transition_matrix<D: HomogeneousDistribution + ?Sized>(
    d: &D,
    pi: &ExactDistribution,
) -> Result<TransitionMatrix> {
    let (n, k) = (d.ground_size(), d.degree());
    let states = pi.states().to_vec();
    let logs = pi.log_probs();
    let mut rows = Vec::with_capacity(states.len());
    for (x, s) in states.iter().enumerate() {
        if s.len() != k {
            return Err(Error::input(format!("state {s} does not have {k} elements")));
        }
        let mut row = Vec::new();
        if k > 0 && k < n {
            let outside = s.complement(n);
            for &i in s.as_slice() {
                for &j in &outside {
                    if let Some(y) = pi.index_of(&s.exchange(i, j)) {
                        row.push((y, exchange_probability(logs[x], logs[y], k, n)));
                    }
                }
            }
        }
        let off: f64 = row.iter().map(|e| e.1).sum();
        row.push((x, 1.0 - off));
        row.sort_by_key(|e| e.0);
        rows.push(row);
    }
    Ok(TransitionMatrix { states, rows })
}
