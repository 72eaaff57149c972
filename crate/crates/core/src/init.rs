//! Start states for the chain.
//!
//! For a k-DPP the greedy volume heuristic adds, one element at a time, the
//! candidate that maximizes `det L_{S+j}`. Its result is within a factor `k!`
//! of the maximum-volume k-subset, so the start state has normalized mass at
//! least `1 / (k! · |supp|)`. Spanning trees start from a maximum-weight tree
//! and explicit tables from their heaviest entry; both are modes.

use serde::Serialize;

use crate::distributions::{ExplicitTable, HomogeneousDistribution, KDpp, SpanningTrees, Subset, UnionFind};
use crate::error::{Error, Result};
use crate::linalg::{schur_raw, CholeskyFactor, SymmetricMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMethod {
    GreedyDet,
    MaxWeightTree,
    TableArgmax,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InitReport {
    pub subset: Subset,
    pub logmass: f64,
    pub method: InitMethod,
}

/// Greedy selection order and the factor of `L` restricted to that order.
/// `None` if some round has no candidate with positive Schur complement.
pub(crate) fn greedy_order(l: &SymmetricMatrix, k: usize) -> Option<(Vec<usize>, CholeskyFactor)> {
    let n = l.dim();
    let tol = l.psd_tolerance();
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut chosen = vec![false; n];
    let mut factor = CholeskyFactor::empty();
    for _ in 0..k {
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for j in (0..n).filter(|&j| !chosen[j]) {
            let (schur, v) = schur_raw(l, &factor, &order, j);
            // det L_{S+j} = det L_S · schur, so the argmax over j is the
            // argmax of the Schur complement; strict > keeps the smallest index
            if best.as_ref().map_or(true, |(_, b, _)| schur > *b) {
                best = Some((j, schur, v));
            }
        }
        let (j, schur, v) = best?;
        if !(schur > tol) {
            return None;
        }
        factor = factor.bordered(&v, schur);
        order.push(j);
        chosen[j] = true;
    }
    Some((order, factor))
}

/// Greedy maximum-volume start state for a k-DPP.
pub fn greedy_init_kdpp(d: &KDpp) -> Result<InitReport> {
    let (order, _) = greedy_order(d.ensemble(), d.degree()).ok_or_else(|| {
        Error::domain(format!(
            "greedy selection found no positive extension before reaching size {}",
            d.degree()
        ))
    })?;
    let subset = Subset::new(order)?;
    // report the same log-mass the chain will compute for this state
    let logmass = d.log_mass_unchecked(subset.as_slice());
    if logmass == f64::NEG_INFINITY {
        return Err(Error::numerical(format!(
            "greedy start {subset} has positive Schur complements but fails refactorization"
        )));
    }
    Ok(InitReport {
        subset,
        logmass,
        method: InitMethod::GreedyDet,
    })
}

/// Maximum-weight spanning tree (Kruskal, heaviest first, ties by edge index).
pub fn init_spanning_tree(g: &SpanningTrees) -> Result<InitReport> {
    let edges = g.edges();
    let mut by_weight: Vec<usize> = (0..edges.len()).collect();
    by_weight.sort_by(|&a, &b| edges[b].weight.total_cmp(&edges[a].weight));
    let mut uf = UnionFind::new(g.vertex_count());
    let mut tree = Vec::with_capacity(g.degree());
    for e in by_weight {
        if tree.len() == g.degree() {
            break;
        }
        if uf.union(edges[e].u, edges[e].v) {
            tree.push(e);
        }
    }
    if tree.len() != g.degree() {
        return Err(Error::input("graph is disconnected"));
    }
    let subset = Subset::new(tree)?;
    let logmass = g.log_mass_unchecked(subset.as_slice());
    Ok(InitReport {
        subset,
        logmass,
        method: InitMethod::MaxWeightTree,
    })
}

/// Heaviest table entry, ties broken toward the lexicographically smallest set.
pub fn init_table(t: &ExplicitTable) -> Result<InitReport> {
    let mut best: Option<(&Subset, f64)> = None;
    for (s, &w) in t.entries() {
        if best.map_or(true, |(_, b)| w > b) {
            best = Some((s, w));
        }
    }
    let (s, w) = best.ok_or_else(|| Error::input("table has no entries"))?;
    Ok(InitReport {
        subset: s.clone(),
        logmass: w.ln(),
        method: InitMethod::TableArgmax,
    })
}
