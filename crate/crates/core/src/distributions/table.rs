use std::collections::BTreeMap;

use super::{HomogeneousDistribution, Subset};
use crate::error::{Error, Result};

/// Explicitly listed k-subsets with positive weights. Unlisted subsets have
/// mass zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitTable {
    n: usize,
    k: usize,
    entries: BTreeMap<Subset, f64>,
}

impl ExplicitTable {
    /// `n` is the ground-set size; every listed set must fit inside it.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (Subset, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut k = None;
        for (s, w) in entries {
            s.check_bounds(n)?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::input(format!("weight of {s} must be positive and finite, got {w}")));
            }
            match k {
                None => k = Some(s.len()),
                Some(k) if k != s.len() => {
                    return Err(Error::input(format!(
                        "table mixes sizes: {s} has {} elements, expected {k}",
                        s.len()
                    )))
                }
                _ => {}
            }
            if map.insert(s.clone(), w).is_some() {
                return Err(Error::input(format!("subset {s} listed twice")));
            }
        }
        let k = k.ok_or_else(|| Error::input("table has no entries"))?;
        Ok(ExplicitTable { n, k, entries: map })
    }

    /// Ground set inferred as `0..=max index`.
    pub fn from_entries(entries: impl IntoIterator<Item = (Subset, f64)>) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        let n = entries.iter().map(|(s, _)| s.span()).max().unwrap_or(0);
        Self::new(n, entries)
    }

    pub fn entries(&self) -> &BTreeMap<Subset, f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl HomogeneousDistribution for ExplicitTable {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn log_mass_unchecked(&self, indices: &[usize]) -> f64 {
        // BTreeMap<Subset, _> lookups need an owned key
        let key = Subset::from_sorted(indices.to_vec());
        self.entries.get(&key).map_or(f64::NEG_INFINITY, |w| w.ln())
    }

    fn mass_unchecked(&self, indices: &[usize]) -> f64 {
        let key = Subset::from_sorted(indices.to_vec());
        self.entries.get(&key).copied().unwrap_or(0.0)
    }
}

/// Restricts a weight map over subsets of mixed sizes to its size-k part.
///
/// Weights stay unnormalized. The ground set is `0..=max index` over all
/// keys of `weights`, not only the retained ones.
pub fn truncate(weights: &BTreeMap<Subset, f64>, k: usize) -> Result<ExplicitTable> {
    let n = weights.keys().map(Subset::span).max().unwrap_or(0);
    let kept: Vec<_> = weights
        .iter()
        .filter(|(s, &w)| s.len() == k && w > 0.0)
        .map(|(s, &w)| (s.clone(), w))
        .collect();
    if kept.is_empty() {
        return Err(Error::domain(format!("no subset of size {k} has positive weight")));
    }
    ExplicitTable::new(n, kept)
}
