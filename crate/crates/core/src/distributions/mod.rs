//! Homogeneous distributions over k-subsets, exposed through an
//! unnormalized mass oracle.
//!
//! Three backends ship with the crate: [`KDpp`] (mass `det L_S`),
//! [`ExplicitTable`] (listed weights) and [`SpanningTrees`] (product of edge
//! weights over spanning trees of a graph). [`condition`] and [`truncate`]
//! derive new distributions from existing ones.

mod condition;
mod exchange;
mod graph;
mod kdpp;
mod table;

pub use condition::{condition, Conditioned};
pub use exchange::{check_exchange_property, ExchangeCheck, ExchangeViolation};
pub use graph::{SpanningTrees, WeightedEdge};
pub(crate) use graph::UnionFind;
pub use kdpp::KDpp;
pub use table::{truncate, ExplicitTable};

pub use crate::subset::{binomial, KSubsets, Subset};

use crate::error::{Error, Result};

/// Default bound on the number of k-subsets any enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

/// A k-homogeneous measure on subsets of `{0, .., n-1}`, known up to a
/// normalizing constant.
///
/// Implementations provide `log_mass_unchecked`, which receives a strictly
/// increasing index slice of length `degree()` and returns `ln w(S)`, with
/// `-inf` for sets outside the support.
pub trait HomogeneousDistribution: Sync {
    fn ground_size(&self) -> usize;

    fn degree(&self) -> usize;

    fn log_mass_unchecked(&self, indices: &[usize]) -> f64;

    /// `w(S)` for the same input contract as `log_mass_unchecked`.
    /// Backends that store weights directly override this to skip the
    /// round trip through `ln`.
    fn mass_unchecked(&self, indices: &[usize]) -> f64 {
        self.log_mass_unchecked(indices).exp()
    }

    /// `ln w(S)`; validates cardinality and index range.
    fn log_mass(&self, s: &Subset) -> Result<f64> {
        if s.len() != self.degree() {
            return Err(Error::input(format!(
                "subset {s} has {} elements, distribution is {}-homogeneous",
                s.len(),
                self.degree()
            )));
        }
        s.check_bounds(self.ground_size())?;
        Ok(self.log_mass_unchecked(s.as_slice()))
    }

    /// Unnormalized mass `w(S) >= 0`.
    fn mass(&self, s: &Subset) -> Result<f64> {
        self.log_mass(s)?;
        Ok(self.mass_unchecked(s.as_slice()))
    }

    fn in_support(&self, s: &Subset) -> Result<bool> {
        self.log_mass(s).map(|l| l > f64::NEG_INFINITY)
    }

    /// Number of k-subsets an exhaustive scan would visit.
    fn subset_count(&self) -> u128 {
        binomial(self.ground_size(), self.degree())
    }
}

impl<T: HomogeneousDistribution + ?Sized> HomogeneousDistribution for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn log_mass_unchecked(&self, indices: &[usize]) -> f64 {
        (**self).log_mass_unchecked(indices)
    }
    fn mass_unchecked(&self, indices: &[usize]) -> f64 {
        (**self).mass_unchecked(indices)
    }
}

impl<T: HomogeneousDistribution + ?Sized + Send> HomogeneousDistribution for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn log_mass_unchecked(&self, indices: &[usize]) -> f64 {
        (**self).log_mass_unchecked(indices)
    }
    fn mass_unchecked(&self, indices: &[usize]) -> f64 {
        (**self).mass_unchecked(indices)
    }
}

/// Free-function form of [`HomogeneousDistribution::mass`].
pub fn mass<D: HomogeneousDistribution + ?Sized>(d: &D, s: &Subset) -> Result<f64> {
    d.mass(s)
}

/// Errors with [`Error::Capacity`] when an exhaustive scan of `d` would
/// exceed `cap` subsets.
pub fn ensure_enumerable<D: HomogeneousDistribution + ?Sized>(d: &D, cap: u64) -> Result<()> {
    let required = d.subset_count();
    if required > cap as u128 {
        return Err(Error::Capacity {
            what: format!(
                "enumerating all {}-subsets of a ground set of size {}",
                d.degree(),
                d.ground_size()
            ),
            required,
            cap,
        });
    }
    Ok(())
}

/// Support members with their log-masses, in lexicographic order.
pub fn support<D: HomogeneousDistribution + ?Sized>(d: &D, cap: u64) -> Result<Vec<(Subset, f64)>> {
    ensure_enumerable(d, cap)?;
    Ok(KSubsets::new(d.ground_size(), d.degree())
        .filter_map(|s| {
            let l = d.log_mass_unchecked(s.as_slice());
            (l > f64::NEG_INFINITY).then_some((s, l))
        })
        .collect())
}
