use super::{HomogeneousDistribution, KSubsets, Subset, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// `d` conditioned on element `i` being in (or out of) the sample.
///
/// The remaining ground set `[n] - i` is relabelled densely to
/// `0..n-1`, preserving order. Masses are forwarded to the parent
/// distribution unchanged, so `mass(S) == d.mass(S + i)` (or `d.mass(S)`)
/// bit for bit.
#[derive(Clone, Debug)]
pub struct Conditioned<D> {
    inner: D,
    element: usize,
    contains: bool,
    labels: Vec<usize>,
    k: usize,
}

impl<D: HomogeneousDistribution> Conditioned<D> {
    pub fn inner(&self) -> &D {
        &self.inner
    }

    /// The conditioned element, in the parent's labels.
    pub fn element(&self) -> usize {
        self.element
    }

    pub fn contains(&self) -> bool {
        self.contains
    }

    /// Parent label of each new index.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn original_label(&self, x: usize) -> usize {
        self.labels[x]
    }

    /// Maps a subset of the conditioned ground set to the parent's labels,
    /// adding the conditioned element when it is required to be present.
    pub fn to_original(&self, s: &Subset) -> Subset {
        let mut v: Vec<usize> = s.iter().map(|x| self.labels[x]).collect();
        if self.contains {
            let pos = v.partition_point(|&x| x < self.element);
            v.insert(pos, self.element);
        }
        Subset::from_sorted(v)
    }
}

impl<D> Conditioned<D> {
    /// Original labels of a conditioned index set, with the conditioned
    /// element inserted when it is forced in.
    fn lift(&self, indices: &[usize]) -> Vec<usize> {
        let mut buf = Vec::with_capacity(indices.len() + 1);
        let mut placed = !self.contains;
        for &x in indices {
            let orig = self.labels[x];
            if !placed && orig > self.element {
                buf.push(self.element);
                placed = true;
            }
            buf.push(orig);
        }
        if !placed {
            buf.push(self.element);
        }
        buf
    }
}

impl<D: HomogeneousDistribution> HomogeneousDistribution for Conditioned<D> {
    fn ground_size(&self) -> usize {
        self.labels.len()
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn log_mass_unchecked(&self, indices: &[usize]) -> f64 {
        self.inner.log_mass_unchecked(&self.lift(indices))
    }

    fn mass_unchecked(&self, indices: &[usize]) -> f64 {
        self.inner.mass_unchecked(&self.lift(indices))
    }
}

/// Conditions on `i ∈ S` (`contains = true`) or `i ∉ S`, checking that the
/// result has nonempty support by scanning at most
/// [`DEFAULT_ENUMERATION_CAP`] candidate sets.
pub fn condition<D: HomogeneousDistribution>(d: D, i: usize, contains: bool) -> Result<Conditioned<D>> {
    condition_with_cap(d, i, contains, DEFAULT_ENUMERATION_CAP)
}

pub fn condition_with_cap<D: HomogeneousDistribution>(
    d: D,
    i: usize,
    contains: bool,
    cap: u64,
) -> Result<Conditioned<D>> {
    let n = d.ground_size();
    let k = d.degree();
    if i >= n {
        return Err(Error::input(format!("element {i} out of range for ground set of size {n}")));
    }
    let new_k = if contains {
        if k == 0 {
            return Err(Error::domain(format!("cannot require {i} in a 0-homogeneous distribution")));
        }
        k - 1
    } else {
        if k == n {
            return Err(Error::domain(format!(
                "cannot exclude {i}: every support set is the whole ground set"
            )));
        }
        k
    };
    let labels: Vec<usize> = (0..n).filter(|&x| x != i).collect();
    let cond = Conditioned {
        inner: d,
        element: i,
        contains,
        labels,
        k: new_k,
    };

    let mut visited: u64 = 0;
    for s in KSubsets::new(n - 1, new_k) {
        if cond.log_mass_unchecked(s.as_slice()) > f64::NEG_INFINITY {
            return Ok(cond);
        }
        visited += 1;
        if visited >= cap {
            return Err(Error::Capacity {
                what: "searching for a support member of the conditioned distribution".into(),
                required: cond.subset_count(),
                cap,
            });
        }
    }
    Err(Error::domain(format!(
        "conditioning on element {i} {} leaves an empty support",
        if contains { "present" } else { "absent" }
    )))
}
