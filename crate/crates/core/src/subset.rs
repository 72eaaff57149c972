use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite subset of the ground set `{0, .., n-1}`, stored as a strictly
/// increasing list of indices.
///
/// The derived ordering is lexicographic on the sorted index lists, which is
/// the order used for enumeration and for every tie-break in this crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Builds a subset from indices in any order. Duplicates are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate index {} in subset", w[0])));
        }
        Ok(Subset(indices))
    }

    /// Wraps an already strictly increasing list.
    pub fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Subset(indices)
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Largest index plus one, or 0 for the empty set.
    pub fn span(&self) -> usize {
        self.0.last().map_or(0, |&x| x + 1)
    }

    /// `self + j`.
    pub fn with(&self, j: usize) -> Subset {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&j) {
            v.insert(pos, j);
        }
        Subset(v)
    }

    /// `self - i`.
    pub fn without(&self, i: usize) -> Subset {
        Subset(self.0.iter().copied().filter(|&x| x != i).collect())
    }

    /// `self - i + j`, the single-element exchange.
    pub fn exchange(&self, i: usize, j: usize) -> Subset {
        let mut v: Vec<usize> = self.0.iter().copied().filter(|&x| x != i).collect();
        if let Err(pos) = v.binary_search(&j) {
            v.insert(pos, j);
        }
        Subset(v)
    }

    /// Elements of `self` that are not in `other`.
    pub fn difference(&self, other: &Subset) -> Vec<usize> {
        self.0.iter().copied().filter(|&x| !other.contains(x)).collect()
    }

    /// Elements of `{0, .., n-1}` not in `self`, ascending.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n.saturating_sub(self.len()));
        let mut it = self.0.iter().peekable();
        for x in 0..n {
            if it.peek() == Some(&&x) {
                it.next();
            } else {
                out.push(x);
            }
        }
        out
    }

    pub(crate) fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= n => Err(Error::input(format!(
                "index {last} out of range for ground set of size {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, x) in self.0.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl From<Subset> for Vec<usize> {
    fn from(s: Subset) -> Self {
        s.0
    }
}

/// Number of k-subsets of an n-set, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Iterator over all k-subsets of `{0, .., n-1}` in lexicographic order.
pub struct KSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        KSubsets { n, current }
    }
}

impl Iterator for KSubsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.current.as_mut()?;
        let out = Subset(cur.clone());
        let k = cur.len();
        // find the rightmost position that can still be incremented
        let mut pos = k;
        while pos > 0 && cur[pos - 1] == self.n - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            self.current = None;
        } else {
            cur[pos - 1] += 1;
            for q in pos..k {
                cur[q] = cur[q - 1] + 1;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_rejects_duplicates() {
        assert_eq!(Subset::new(vec![3, 1, 2]).unwrap().as_slice(), &[1, 2, 3]);
        assert!(Subset::new(vec![1, 1]).is_err());
    }

    #[test]
    fn exchange_keeps_order() {
        let s = Subset::from_sorted(vec![0, 2, 5]);
        assert_eq!(s.exchange(0, 3).as_slice(), &[2, 3, 5]);
        assert_eq!(s.exchange(5, 1).as_slice(), &[0, 1, 2]);
        assert_eq!(s.complement(6), vec![1, 3, 4]);
    }

    #[test]
    fn k_subsets_counts_and_order() {
        for n in 0..8 {
            for k in 0..=n {
                let all: Vec<_> = KSubsets::new(n, k).collect();
                assert_eq!(all.len() as u128, binomial(n, k));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(KSubsets::new(2, 3).count(), 0);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(200, 100), u128::MAX);
    }
}
