//! Random instance families shared by the integration and acceptance tests.
//!
//! Every family is strongly Rayleigh, so the exact gap and mixing checks apply:
//! k-DPPs from random Gram matrices, weighted spanning trees of small
//! connected graphs, and weighted partition matroids (a product of weighted
//! uniform matroids over the blocks of a partition).

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use srmix::chain::chain_rng;
use srmix::distributions::{
    support, ExplicitTable, HomogeneousDistribution, KDpp, KSubsets, SpanningTrees, Subset, WeightedEdge,
};
use srmix::linalg::SymmetricMatrix;

/// Ceiling on enumerated states for graph instances, keeping dense
/// eigensolves on the transition matrix cheap.
pub const MAX_TREE_STATES: usize = 300;

pub enum Instance {
    Kdpp(KDpp),
    Trees(SpanningTrees),
    Table(ExplicitTable),
}

impl Instance {
    pub fn dist(&self) -> &dyn HomogeneousDistribution {
        match self {
            Instance::Kdpp(d) => d,
            Instance::Trees(g) => g,
            Instance::Table(t) => t,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Instance::Kdpp(_) => "kdpp",
            Instance::Trees(_) => "spanning-tree",
            Instance::Table(_) => "partition-table",
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    chain_rng(seed, 0xacce)
}

/// `L = X Xᵀ` for an `n × r` factor `X`.
pub fn gram(x: &[Vec<f64>]) -> SymmetricMatrix {
    let n = x.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum();
        }
    }
    SymmetricMatrix::from_row_major(n, data).unwrap()
}

/// Random Gram ensemble whose `n × r` factor has entries uniform in [-1, 1).
pub fn random_psd<R: Rng>(rng: &mut R, n: usize, r: usize) -> SymmetricMatrix {
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..r).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    gram(&x)
}

/// k-DPP from a random factor. One in three draws uses an integer factor
/// with entries in {-1, 0, 1}, whose exact linear dependencies give supports
/// smaller than all k-subsets.
pub fn random_kdpp<R: Rng>(rng: &mut R, n: usize, k: usize) -> KDpp {
    loop {
        let r = rng.random_range(k..=n + 1);
        let x: Vec<Vec<f64>> = if rng.random_range(0..3) == 0 {
            (0..n)
                .map(|_| (0..r).map(|_| rng.random_range(-1i32..=1) as f64).collect())
                .collect()
        } else {
            (0..n)
                .map(|_| (0..r).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect()
        };
        if let Ok(d) = KDpp::new(gram(&x), k) {
            return d;
        }
    }
}

/// Random connected simple graph on `v` vertices: a random spanning
/// tree plus extra edges, resampled until it has at most
/// [`MAX_TREE_STATES`] spanning trees.
pub fn random_graph<R: Rng>(rng: &mut R, v: usize) -> SpanningTrees {
    loop {
        let mut order: Vec<usize> = (0..v).collect();
        order.shuffle(rng);
        let mut pairs: Vec<(usize, usize)> = (1..v)
            .map(|a| {
                let b = order[rng.random_range(0..a)];
                let a = order[a];
                (a.min(b), a.max(b))
            })
            .collect();
        let extra = rng.random_range(0..=v);
        for _ in 0..extra {
            let a = rng.random_range(0..v);
            let b = rng.random_range(0..v);
            let e = (a.min(b), a.max(b));
            if a != b && !pairs.contains(&e) {
                pairs.push(e);
            }
        }
        pairs.shuffle(rng);
        let edges = pairs
            .into_iter()
            .map(|(u, w)| WeightedEdge {
                u,
                v: w,
                weight: rng.random_range(0.2..3.0),
            })
            .collect();
        let g = SpanningTrees::new(v, edges).unwrap();
        if support(&g, 1 << 20).unwrap().len() <= MAX_TREE_STATES {
            return g;
        }
    }
}

/// Weighted partition matroid: the ground set is split into blocks with
/// capacities, a base takes exactly `cap_b` elements from block `b`, and its
/// weight is the product of per-element weights.
pub fn random_partition_table<R: Rng>(rng: &mut R, n: usize) -> ExplicitTable {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let blocks_count = rng.random_range(1..=n.min(3));
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(blocks_count - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(n);
    let blocks: Vec<Vec<usize>> = bounds.windows(2).map(|w| labels[w[0]..w[1]].to_vec()).collect();
    let caps: Vec<usize> = blocks.iter().map(|b| rng.random_range(0..=b.len())).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..3.0)).collect();

    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    for (block, &cap) in blocks.iter().zip(&caps) {
        let mut next = Vec::new();
        for partial in &sets {
            for pick in KSubsets::new(block.len(), cap) {
                let mut s = partial.clone();
                s.extend(pick.iter().map(|p| block[p]));
                next.push(s);
            }
        }
        sets = next;
    }
    let entries = sets.into_iter().map(|s| {
        let w = s.iter().map(|&e| weights[e]).product();
        (Subset::new(s).unwrap(), w)
    });
    ExplicitTable::new(n, entries).unwrap()
}

/// The instance families of the exact checks: 130 k-DPPs, 50 graphs and
/// 50 partition tables.
pub fn sr_instances(seed: u64) -> Vec<Instance> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for _ in 0..130 {
        let n = rng.random_range(3..=10);
        let k = rng.random_range(1..n);
        out.push(Instance::Kdpp(random_kdpp(&mut rng, n, k)));
    }
    for _ in 0..50 {
        let v = rng.random_range(3..=7);
        out.push(Instance::Trees(random_graph(&mut rng, v)));
    }
    for _ in 0..50 {
        let n = rng.random_range(2..=9);
        out.push(Instance::Table(random_partition_table(&mut rng, n)));
    }
    out
}

/// Brute-force maximum of `ln w(S)` over all k-subsets.
pub fn brute_force_max_logmass(d: &dyn HomogeneousDistribution) -> f64 {
    KSubsets::new(d.ground_size(), d.degree())
        .map(|s| d.log_mass_unchecked(s.as_slice()))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `3 · sqrt(m / (2N))`: the multinomial allowance for the empirical TV of
/// `N` draws over `m` outcomes.
pub fn multinomial_allowance(m: usize, draws: usize) -> f64 {
    3.0 * (m as f64 / (2.0 * draws as f64)).sqrt()
}
