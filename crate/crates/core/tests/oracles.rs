//! Cross-checks of the samplers, initializers and diagnostics against
//! brute-force enumeration.

mod common;

use std::collections::HashMap;

use srmix::chain::{chain_rng, sample, sample_many, ChainConfig};
use srmix::diagnostics::{
    build_transition_matrix, check_negative_correlation, compute_c_mu, diagnose, enumerate, exchange_graph_connected,
    poincare_constant, tv_curve, SpectralKDppSampler,
};
use srmix::distributions::{
    check_exchange_property, ExplicitTable, HomogeneousDistribution, KDpp, KSubsets, Subset,
};
use srmix::init::{greedy_init_kdpp, init_spanning_tree};
use srmix::linalg::SymmetricMatrix;

use common::{brute_force_max_logmass, multinomial_allowance, random_graph, random_kdpp, random_psd, rng};

fn frequencies(draws: impl IntoIterator<Item = Subset>) -> (HashMap<Subset, usize>, usize) {
    let mut counts = HashMap::new();
    let mut total = 0;
    for s in draws {
        *counts.entry(s).or_default() += 1;
        total += 1;
    }
    (counts, total)
}

#[test]
fn chain_on_identity_is_uniform() {
    let d = KDpp::new(SymmetricMatrix::identity(6), 2).unwrap();
    let start = greedy_init_kdpp(&d).unwrap().subset;
    let draws = 100_000;
    let batch = sample_many(&d, &start, &ChainConfig::new(0.05, 3), draws, None).unwrap();
    let (counts, total) = frequencies(batch.outcomes.into_iter().map(|o| o.subset));
    let tv: f64 = 0.5
        * KSubsets::new(6, 2)
            .map(|s| (counts.get(&s).copied().unwrap_or(0) as f64 / total as f64 - 1.0 / 15.0).abs())
            .sum::<f64>();
    assert!(tv <= 0.05 + multinomial_allowance(15, draws), "tv = {tv}");
}

#[test]
fn steps_override_zero_returns_start() {
    let d = KDpp::new(random_psd(&mut rng(4), 5, 5), 2).unwrap();
    let start = Subset::new(vec![1, 3]).unwrap();
    let out = sample(&d, &start, &ChainConfig::new(0.1, 0).with_steps(0)).unwrap();
    assert_eq!((out.subset, out.steps, out.accepts), (start, 0, 0));
}

#[test]
fn greedy_within_factorial_of_brute_force() {
    let mut r = rng(12);
    for _ in 0..40 {
        let d = KDpp::new(random_psd(&mut r, 8, 8), 3).unwrap();
        let g = greedy_init_kdpp(&d).unwrap();
        let max = brute_force_max_logmass(&d);
        assert!(g.logmass >= max - 6f64.ln() + (1.0 - 1e-9f64).ln());
        let pi = enumerate(&d, 1000).unwrap();
        // normalized start mass is at least n^{-k}
        assert!(pi.prob(&g.subset) >= 8f64.powi(-3));
    }
}

#[test]
fn max_weight_tree_is_a_mode() {
    let mut r = rng(13);
    for v in 3..=7 {
        for _ in 0..5 {
            let g = random_graph(&mut r, v);
            let init = init_spanning_tree(&g).unwrap();
            let max = brute_force_max_logmass(&g);
            assert!((init.logmass - max).abs() <= 1e-12 * (1.0 + max.abs()));
        }
    }
}

#[test]
fn spectral_sampler_matches_enumeration() {
    let d = KDpp::new(random_psd(&mut rng(14), 6, 6), 3).unwrap();
    let pi = enumerate(&d, 1000).unwrap();
    let sampler = SpectralKDppSampler::new(&d).unwrap();
    let mut r = chain_rng(15, 0);
    let draws = 60_000;
    let (counts, total) = frequencies((0..draws).map(|_| sampler.sample(&mut r)));
    let tv: f64 = 0.5
        * pi.states()
            .iter()
            .zip(pi.probs())
            .map(|(s, p)| (counts.get(s).copied().unwrap_or(0) as f64 / total as f64 - p).abs())
            .sum::<f64>();
    assert!(tv <= multinomial_allowance(pi.len(), draws), "tv = {tv}");
}

#[test]
fn random_kdpp_n8_k3_passes_every_check() {
    let d = KDpp::new(random_psd(&mut rng(16), 8, 8), 3).unwrap();
    let start = greedy_init_kdpp(&d).unwrap().subset;
    let r = diagnose(&d, &start, 0.01, 1000).unwrap();
    assert!(r.all_checks_pass(), "{r:?}");
    assert!(r.tv_monotone);
    assert_eq!(r.c_mu, Some(1.0 / 30.0));
}

#[test]
fn tv_curve_is_monotone_and_converges() {
    let mut r = rng(17);
    for _ in 0..10 {
        let d = random_kdpp(&mut r, 6, 2);
        let pi = enumerate(&d, 1000).unwrap();
        let t = build_transition_matrix(&d, &pi).unwrap();
        assert!(t.invariants(&pi).holds());
        assert!(exchange_graph_connected(&pi, 6));
        let lambda = poincare_constant(&t, &pi).unwrap();
        assert!(lambda >= compute_c_mu(&d, 1000).unwrap() - 1e-9);
        if pi.len() == 1 {
            continue;
        }
        let horizon = 10 * ((1.0 / lambda) * (1.0 / pi.min_prob()).ln()).ceil() as u64;
        for s0 in pi.states() {
            let curve = tv_curve(&t, &pi, s0, horizon).unwrap();
            assert!(curve.monotone);
            assert!((curve.points[0].1 - (1.0 - pi.prob(s0))).abs() < 1e-12);
            assert!(curve.points.last().unwrap().1 < 1e-10);
        }
    }
}

/// Searches small weighted tables over 4 elements for one with a
/// positively correlated pair; such tables cannot be strongly Rayleigh, and
/// the exchange check or the correlation check must refute them.
#[test]
fn adversarial_tables_are_refuted() {
    let mut r = rng(18);
    let all: Vec<Subset> = KSubsets::new(4, 2).collect();
    let mut found = 0;
    for mask in 1u32..(1 << all.len()) {
        use rand::Rng;
        let entries: Vec<(Subset, f64)> = all
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, s)| (s.clone(), r.random_range(0.1..5.0)))
            .collect();
        let t = ExplicitTable::new(4, entries).unwrap();
        let pi = enumerate(&t, 100).unwrap();
        let corr = check_negative_correlation(&pi, 4);
        if !corr.holds {
            found += 1;
        }
    }
    assert!(found > 0);

    // {0,1} and {2,3} heavy, {0,2} light: 0 and 1 co-occur far more often
    // than independence predicts
    let s = |v: &[usize]| Subset::new(v.to_vec()).unwrap();
    let t = ExplicitTable::new(4, vec![(s(&[0, 1]), 1.0), (s(&[2, 3]), 1.0), (s(&[0, 2]), 0.1)]).unwrap();
    let pi = enumerate(&t, 100).unwrap();
    let corr = check_negative_correlation(&pi, 4);
    assert!(!corr.holds);
    assert!(corr.worst.unwrap().slack < -0.1);
    assert!(!check_exchange_property(&t, 100).unwrap().holds);
}

#[test]
fn conditioned_chain_is_still_reversible() {
    let d = random_kdpp(&mut rng(19), 6, 3);
    let c = srmix::distributions::condition(&d, 2, true).unwrap();
    let pi = enumerate(&c, 1000).unwrap();
    let t = build_transition_matrix(&c, &pi).unwrap();
    assert!(t.invariants(&pi).holds());
    assert!(poincare_constant(&t, &pi).unwrap() >= compute_c_mu(&c, 1000).unwrap() - 1e-9);
    assert_eq!(c.degree(), 2);
}
