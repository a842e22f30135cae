mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::set;
use oskip::graphs::{path, star};
use oskip::hardcore::{
    active_partition, dg_apply, dg_bound_apply, draw_conditional, gibbs_apply, gibbs_bound_apply, ActivePartition,
};
use oskip::rng::{replication, seeded};
use oskip::verify::{empirical_distribution, stationary_distribution, tv_distance, tv_threshold, DistributionTable};
use oskip::{
    Fugacities, GibbsChain, Graph, HardcoreBound, HardcoreLetter::*, HardcoreSampler, MarkovAutomaton, SamplerKind,
    SwapCoin::*,
};
use rand::Rng;

fn bound(g: &Graph, b: &[usize], d: &[usize]) -> HardcoreBound {
    let n = g.vertex_count();
    HardcoreBound::from_sets(g, set(n, b), set(n, d)).unwrap()
}

/// Erdős–Rényi graph, for randomized checks.
fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

#[test]
fn gibbs_moves() {
    let edge = path(2).unwrap();
    assert_eq!(gibbs_apply(&edge, &set(2, &[0]), Add(1)), set(2, &[0]));
    assert_eq!(gibbs_apply(&edge, &set(2, &[]), Add(0)), set(2, &[0]));
    assert_eq!(gibbs_apply(&edge, &set(2, &[0]), Sharp), set(2, &[0]));
    assert_eq!(gibbs_apply(&edge, &set(2, &[0]), Remove(0)), set(2, &[]));
}

#[test]
fn gibbs_bound_moves() {
    let g = star(2).unwrap();
    let top = HardcoreBound::top(&g);
    assert_eq!(gibbs_bound_apply(&g, &top, Remove(0)), bound(&g, &[], &[1, 2]));
    assert_eq!(
        gibbs_bound_apply(&g, &bound(&g, &[], &[1, 2]), Add(1)),
        bound(&g, &[1], &[2])
    );
    assert_eq!(gibbs_bound_apply(&g, &top, Add(1)), top);
}

#[test]
fn dg_moves() {
    let edge = path(2).unwrap();
    assert_eq!(dg_apply(&edge, &set(2, &[0]), AddSwap(1, Swap)), set(2, &[1]));
    assert_eq!(dg_apply(&edge, &set(2, &[0]), AddSwap(1, NoSwap)), set(2, &[0]));
    let s3 = star(3).unwrap();
    assert_eq!(dg_apply(&s3, &set(4, &[0]), AddSwap(1, Swap)), set(4, &[1]));
    // two occupied neighbours block the swap
    assert_eq!(dg_apply(&s3, &set(4, &[1, 2]), AddSwap(0, Swap)), set(4, &[1, 2]));
}

#[test]
fn dg_bound_moves() {
    let edge = path(2).unwrap();
    assert_eq!(
        dg_bound_apply(&edge, &bound(&edge, &[0], &[]), AddSwap(1, Swap)),
        bound(&edge, &[1], &[])
    );
    let g = star(2).unwrap();
    // the hub is either absent or the unique occupied neighbour, swapped out
    assert_eq!(
        dg_bound_apply(&g, &bound(&g, &[], &[0]), AddSwap(1, Swap)),
        bound(&g, &[1], &[])
    );
    assert_eq!(
        dg_bound_apply(&g, &HardcoreBound::top(&g), AddSwap(1, Swap)),
        bound(&g, &[1], &[2])
    );
    // unique sure neighbour plus an uncertain one: both become uncertain
    let p3 = path(3).unwrap();
    assert_eq!(
        dg_bound_apply(&p3, &bound(&p3, &[0], &[2]), AddSwap(1, Swap)),
        bound(&p3, &[], &[0, 1, 2])
    );
}

#[test]
fn active_partition_examples() {
    let g = star(2).unwrap();
    let (r, a) = active_partition(&g, &HardcoreBound::top(&g));
    assert_eq!((r, a), (set(3, &[0, 1, 2]), set(3, &[])));
    let (r, a) = active_partition(&g, &bound(&g, &[], &[1, 2]));
    assert_eq!(r, set(3, &[1, 2]));
    assert_eq!(a, set(3, &[0, 1, 2]));
}

#[test]
fn incremental_partition_matches_scratch() {
    for seed in 0..5 {
        let g = random_graph(50, 0.08, seed);
        let weighted = Fugacities::from_values((0..50).map(|v| 0.5 + (v % 7) as f64).collect()).unwrap();
        for fug in [Fugacities::uniform(50, 3.0).unwrap(), weighted] {
            let chain = GibbsChain::new(Arc::new(g.clone()), fug.clone()).unwrap();
            let mut b = chain.top();
            let mut partition = ActivePartition::new(&g, &fug, &b);
            let mut rng = seeded(100 + seed);
            for _ in 0..10_000 {
                let letter = chain.draw(&mut rng);
                if b.apply(&g, letter) {
                    partition.update(&g, &b, letter.vertex().unwrap());
                }
                assert!(partition.matches(&g, &b));
                assert!(b.counters_consistent(&g));
                let fresh = ActivePartition::new(&g, &fug, &b);
                assert!((fresh.addition_mass() - partition.addition_mass()).abs() < 1e-12);
                assert!((fresh.removal_mass() - partition.removal_mass()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn conditional_draw_add_probability() {
    // star(10) with the hub removed: V_r = the 10 leaves, V_a = all 11
    let lambda = 3.0;
    let g = star(10).unwrap();
    let fug = Fugacities::uniform(11, lambda).unwrap();
    let b = gibbs_bound_apply(&g, &HardcoreBound::top(&g), Remove(0));
    let partition = ActivePartition::new(&g, &fug, &b);
    assert_eq!((partition.removal_count(), partition.addition_count()), (10, 11));
    let expected = lambda * 11.0 / (lambda * 11.0 + 10.0);
    let mut rng = seeded(9);
    let draws = 1_000_000;
    let adds = (0..draws)
        .filter(|_| matches!(draw_conditional(&partition, 0.0, &mut rng).unwrap(), Add(_)))
        .count();
    let freq = adds as f64 / draws as f64;
    assert!((freq - expected).abs() < 0.005, "{freq} vs {expected}");
}

#[test]
fn conditional_draw_symmetric_and_limits() {
    // a single vertex at the top has |V_a| = |V_r| = 1
    let g = Graph::new(1, &[]).unwrap();
    let fug = Fugacities::uniform(1, 1.0).unwrap();
    let partition = ActivePartition::new(&g, &fug, &HardcoreBound::top(&g));
    let mut rng = seeded(12);
    let adds = (0..200_000)
        .filter(|_| draw_conditional(&partition, 0.0, &mut rng).unwrap() == Add(0))
        .count();
    assert!((adds as f64 / 200_000.0 - 0.5).abs() < 0.005);
    let sharps = (0..10_000)
        .filter(|_| draw_conditional(&partition, 1.0, &mut rng).unwrap() == Sharp)
        .count();
    assert_eq!(sharps, 10_000);
}

#[test]
fn weighted_conditional_draw_is_exact() {
    let g = path(3).unwrap();
    let fug = Fugacities::from_values(vec![1.0, 4.0, 0.25]).unwrap();
    let chain = GibbsChain::new(Arc::new(g.clone()), fug.clone()).unwrap();
    let b = gibbs_bound_apply(&g, &HardcoreBound::top(&g), Remove(1));
    let partition = ActivePartition::new(&g, &fug, &b);
    let active: Vec<_> = chain
        .alphabet()
        .into_iter()
        .filter(|&a| chain.is_active(&b, a))
        .collect();
    let q = 0.2;
    let mass: f64 = q + (1.0 - q) * active.iter().map(|&a| chain.base_weight(a)).sum::<f64>();
    let mut rng = seeded(4);
    let draws = 500_000;
    let mut counts = HashMap::new();
    for _ in 0..draws {
        *counts.entry(partition.draw(q, &mut rng).unwrap()).or_insert(0usize) += 1;
    }
    for &a in &active {
        let expected = (1.0 - q) * chain.base_weight(a) / mass;
        let freq = counts.get(&a).copied().unwrap_or(0) as f64 / draws as f64;
        assert!((freq - expected).abs() < 0.004, "{a}: {freq} vs {expected}");
    }
    let sharp = counts[&Sharp] as f64 / draws as f64;
    assert!((sharp - q / mass).abs() < 0.004);
    assert_eq!(counts.len(), active.len() + 1);
}

#[test]
fn plain_gibbs_mcmc_mixes_on_star_four() {
    let g = star(4).unwrap();
    let fug = Fugacities::uniform(5, 2.0).unwrap();
    let exact = stationary_distribution(&g, &fug).unwrap();
    let chain = GibbsChain::new(Arc::new(g), fug).unwrap();
    let mut rng = seeded(77);
    let mut x = set(5, &[]);
    let mut counts: HashMap<_, f64> = HashMap::new();
    for _ in 0..1_000_000 {
        x = chain.act(&x, chain.draw(&mut rng));
        *counts.entry(x.clone()).or_insert(0.0) += 1.0;
    }
    let tv = tv_distance(&exact, &DistributionTable::from_weights(counts));
    assert!(tv < 0.03, "tv {tv}");
}

#[test]
fn uniform_vectors_take_the_uniform_path() {
    let g = Arc::new(star(6).unwrap());
    let a = HardcoreSampler::new(
        SamplerKind::Oracle,
        Arc::clone(&g),
        Fugacities::uniform(7, 2.5).unwrap(),
        1.0,
    )
    .unwrap();
    let b = HardcoreSampler::new(
        SamplerKind::Oracle,
        Arc::clone(&g),
        Fugacities::from_values(vec![2.5; 7]).unwrap(),
        1.0,
    )
    .unwrap();
    for i in 0..500 {
        let x = a.sample(&mut replication(5, i), u64::MAX).unwrap();
        let y = b.sample(&mut replication(5, i), u64::MAX).unwrap();
        assert_eq!(x, y);
    }
}

#[test]
fn weighted_path_with_equal_weights_is_exact() {
    let g = Arc::new(star(4).unwrap());
    let fug = Fugacities::uniform(5, 2.0).unwrap();
    let exact = stationary_distribution(&g, &fug).unwrap();
    let reps = 40_000;
    for kind in SamplerKind::ALL {
        let sampler = HardcoreSampler::new(kind, Arc::clone(&g), fug.clone().into_weighted(), 1.0).unwrap();
        let empirical = empirical_distribution(reps, 8, |rng| Ok(sampler.sample(rng, u64::MAX)?.state)).unwrap();
        let tv = tv_distance(&exact, &empirical);
        assert!(tv <= tv_threshold(exact.support_len(), reps), "{kind}: tv {tv}");
    }
}

#[test]
fn weighted_fugacities_are_exact() {
    let g = Arc::new(star(3).unwrap());
    let fug = Fugacities::from_values(vec![0.5, 1.0, 2.0, 5.0]).unwrap();
    let exact = stationary_distribution(&g, &fug).unwrap();
    let reps = 40_000;
    for kind in SamplerKind::ALL {
        let sampler = HardcoreSampler::new(kind, Arc::clone(&g), fug.clone(), 0.7).unwrap();
        let empirical = empirical_distribution(reps, 9, |rng| Ok(sampler.sample(rng, u64::MAX)?.state)).unwrap();
        let tv = tv_distance(&exact, &empirical);
        assert!(tv <= tv_threshold(exact.support_len(), reps), "{kind}: tv {tv}");
    }
}

#[test]
fn dg_coupling_on_the_star_ignores_lambda() {
    let mean = |lambda: f64| {
        let chain = oskip::DgChain::uniform(Arc::new(star(100).unwrap()), lambda, 1.0).unwrap();
        (0..100)
            .map(|i| oskip::forward_coupling(&chain, &mut replication(6, i), u64::MAX).steps as f64)
            .sum::<f64>()
            / 100.0
    };
    let (low, high) = (mean(10.0), mean(1000.0));
    assert!(high < 2.0 * low && low < 2.0 * high, "{low} vs {high}");
}
