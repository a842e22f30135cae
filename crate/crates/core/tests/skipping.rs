mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::{edge_chain, star_chain};
use oskip::automaton::{bound_word, EventWord};
use oskip::rng::{replication, seeded, SimRng};
use oskip::skipping::{
    cftp_oracle_observed, contract, double_history, expand, forward_incremental_coupling, forward_oracle_coupling,
    g_expand, g_word, HistoryContext, ScratchContext, SkipDistribution,
};
use oskip::verify::tv_distance;
use oskip::verify::DistributionTable;
use oskip::{
    cftp_bounded, GibbsChain, Graph, HardcoreLetter, HardcoreLetter::*, MarkovAutomaton, SkippingAutomaton, VertexSet,
};
use rand::Rng;

type Word = EventWord<HardcoreLetter>;

fn word(letters: &[HardcoreLetter]) -> Word {
    letters.to_vec().into()
}

fn context_after(chain: &GibbsChain, history: &[HardcoreLetter]) -> <GibbsChain as SkippingAutomaton>::Context {
    let mut ctx = chain.context();
    for &a in history {
        ctx.advance(chain, a);
    }
    ctx
}

fn extended_alphabet(chain: &GibbsChain) -> Vec<HardcoreLetter> {
    let mut letters = chain.alphabet();
    letters.push(Sharp);
    letters
}

/// All words of length at most `k` over `letters`.
fn words_up_to(letters: &[HardcoreLetter], k: usize) -> Vec<Vec<HardcoreLetter>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..k {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<HardcoreLetter>| {
                letters.iter().map(move |&a| {
                    let mut next = w.clone();
                    next.push(a);
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn draw_dq<R: Rng + ?Sized>(chain: &GibbsChain, q: f64, rng: &mut R) -> HardcoreLetter {
    if rng.random::<f64>() < q {
        Sharp
    } else {
        chain.draw(rng)
    }
}

fn key(letters: impl IntoIterator<Item = HardcoreLetter>) -> String {
    letters.into_iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

/// Empirical law over string keys, as a table keyed by a stable index.
fn law(counts: &HashMap<String, u64>, index: &mut HashMap<String, usize>) -> DistributionTable {
    let width = 1 << 16;
    DistributionTable::from_weights(counts.iter().map(|(k, &c)| {
        let next = index.len();
        let i = *index.entry(k.clone()).or_insert(next);
        (VertexSet::from_iter_with_capacity(width, [i]), c as f64)
    }))
}

fn two_sample_tv(a: &HashMap<String, u64>, b: &HashMap<String, u64>) -> f64 {
    let mut index = HashMap::new();
    tv_distance(&law(a, &mut index), &law(b, &mut index))
}

#[test]
fn contraction_examples() {
    let chain = edge_chain(1.0);
    let top = chain.context();
    assert_eq!(contract(&chain, &top, &word(&[Add(0), Remove(0)])), word(&[Remove(0)]));
    let all_active = word(&[Remove(0), Add(1), Sharp, Remove(1)]);
    assert_eq!(contract(&chain, &top, &all_active), all_active);
}

#[test]
fn contraction_is_idempotent_and_preserves_bounds() {
    // every history of length ≤ 2 and every word of length ≤ 4
    let chain = edge_chain(1.0);
    let letters = extended_alphabet(&chain);
    for history in words_up_to(&letters, 2) {
        let ctx = context_after(&chain, &history);
        let start = ctx.bound().clone();
        for u in words_up_to(&letters, 4) {
            let u = Word::from(u);
            let c = contract(&chain, &ctx, &u);
            assert_eq!(contract(&chain, &ctx, &c), c);
            assert_eq!(
                bound_word(&chain, &start, &c).unwrap(),
                bound_word(&chain, &start, &u).unwrap()
            );
            assert_eq!(c.count(Sharp), u.count(Sharp));
        }
    }
}

#[test]
fn scratch_context_agrees_with_the_oracle() {
    let chain = star_chain(4, 2.0);
    let mut fast = chain.context();
    let mut slow = ScratchContext::top(&chain);
    let mut rng = seeded(2);
    for _ in 0..5000 {
        for a in extended_alphabet(&chain) {
            assert_eq!(fast.is_active(a), slow.is_active(a));
        }
        assert!((fast.active_mass() - slow.active_mass()).abs() < 1e-12);
        let a = chain.draw(&mut rng);
        assert_eq!(fast.advance(&chain, a), slow.advance(&chain, a));
        assert_eq!(fast.bound(), slow.bound());
    }
}

#[test]
fn expansion_without_passive_letters_is_identity() {
    let chain = GibbsChain::uniform(Arc::new(Graph::new(1, &[]).unwrap()), 1.0).unwrap();
    let ctx = chain.context();
    assert_eq!(ctx.active_mass(), 1.0);
    // the context stays at the top until the last letter
    let u = word(&[Sharp, Sharp, Remove(0)]);
    let mut rng = seeded(0);
    for q in [0.0, 0.3, 1.0] {
        assert_eq!(expand(&chain, &ctx, q, &u, &mut rng), u);
    }
}

#[test]
fn expansion_inserts_only_passive_letters() {
    let chain = edge_chain(1.0);
    let ctx = chain.context();
    let mut rng = seeded(5);
    for _ in 0..1000 {
        let u: Word = (0..8).map(|_| draw_dq(&chain, 0.3, &mut rng)).collect();
        let c = contract(&chain, &ctx, &u);
        let e = expand(&chain, &ctx, 0.3, &c, &mut rng);
        assert_eq!(contract(&chain, &ctx, &e), c);
        assert_eq!(e.count(Sharp), c.count(Sharp));
    }
}

/// Shuffle law on the first `k` letters: contract then expand an i.i.d.
/// `D_q` word long enough to hold `k` delimiters.
fn shuffled_prefix(chain: &GibbsChain, q: f64, k: usize, rng: &mut SimRng) -> (String, String) {
    let ctx = chain.context();
    let mut u = Word::new();
    while u.count(Sharp) < k {
        u.push(draw_dq(chain, q, rng));
    }
    let e = expand(chain, &ctx, q, &contract(chain, &ctx, &u), rng);
    (key(u.iter().take(k)), key(e.iter().take(k)))
}

#[test]
fn shuffle_law_per_position() {
    let chain = edge_chain(1.0);
    let (q, k, reps) = (0.5, 6, 40_000);
    let mut rng = seeded(17);
    let mut direct = vec![HashMap::new(); k];
    let mut shuffled = vec![HashMap::new(); k];
    for _ in 0..reps {
        let (u, e) = shuffled_prefix(&chain, q, k, &mut rng);
        for (i, (a, b)) in u.split(' ').zip(e.split(' ')).enumerate() {
            *direct[i].entry(a.to_string()).or_insert(0) += 1;
            *shuffled[i].entry(b.to_string()).or_insert(0) += 1;
        }
    }
    for i in 0..k {
        let tv = two_sample_tv(&direct[i], &shuffled[i]);
        assert!(tv < 0.02, "position {i}: tv {tv}");
    }
}

#[test]
fn g_shuffle_law() {
    let chain = edge_chain(1.0);
    let (q, reps) = (0.5, 40_000);
    let ctx = chain.context();
    let mut rng = seeded(23);
    let mut lengths = [HashMap::new(), HashMap::new()];
    let mut firsts = [HashMap::new(), HashMap::new()];
    for _ in 0..reps {
        let mut u = Word::new();
        loop {
            let a = draw_dq(&chain, q, &mut rng);
            u.push(a);
            if a == Sharp {
                break;
            }
        }
        let e = expand(&chain, &ctx, q, &contract(&chain, &ctx, &u), &mut rng);
        for (slot, w) in [&u, &e].into_iter().enumerate() {
            *lengths[slot].entry(w.len().min(8).to_string()).or_insert(0) += 1;
            *firsts[slot].entry(key(w.iter().take(2))).or_insert(0) += 1;
        }
    }
    assert!(two_sample_tv(&lengths[0], &lengths[1]) < 0.02);
    assert!(two_sample_tv(&firsts[0], &firsts[1]) < 0.02);
}

#[test]
fn g_word_length_law_on_one_vertex() {
    // at the top both letters are active (mass 1); afterwards one letter of
    // mass 1/2 is, so P(len = 1) = 1/2 and P(len = 2) = 1/2 · 2/3
    let chain = GibbsChain::uniform(Arc::new(Graph::new(1, &[]).unwrap()), 1.0).unwrap();
    let mut rng = seeded(31);
    let reps = 1_000_000;
    let mut counts = [0u64; 3];
    for _ in 0..reps {
        let g = g_word(&chain, 0.5, &mut rng).unwrap();
        assert_eq!(g.word.count(Sharp), 1);
        assert_eq!(g.draws as usize, g.word.len());
        assert_eq!(contract(&chain, &chain.context(), &g.word), g.word);
        counts[g.word.len().min(3) - 1] += 1;
    }
    let p1 = counts[0] as f64 / reps as f64;
    let p2 = counts[1] as f64 / reps as f64;
    assert!((p1 - 0.5).abs() < 0.002, "{p1}");
    assert!((p2 - 1.0 / 3.0).abs() < 0.002, "{p2}");
}

#[test]
fn g_word_with_q_near_one_is_the_delimiter() {
    let chain = star_chain(6, 3.0);
    let mut rng = seeded(1);
    let hits = (0..10_000)
        .filter(|_| g_word(&chain, 0.999, &mut rng).unwrap().word == word(&[Sharp]))
        .count();
    assert!(hits >= 9_970, "{hits}");
    assert!(g_word(&chain, 0.0, &mut rng).is_err());
}

#[test]
fn double_history_first_round_is_a_g_word() {
    let chain = star_chain(3, 2.0);
    for seed in 0..200 {
        let fused = double_history(&chain, Word::new(), 1, &mut seeded(seed)).unwrap();
        let direct = g_word(&chain, 0.5, &mut seeded(seed)).unwrap();
        assert_eq!(fused.word, direct.word);
        assert_eq!(fused.context.bound(), direct.context.bound());
    }
    assert!(double_history(&chain, Word::new(), 0, &mut seeded(0)).is_err());
}

#[test]
fn double_history_rejects_inconsistent_words() {
    let chain = edge_chain(1.0);
    // Add(0) is passive at the top of the edge graph
    let bad = word(&[Add(0), Sharp]);
    let err = double_history(&chain, bad, 2, &mut seeded(0)).unwrap_err();
    assert!(matches!(err, oskip::Error::InconsistentWord { position: 0, .. }));
}

/// `w^n = c^ε(u^n · e_G(w^{n-1}))` with every operation run separately.
fn reference_round(chain: &GibbsChain, previous: &Word, n: u32, rng: &mut SimRng) -> Word {
    let fresh = g_word(chain, SkipDistribution::halving(n).q, rng).unwrap();
    let expanded = g_expand(chain, previous, rng);
    let mut out = fresh.word.clone();
    out.extend_from(&contract(chain, &fresh.context, &expanded));
    out
}

#[test]
fn fused_double_history_matches_the_reference() {
    let chain = edge_chain(2.0);
    let reps = 50_000;
    let mut laws = [HashMap::new(), HashMap::new()];
    for i in 0..reps {
        let mut rng = replication(41, i);
        let (mut fused, mut reference) = (Word::new(), Word::new());
        for n in 1..=3 {
            fused = double_history(&chain, fused, n, &mut rng).unwrap().word;
            reference = reference_round(&chain, &reference, n, &mut rng);
        }
        for (slot, w) in [&fused, &reference].into_iter().enumerate() {
            let bound = bound_word(&chain, &chain.top(), w).unwrap();
            let k = format!("{}|{}|{}", bound.sure(), bound.uncertain(), w.len().min(8));
            *laws[slot].entry(k).or_insert(0u64) += 1;
        }
    }
    let tv = two_sample_tv(&laws[0], &laws[1]);
    assert!(tv < 0.03, "tv {tv}");
}

#[test]
fn oracle_rounds_count_delimiters_and_nest() {
    let chain = star_chain(5, 3.0);
    for i in 0..2000 {
        let mut previous = None;
        let mut rounds = 0;
        let sample = cftp_oracle_observed(&chain, &mut replication(2, i), u64::MAX, |round| {
            rounds += 1;
            assert_eq!(round.round, rounds);
            assert_eq!(round.word.count(Sharp), round.round as usize);
            if let Some(prev) = &previous {
                assert!(round.bound.is_subset(prev));
            }
            previous = Some(round.bound.clone());
        })
        .unwrap();
        assert_eq!(sample.stats.doubling_rounds, rounds as u64);
        assert!(sample.stats.bound_updates >= sample.stats.backward_time);
    }
}

#[test]
fn oracle_rounds_track_bounded_backward_time() {
    let chain = star_chain(10, 2.0);
    let reps = 200;
    let (mut rounds, mut log_tau) = (0.0, 0.0);
    for i in 0..reps {
        rounds += oskip::cftp_oracle(&chain, &mut replication(3, i))
            .unwrap()
            .stats
            .doubling_rounds as f64;
        log_tau += (cftp_bounded(&chain, &mut replication(4, i))
            .unwrap()
            .stats
            .backward_time as f64)
            .log2();
    }
    let ratio = rounds / log_tau;
    assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn forward_skipping_on_one_vertex() {
    let chain = GibbsChain::uniform(Arc::new(Graph::new(1, &[]).unwrap()), 1.0).unwrap();
    let mut rng = seeded(0);
    for _ in 0..100 {
        assert_eq!(forward_oracle_coupling(&chain, &mut rng, 100).unwrap().steps, 1);
        assert_eq!(forward_incremental_coupling(&chain, &mut rng, 100).unwrap().steps, 1);
    }
}

#[test]
fn forward_skipping_bracket_on_the_edge() {
    let chain = edge_chain(1.0);
    let reps = 10_000;
    let (mut oracle, mut incremental) = (0u64, 0u64);
    for i in 0..reps {
        oracle += forward_oracle_coupling(&chain, &mut replication(6, i), 1 << 20)
            .unwrap()
            .steps;
        incremental += forward_incremental_coupling(&chain, &mut replication(7, i), 1 << 20)
            .unwrap()
            .steps;
    }
    let (o, inc) = (oracle as f64 / reps as f64, incremental as f64 / reps as f64);
    assert!(o <= inc && inc <= 4.0 * o, "oracle {o}, incremental {inc}");
}
