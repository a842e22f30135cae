#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use oskip::graphs::{path, star};
use oskip::{DgChain, GibbsChain, Graph, HardcoreBound, MarkovAutomaton, VertexSet};

pub fn set(n: usize, items: &[usize]) -> VertexSet {
    VertexSet::from_iter_with_capacity(n, items.iter().copied())
}

/// The hard-core automaton on a single edge `a − b` (`a = 0`, `b = 1`).
pub fn edge_chain(lambda: f64) -> GibbsChain {
    GibbsChain::uniform(Arc::new(path(2).unwrap()), lambda).unwrap()
}

pub fn star_chain(n: usize, lambda: f64) -> GibbsChain {
    GibbsChain::uniform(Arc::new(star(n).unwrap()), lambda).unwrap()
}

pub fn star_dg(n: usize, lambda: f64) -> DgChain {
    DgChain::uniform(Arc::new(star(n).unwrap()), lambda, 1.0).unwrap()
}

/// Every labelled simple graph on `n` vertices.
pub fn labelled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u32 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            Graph::new(n, &edges).unwrap()
        })
        .collect()
}

/// Bounds reachable from `top()` under the alphabet of `automaton`.
pub fn reachable_bounds<A>(automaton: &A) -> Vec<HardcoreBound>
where
    A: MarkovAutomaton<Bound = HardcoreBound>,
{
    let top = automaton.top();
    let mut seen: HashSet<(VertexSet, VertexSet)> = HashSet::new();
    let mut queue = VecDeque::from([top]);
    let mut out = Vec::new();
    while let Some(b) = queue.pop_front() {
        if !seen.insert((b.sure().clone(), b.uncertain().clone())) {
            continue;
        }
        for a in automaton.alphabet() {
            let mut next = b.clone();
            automaton.bound_act(&mut next, a);
            queue.push_back(next);
        }
        out.push(b);
    }
    out
}

/// Independent sets inside `⟨B, D⟩`.
pub fn members(states: &[VertexSet], bound: &HardcoreBound) -> Vec<VertexSet> {
    states.iter().filter(|s| bound.contains(s)).cloned().collect()
}
