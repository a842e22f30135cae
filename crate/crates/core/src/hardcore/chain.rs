//! Gibbs and Dyer–Greenhill dynamics for the hard-core model.

use std::sync::Arc;

use rand::Rng;

use super::bound::HardcoreBound;
use super::fugacity::Fugacities;
use super::graph::Graph;
use super::letter::{HardcoreLetter, SwapCoin};
use crate::automaton::MarkovAutomaton;
use crate::error::{Error, Result};
use crate::verify::enumerate_independent_sets;
use crate::vertex_set::VertexSet;

/// Largest graph whose state space `states()` will enumerate.
pub const ENUMERATION_LIMIT: usize = 25;

/// Gibbs update: `Remove(v)` drops `v`, `Add(v)` inserts it when no
/// neighbour is present.
pub fn gibbs_apply(graph: &Graph, set: &VertexSet, letter: HardcoreLetter) -> VertexSet {
    let mut out = set.clone();
    match letter {
        HardcoreLetter::Remove(v) => {
            out.remove(v);
        }
        HardcoreLetter::Add(v) | HardcoreLetter::AddSwap(v, SwapCoin::NoSwap) => {
            if graph.neighbors(v).iter().all(|&u| !set.contains(u)) {
                out.insert(v);
            }
        }
        HardcoreLetter::AddSwap(_, SwapCoin::Swap) => return dg_apply(graph, set, letter),
        HardcoreLetter::Sharp => {}
    }
    debug_assert!(graph.is_independent(&out));
    out
}

/// Dyer–Greenhill update: an addition blocked by exactly one occupied
/// neighbour `u` becomes `I + v − u` when the coin says swap.
pub fn dg_apply(graph: &Graph, set: &VertexSet, letter: HardcoreLetter) -> VertexSet {
    let HardcoreLetter::AddSwap(v, SwapCoin::Swap) = letter else {
        return gibbs_apply(graph, set, letter);
    };
    let mut out = set.clone();
    let mut occupied = graph.neighbors(v).iter().filter(|&&u| set.contains(u));
    match (occupied.next(), occupied.next()) {
        (None, _) => {
            out.insert(v);
        }
        (Some(&u), None) => {
            out.remove(u);
            out.insert(v);
        }
        _ => {}
    }
    debug_assert!(graph.is_independent(&out));
    out
}

/// Gibbs bounding update on a copy of `bound`.
pub fn gibbs_bound_apply(graph: &Graph, bound: &HardcoreBound, letter: HardcoreLetter) -> HardcoreBound {
    let mut out = bound.clone();
    out.apply(graph, letter);
    out
}

/// Dyer–Greenhill bounding update on a copy of `bound`.
pub fn dg_bound_apply(graph: &Graph, bound: &HardcoreBound, letter: HardcoreLetter) -> HardcoreBound {
    gibbs_bound_apply(graph, bound, letter)
}

/// Draws `(v, is_addition)`: `v` uniform, addition with probability
/// `λ(v)/(λ(v)+1)`.
#[inline]
fn draw_site<R: Rng + ?Sized>(graph: &Graph, fugacities: &Fugacities, rng: &mut R) -> (usize, bool) {
    let v = rng.random_range(0..graph.vertex_count());
    let u: f64 = rng.random();
    let threshold = match fugacities.uniform_value() {
        Some(lambda) => lambda / (lambda + 1.0),
        None => fugacities.add_probability(v),
    };
    (v, u <= threshold)
}

fn check_domain(graph: &Graph, fugacities: &Fugacities) -> Result<()> {
    if graph.vertex_count() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if fugacities.len() != graph.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "{} fugacities for {} vertices",
            fugacities.len(),
            graph.vertex_count()
        )));
    }
    Ok(())
}

fn enumerate_states(graph: &Graph) -> Result<Vec<VertexSet>> {
    if graph.vertex_count() > ENUMERATION_LIMIT {
        return Err(Error::UnsupportedDomain);
    }
    enumerate_independent_sets(graph)
}

/// Single-site Gibbs sampler for `P_Λ(I) ∝ Π_{v∈I} λ(v)` with the `⟨B, D⟩`
/// bounding chain.
#[derive(Debug, Clone)]
pub struct GibbsChain {
    graph: Arc<Graph>,
    fugacities: Fugacities,
}

impl GibbsChain {
    pub fn new(graph: Arc<Graph>, fugacities: Fugacities) -> Result<Self> {
        check_domain(&graph, &fugacities)?;
        Ok(Self { graph, fugacities })
    }

    pub fn uniform(graph: Arc<Graph>, lambda: f64) -> Result<Self> {
        let fugacities = Fugacities::uniform(graph.vertex_count(), lambda)?;
        Self::new(graph, fugacities)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn fugacities(&self) -> &Fugacities {
        &self.fugacities
    }
}

impl MarkovAutomaton for GibbsChain {
    type State = VertexSet;
    type Letter = HardcoreLetter;
    type Bound = HardcoreBound;

    fn sharp(&self) -> HardcoreLetter {
        HardcoreLetter::Sharp
    }

    fn alphabet(&self) -> Vec<HardcoreLetter> {
        (0..self.graph.vertex_count())
            .flat_map(|v| [HardcoreLetter::Remove(v), HardcoreLetter::Add(v)])
            .collect()
    }

    fn alphabet_len(&self) -> usize {
        2 * self.graph.vertex_count()
    }

    fn letter_index(&self, letter: HardcoreLetter) -> Option<usize> {
        let n = self.graph.vertex_count();
        match letter {
            HardcoreLetter::Remove(v) if v < n => Some(2 * v),
            HardcoreLetter::Add(v) if v < n => Some(2 * v + 1),
            _ => None,
        }
    }

    fn base_weight(&self, letter: HardcoreLetter) -> f64 {
        let n = self.graph.vertex_count() as f64;
        match letter {
            HardcoreLetter::Remove(v) if v < self.graph.vertex_count() => 1.0 / (n * (self.fugacities.get(v) + 1.0)),
            HardcoreLetter::Add(v) if v < self.graph.vertex_count() => {
                let lambda = self.fugacities.get(v);
                lambda / (n * (lambda + 1.0))
            }
            _ => 0.0,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> HardcoreLetter {
        match draw_site(&self.graph, &self.fugacities, rng) {
            (v, true) => HardcoreLetter::Add(v),
            (v, false) => HardcoreLetter::Remove(v),
        }
    }

    fn act(&self, state: &VertexSet, letter: HardcoreLetter) -> VertexSet {
        gibbs_apply(&self.graph, state, letter)
    }

    fn top(&self) -> HardcoreBound {
        HardcoreBound::top(&self.graph)
    }

    fn bound_act(&self, bound: &mut HardcoreBound, letter: HardcoreLetter) -> bool {
        bound.apply(&self.graph, letter)
    }

    fn singleton(&self, bound: &HardcoreBound) -> Option<VertexSet> {
        bound.is_singleton().then(|| bound.sure().clone())
    }

    fn bound_contains(&self, bound: &HardcoreBound, state: &VertexSet) -> bool {
        bound.contains(state)
    }

    fn bound_subset(&self, inner: &HardcoreBound, outer: &HardcoreBound) -> bool {
        inner.is_subset(outer)
    }

    fn states(&self) -> Result<Vec<VertexSet>> {
        enumerate_states(&self.graph)
    }
}

/// Dyer–Greenhill chain: Gibbs with swap moves taken with probability `p_s`.
#[derive(Debug, Clone)]
pub struct DgChain {
    graph: Arc<Graph>,
    fugacities: Fugacities,
    swap_probability: f64,
}

impl DgChain {
    pub fn new(graph: Arc<Graph>, fugacities: Fugacities, swap_probability: f64) -> Result<Self> {
        check_domain(&graph, &fugacities)?;
        if !(0.0..=1.0).contains(&swap_probability) {
            return Err(Error::InvalidParameter(format!(
                "swap probability must lie in [0, 1], got {swap_probability}"
            )));
        }
        Ok(Self {
            graph,
            fugacities,
            swap_probability,
        })
    }

    pub fn uniform(graph: Arc<Graph>, lambda: f64, swap_probability: f64) -> Result<Self> {
        let fugacities = Fugacities::uniform(graph.vertex_count(), lambda)?;
        Self::new(graph, fugacities, swap_probability)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn swap_probability(&self) -> f64 {
        self.swap_probability
    }
}

impl MarkovAutomaton for DgChain {
    type State = VertexSet;
    type Letter = HardcoreLetter;
    type Bound = HardcoreBound;

    fn sharp(&self) -> HardcoreLetter {
        HardcoreLetter::Sharp
    }

    fn alphabet(&self) -> Vec<HardcoreLetter> {
        (0..self.graph.vertex_count())
            .flat_map(|v| {
                [
                    HardcoreLetter::Remove(v),
                    HardcoreLetter::AddSwap(v, SwapCoin::Swap),
                    HardcoreLetter::AddSwap(v, SwapCoin::NoSwap),
                ]
            })
            .collect()
    }

    fn alphabet_len(&self) -> usize {
        3 * self.graph.vertex_count()
    }

    fn letter_index(&self, letter: HardcoreLetter) -> Option<usize> {
        let n = self.graph.vertex_count();
        match letter {
            HardcoreLetter::Remove(v) if v < n => Some(3 * v),
            HardcoreLetter::AddSwap(v, SwapCoin::Swap) if v < n => Some(3 * v + 1),
            HardcoreLetter::AddSwap(v, SwapCoin::NoSwap) if v < n => Some(3 * v + 2),
            _ => None,
        }
    }

    fn base_weight(&self, letter: HardcoreLetter) -> f64 {
        let n = self.graph.vertex_count();
        let scale = |v: usize| 1.0 / (n as f64 * (self.fugacities.get(v) + 1.0));
        match letter {
            HardcoreLetter::Remove(v) if v < n => scale(v),
            HardcoreLetter::AddSwap(v, coin) if v < n => {
                let p = match coin {
                    SwapCoin::Swap => self.swap_probability,
                    SwapCoin::NoSwap => 1.0 - self.swap_probability,
                };
                p * self.fugacities.get(v) * scale(v)
            }
            _ => 0.0,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> HardcoreLetter {
        match draw_site(&self.graph, &self.fugacities, rng) {
            (v, true) => {
                let coin = if rng.random::<f64>() < self.swap_probability {
                    SwapCoin::Swap
                } else {
                    SwapCoin::NoSwap
                };
                HardcoreLetter::AddSwap(v, coin)
            }
            (v, false) => HardcoreLetter::Remove(v),
        }
    }

    fn act(&self, state: &VertexSet, letter: HardcoreLetter) -> VertexSet {
        dg_apply(&self.graph, state, letter)
    }

    fn top(&self) -> HardcoreBound {
        HardcoreBound::top(&self.graph)
    }

    fn bound_act(&self, bound: &mut HardcoreBound, letter: HardcoreLetter) -> bool {
        bound.apply(&self.graph, letter)
    }

    fn singleton(&self, bound: &HardcoreBound) -> Option<VertexSet> {
        bound.is_singleton().then(|| bound.sure().clone())
    }

    fn bound_contains(&self, bound: &HardcoreBound, state: &VertexSet) -> bool {
        bound.contains(state)
    }

    fn bound_subset(&self, inner: &HardcoreBound, outer: &HardcoreBound) -> bool {
        inner.is_subset(outer)
    }

    fn states(&self) -> Result<Vec<VertexSet>> {
        enumerate_states(&self.graph)
    }
}
