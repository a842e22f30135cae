//! Active events of the Gibbs bounding chain and conditional drawing.
//!
//! For a bound `⟨B, D⟩` the active letters are
//!
//! * `Remove(v)` for `v ∉ C`,
//! * `Add(v)` for `v ∈ C` with `N(v) ∩ B = ∅`,
//! * `Add(v)` for `v ∈ D` with `N(v) ⊆ C`.
//!
//! A letter's activity only depends on `v` and its neighbours, so after a
//! letter changes `v` only `v` and `N(v)` are refreshed.

use rand::Rng;

use super::bound::{HardcoreBound, Region};
use super::fugacity::Fugacities;
use super::graph::Graph;
use super::letter::HardcoreLetter;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Binary sum tree over per-vertex weights. Parents are recomputed from
/// their children on every update, so totals do not drift.
#[derive(Debug, Clone)]
struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    fn new(len: usize) -> Self {
        let leaves = len.next_power_of_two().max(1);
        Self {
            leaves,
            nodes: vec![0.0; 2 * leaves],
        }
    }

    fn set(&mut self, index: usize, weight: f64) {
        let mut i = index + self.leaves;
        self.nodes[i] = weight;
        while i > 1 {
            i /= 2;
            self.nodes[i] = self.nodes[2 * i] + self.nodes[2 * i + 1];
        }
    }

    fn total(&self) -> f64 {
        self.nodes[1]
    }

    /// Index whose cumulative range contains `target ∈ [0, total)`.
    fn find(&self, mut target: f64) -> usize {
        let mut i = 1;
        while i < self.leaves {
            let left = self.nodes[2 * i];
            if target < left || self.nodes[2 * i + 1] <= 0.0 {
                i *= 2;
            } else {
                target -= left;
                i = 2 * i + 1;
            }
        }
        i - self.leaves
    }
}

/// Set of vertices supporting O(1) uniform picks and, for non-uniform
/// weights, O(log n) weighted picks.
#[derive(Debug, Clone)]
struct Urn {
    members: Vec<usize>,
    position: Vec<usize>,
    weights: Option<SumTree>,
}

const ABSENT: usize = usize::MAX;

impl Urn {
    fn new(n: usize, weighted: bool) -> Self {
        Self {
            members: Vec::new(),
            position: vec![ABSENT; n],
            weights: weighted.then(|| SumTree::new(n)),
        }
    }

    #[inline]
    fn contains(&self, v: usize) -> bool {
        self.position[v] != ABSENT
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn insert(&mut self, v: usize, weight: f64) -> bool {
        if self.contains(v) {
            return false;
        }
        self.position[v] = self.members.len();
        self.members.push(v);
        if let Some(tree) = &mut self.weights {
            tree.set(v, weight);
        }
        true
    }

    fn remove(&mut self, v: usize) -> bool {
        let pos = self.position[v];
        if pos == ABSENT {
            return false;
        }
        let last = *self.members.last().expect("non-empty urn");
        self.members.swap_remove(pos);
        if last != v {
            self.position[last] = pos;
        }
        self.position[v] = ABSENT;
        if let Some(tree) = &mut self.weights {
            tree.set(v, 0.0);
        }
        true
    }

    fn weighted_total(&self) -> Option<f64> {
        self.weights.as_ref().map(SumTree::total)
    }

    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.weights {
            None => self.members[rng.random_range(0..self.members.len())],
            Some(tree) => tree.find(rng.random::<f64>() * tree.total()),
        }
    }
}

/// Change in activity caused by refreshing a neighbourhood.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActiveDelta {
    pub removal_gained: Vec<usize>,
    pub removal_lost: Vec<usize>,
    pub addition_gained: Vec<usize>,
    pub addition_lost: Vec<usize>,
}

impl ActiveDelta {
    pub fn is_empty(&self) -> bool {
        self.removal_gained.is_empty()
            && self.removal_lost.is_empty()
            && self.addition_gained.is_empty()
            && self.addition_lost.is_empty()
    }
}

#[inline]
fn removal_active(bound: &HardcoreBound, v: usize) -> bool {
    bound.region(v) != Region::Clear
}

#[inline]
fn addition_active(bound: &HardcoreBound, v: usize) -> bool {
    match bound.region(v) {
        Region::Clear => bound.sure_neighbors(v) == 0,
        Region::Uncertain => bound.sure_neighbors(v) == 0 && bound.uncertain_neighbors(v) == 0,
        Region::Sure => false,
    }
}

/// The partition `(V_r, V_a)` of vertices whose removal / addition is
/// active, with the base masses of both urns.
#[derive(Debug, Clone)]
pub struct ActivePartition {
    removals: Urn,
    additions: Urn,
    /// `1 / (n (λ + 1))` per removal and `λ / (n (λ + 1))` per addition when
    /// fugacities are uniform.
    uniform_masses: Option<(f64, f64)>,
    removal_weights: Vec<f64>,
    addition_weights: Vec<f64>,
}

impl ActivePartition {
    /// Computes the partition from scratch.
    pub fn new(graph: &Graph, fugacities: &Fugacities, bound: &HardcoreBound) -> Self {
        let n = graph.vertex_count();
        let weighted = fugacities.uniform_value().is_none();
        let nf = n as f64;
        let removal_weights: Vec<f64> = (0..n).map(|v| 1.0 / (nf * (fugacities.get(v) + 1.0))).collect();
        let addition_weights: Vec<f64> = (0..n)
            .map(|v| fugacities.get(v) / (nf * (fugacities.get(v) + 1.0)))
            .collect();
        let uniform_masses = fugacities
            .uniform_value()
            .map(|lambda| (1.0 / (nf * (lambda + 1.0)), lambda / (nf * (lambda + 1.0))));
        let mut partition = Self {
            removals: Urn::new(n, weighted),
            additions: Urn::new(n, weighted),
            uniform_masses,
            removal_weights,
            addition_weights,
        };
        for v in 0..n {
            partition.refresh_vertex(bound, v);
        }
        partition
    }

    /// `V_r`.
    pub fn removal_set(&self) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.removals.position.len(), self.removals.members.iter().copied())
    }

    /// `V_a`.
    pub fn addition_set(&self) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.additions.position.len(), self.additions.members.iter().copied())
    }

    #[inline]
    pub fn removal_active(&self, v: usize) -> bool {
        self.removals.contains(v)
    }

    #[inline]
    pub fn addition_active(&self, v: usize) -> bool {
        self.additions.contains(v)
    }

    pub fn removal_count(&self) -> usize {
        self.removals.len()
    }

    pub fn addition_count(&self) -> usize {
        self.additions.len()
    }

    /// Base mass of the active removals.
    pub fn removal_mass(&self) -> f64 {
        match self.uniform_masses {
            Some((r, _)) => r * self.removals.len() as f64,
            None => self.removals.weighted_total().unwrap_or(0.0),
        }
    }

    /// Base mass of the active additions.
    pub fn addition_mass(&self) -> f64 {
        match self.uniform_masses {
            Some((_, a)) => a * self.additions.len() as f64,
            None => self.additions.weighted_total().unwrap_or(0.0),
        }
    }

    /// Returns `(removal flag changed, addition flag changed)`.
    #[inline]
    fn refresh_vertex(&mut self, bound: &HardcoreBound, v: usize) -> (bool, bool) {
        let r = if removal_active(bound, v) {
            self.removals.insert(v, self.removal_weights[v])
        } else {
            self.removals.remove(v)
        };
        let a = if addition_active(bound, v) {
            self.additions.insert(v, self.addition_weights[v])
        } else {
            self.additions.remove(v)
        };
        (r, a)
    }

    /// Refreshes `v` and its neighbours after `v` changed region.
    #[inline]
    pub fn refresh(&mut self, graph: &Graph, bound: &HardcoreBound, v: usize) {
        self.refresh_vertex(bound, v);
        for &u in graph.neighbors(v) {
            self.refresh_vertex(bound, u);
        }
    }

    /// Like [`refresh`](Self::refresh) but reports which flags flipped.
    pub fn update(&mut self, graph: &Graph, bound: &HardcoreBound, v: usize) -> ActiveDelta {
        let mut delta = ActiveDelta::default();
        for w in std::iter::once(v).chain(graph.neighbors(v).iter().copied()) {
            let (r, a) = self.refresh_vertex(bound, w);
            if r {
                if self.removals.contains(w) {
                    delta.removal_gained.push(w);
                } else {
                    delta.removal_lost.push(w);
                }
            }
            if a {
                if self.additions.contains(w) {
                    delta.addition_gained.push(w);
                } else {
                    delta.addition_lost.push(w);
                }
            }
        }
        delta
    }

    /// Draws from the base distribution with `♯` weighted `q` and every other
    /// letter scaled by `1 − q`, restricted to the active letters and
    /// normalized exactly.
    pub fn draw<R: Rng + ?Sized>(&self, q: f64, rng: &mut R) -> Result<HardcoreLetter> {
        let add_mass = (1.0 - q) * self.addition_mass();
        let remove_mass = (1.0 - q) * self.removal_mass();
        let total = q + add_mass + remove_mass;
        if total <= 0.0 || (self.additions.len() + self.removals.len() == 0 && q <= 0.0) {
            return Err(Error::StuckChain);
        }
        let u = rng.random::<f64>() * total;
        if u < q {
            Ok(HardcoreLetter::Sharp)
        } else if (u - q < add_mass && self.additions.len() > 0) || self.removals.len() == 0 {
            Ok(HardcoreLetter::Add(self.additions.pick(rng)))
        } else {
            Ok(HardcoreLetter::Remove(self.removals.pick(rng)))
        }
    }

    /// Recomputes from scratch and compares.
    pub fn matches(&self, graph: &Graph, bound: &HardcoreBound) -> bool {
        (0..graph.vertex_count()).all(|v| {
            self.removal_active(v) == removal_active(bound, v) && self.addition_active(v) == addition_active(bound, v)
        })
    }
}

/// `(V_r, V_a)` for a bound, computed from scratch.
pub fn active_partition(graph: &Graph, bound: &HardcoreBound) -> (VertexSet, VertexSet) {
    let n = graph.vertex_count();
    let removals = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| removal_active(bound, v)));
    let additions = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| addition_active(bound, v)));
    (removals, additions)
}

/// Draws one letter from the restricted distribution of `partition`.
pub fn draw_conditional<R: Rng + ?Sized>(partition: &ActivePartition, q: f64, rng: &mut R) -> Result<HardcoreLetter> {
    partition.draw(q, rng)
}
