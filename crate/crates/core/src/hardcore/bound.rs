use super::graph::Graph;
use super::letter::{HardcoreLetter, SwapCoin};
use crate::vertex_set::VertexSet;

/// Where a vertex sits relative to a bound `⟨B, D⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// In every independent set of the bound (`B`).
    Sure,
    /// In some but not all of them (`D`).
    Uncertain,
    /// In none of them (`C = V − B − D`).
    Clear,
}

/// Bound `⟨B, D⟩ = {I independent | B ⊆ I ⊆ B ∪ D}` with per-vertex counts of
/// neighbours in `B` and in `D`.
///
/// Invariants: `B ∩ D = ∅`, `B` is independent, counters match the sets.
/// The bound is a singleton exactly when `D` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardcoreBound {
    sure: VertexSet,
    uncertain: VertexSet,
    sure_neighbors: Vec<u32>,
    uncertain_neighbors: Vec<u32>,
}

impl HardcoreBound {
    /// `⟨∅, V⟩`, the whole state space.
    pub fn top(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        Self {
            sure: VertexSet::new(n),
            uncertain: VertexSet::full(n),
            sure_neighbors: vec![0; n],
            uncertain_neighbors: (0..n).map(|v| graph.degree(v) as u32).collect(),
        }
    }

    /// Builds `⟨B, D⟩` from explicit sets. Returns `None` if the sets overlap
    /// or `B` is not independent.
    pub fn from_sets(graph: &Graph, sure: VertexSet, uncertain: VertexSet) -> Option<Self> {
        if !sure.is_disjoint(&uncertain) || !graph.is_independent(&sure) {
            return None;
        }
        let count = |set: &VertexSet, v: usize| graph.neighbors(v).iter().filter(|&&u| set.contains(u)).count() as u32;
        let n = graph.vertex_count();
        let sure_neighbors = (0..n).map(|v| count(&sure, v)).collect();
        let uncertain_neighbors = (0..n).map(|v| count(&uncertain, v)).collect();
        Some(Self {
            sure,
            uncertain,
            sure_neighbors,
            uncertain_neighbors,
        })
    }

    /// The singleton bound `⟨I, ∅⟩`.
    pub fn singleton_of(graph: &Graph, set: &VertexSet) -> Option<Self> {
        Self::from_sets(graph, set.clone(), VertexSet::new(graph.vertex_count()))
    }

    #[inline]
    pub fn sure(&self) -> &VertexSet {
        &self.sure
    }

    #[inline]
    pub fn uncertain(&self) -> &VertexSet {
        &self.uncertain
    }

    pub fn clear(&self) -> VertexSet {
        let n = self.sure.capacity();
        VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| self.region(v) == Region::Clear))
    }

    #[inline]
    pub fn region(&self, v: usize) -> Region {
        if self.sure.contains(v) {
            Region::Sure
        } else if self.uncertain.contains(v) {
            Region::Uncertain
        } else {
            Region::Clear
        }
    }

    /// `|N(v) ∩ B|`.
    #[inline]
    pub fn sure_neighbors(&self, v: usize) -> u32 {
        self.sure_neighbors[v]
    }

    /// `|N(v) ∩ D|`.
    #[inline]
    pub fn uncertain_neighbors(&self, v: usize) -> u32 {
        self.uncertain_neighbors[v]
    }

    #[inline]
    pub fn is_singleton(&self) -> bool {
        self.uncertain.is_empty()
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.sure.is_subset(set) && set.is_subset(&self.sure.union(&self.uncertain))
    }

    /// Interval inclusion `⟨B, D⟩ ⊆ ⟨B', D'⟩`: `B' ⊆ B` and `B ∪ D ⊆ B' ∪ D'`.
    pub fn is_subset(&self, outer: &HardcoreBound) -> bool {
        outer.sure.is_subset(&self.sure)
            && self
                .sure
                .union(&self.uncertain)
                .is_subset(&outer.sure.union(&outer.uncertain))
    }

    /// Moves `v` to `region`, updating the neighbour counters. Returns
    /// whether anything changed.
    pub fn set_region(&mut self, graph: &Graph, v: usize, region: Region) -> bool {
        let old = self.region(v);
        if old == region {
            return false;
        }
        match old {
            Region::Sure => {
                self.sure.remove(v);
                for &u in graph.neighbors(v) {
                    self.sure_neighbors[u] -= 1;
                }
            }
            Region::Uncertain => {
                self.uncertain.remove(v);
                for &u in graph.neighbors(v) {
                    self.uncertain_neighbors[u] -= 1;
                }
            }
            Region::Clear => {}
        }
        match region {
            Region::Sure => {
                self.sure.insert(v);
                for &u in graph.neighbors(v) {
                    self.sure_neighbors[u] += 1;
                }
            }
            Region::Uncertain => {
                self.uncertain.insert(v);
                for &u in graph.neighbors(v) {
                    self.uncertain_neighbors[u] += 1;
                }
            }
            Region::Clear => {}
        }
        true
    }

    /// Recomputes every counter from the sets and compares.
    pub fn counters_consistent(&self, graph: &Graph) -> bool {
        (0..graph.vertex_count()).all(|v| {
            let nb = graph.neighbors(v).iter().filter(|&&u| self.sure.contains(u)).count() as u32;
            let nd = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| self.uncertain.contains(u))
                .count() as u32;
            nb == self.sure_neighbors[v] && nd == self.uncertain_neighbors[v]
        })
    }

    /// The first neighbour of `v` in `B`.
    fn sure_neighbor_of(&self, graph: &Graph, v: usize) -> usize {
        *graph
            .neighbors(v)
            .iter()
            .find(|&&u| self.sure.contains(u))
            .expect("counter says a sure neighbour exists")
    }

    fn uncertain_neighbor_of(&self, graph: &Graph, v: usize) -> usize {
        *graph
            .neighbors(v)
            .iter()
            .find(|&&u| self.uncertain.contains(u))
            .expect("counter says an uncertain neighbour exists")
    }

    /// Gibbs bounding update for an addition of `v`.
    pub fn gibbs_add(&mut self, graph: &Graph, v: usize) -> bool {
        if self.sure_neighbors[v] != 0 {
            return false;
        }
        if self.uncertain_neighbors[v] == 0 {
            self.set_region(graph, v, Region::Sure)
        } else {
            self.set_region(graph, v, Region::Uncertain)
        }
    }

    pub fn remove_vertex(&mut self, graph: &Graph, v: usize) -> bool {
        self.set_region(graph, v, Region::Clear)
    }

    /// Dyer–Greenhill bounding update for a swap-enabled addition of `v`,
    /// keyed on `kB = |N(v) ∩ B|` and `kD = |N(v) ∩ D|`.
    pub fn swap_add(&mut self, graph: &Graph, v: usize) -> bool {
        let k_sure = self.sure_neighbors[v];
        let k_uncertain = self.uncertain_neighbors[v];
        match (k_sure, k_uncertain) {
            (0, 0) => self.set_region(graph, v, Region::Sure),
            // the lone uncertain neighbour is either absent or swapped out
            (0, 1) => {
                let u = self.uncertain_neighbor_of(graph, v);
                self.set_region(graph, u, Region::Clear);
                self.set_region(graph, v, Region::Sure);
                true
            }
            (0, _) => self.set_region(graph, v, Region::Uncertain),
            (1, 0) => {
                let u = self.sure_neighbor_of(graph, v);
                self.set_region(graph, u, Region::Clear);
                self.set_region(graph, v, Region::Sure);
                true
            }
            (1, _) => {
                let u = self.sure_neighbor_of(graph, v);
                self.set_region(graph, u, Region::Uncertain);
                self.set_region(graph, v, Region::Uncertain);
                true
            }
            _ => false,
        }
    }

    /// Applies any hard-core letter with the bounding rules of its chain.
    pub fn apply(&mut self, graph: &Graph, letter: HardcoreLetter) -> bool {
        let changed = match letter {
            HardcoreLetter::Remove(v) => self.remove_vertex(graph, v),
            HardcoreLetter::Add(v) | HardcoreLetter::AddSwap(v, SwapCoin::NoSwap) => self.gibbs_add(graph, v),
            HardcoreLetter::AddSwap(v, SwapCoin::Swap) => self.swap_add(graph, v),
            HardcoreLetter::Sharp => false,
        };
        debug_assert!(self.sure.is_disjoint(&self.uncertain));
        debug_assert!(!changed || self.counters_consistent_local(graph, letter));
        changed
    }

    // Counter check restricted to the touched neighbourhood; cheap enough for
    // debug builds on large graphs.
    fn counters_consistent_local(&self, graph: &Graph, letter: HardcoreLetter) -> bool {
        let Some(v) = letter.vertex() else { return true };
        let check = |w: usize| {
            let nb = graph.neighbors(w).iter().filter(|&&u| self.sure.contains(u)).count() as u32;
            let nd = graph
                .neighbors(w)
                .iter()
                .filter(|&&u| self.uncertain.contains(u))
                .count() as u32;
            nb == self.sure_neighbors[w] && nd == self.uncertain_neighbors[w]
        };
        check(v) && graph.neighbors(v).iter().all(|&u| check(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::star;

    fn set(n: usize, items: &[usize]) -> VertexSet {
        VertexSet::from_iter_with_capacity(n, items.iter().copied())
    }

    fn bound(g: &Graph, b: &[usize], d: &[usize]) -> HardcoreBound {
        let n = g.vertex_count();
        HardcoreBound::from_sets(g, set(n, b), set(n, d)).unwrap()
    }

    #[test]
    fn gibbs_rules_on_star_two() {
        let g = star(2).unwrap();
        let mut top = HardcoreBound::top(&g);
        assert!(top.remove_vertex(&g, 0));
        assert_eq!(top, bound(&g, &[], &[1, 2]));

        let mut b = bound(&g, &[], &[1, 2]);
        assert!(b.gibbs_add(&g, 1));
        assert_eq!(b, bound(&g, &[1], &[2]));

        // leaf 1 already uncertain with an uncertain neighbour: no change
        let mut b = HardcoreBound::top(&g);
        assert!(!b.gibbs_add(&g, 1));
        assert_eq!(b, HardcoreBound::top(&g));
    }

    #[test]
    fn swap_rules() {
        let edge = Graph::new(2, &[(0, 1)]).unwrap();
        let mut b = bound(&edge, &[0], &[]);
        assert!(b.swap_add(&edge, 1));
        assert_eq!(b, bound(&edge, &[1], &[]));

        let g = star(2).unwrap();
        let mut b = bound(&g, &[], &[0]);
        assert!(b.swap_add(&g, 1));
        assert_eq!(b, bound(&g, &[1], &[]));
        // two uncertain neighbours: v joins them
        let mut b = bound(&g, &[], &[1, 2]);
        assert!(b.swap_add(&g, 0));
        assert_eq!(b, bound(&g, &[], &[0, 1, 2]));

        // kB = 1, kD >= 1: both endpoints become uncertain
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut b = bound(&path, &[0], &[2]);
        assert!(b.swap_add(&path, 1));
        assert_eq!(b, bound(&path, &[], &[0, 1, 2]));

        // kB = 2: blocked
        let mut b = bound(&path, &[0, 2], &[]);
        assert!(!b.swap_add(&path, 1));
    }

    #[test]
    fn from_sets_rejects_invalid_bounds() {
        let g = star(2).unwrap();
        assert!(HardcoreBound::from_sets(&g, set(3, &[0, 1]), set(3, &[])).is_none());
        assert!(HardcoreBound::from_sets(&g, set(3, &[1]), set(3, &[1])).is_none());
    }

    #[test]
    fn interval_inclusion() {
        let g = star(2).unwrap();
        let top = HardcoreBound::top(&g);
        let b = bound(&g, &[1], &[2]);
        assert!(b.is_subset(&top));
        assert!(!top.is_subset(&b));
        assert!(b.contains(&set(3, &[1])) && b.contains(&set(3, &[1, 2])));
        assert!(!b.contains(&set(3, &[2])));
    }
}
