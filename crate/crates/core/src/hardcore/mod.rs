//! The hard-core model: independent sets weighted by `Π_{v∈I} λ(v)`.

mod active;
mod bound;
mod chain;
mod fugacity;
mod graph;
mod letter;

pub use active::{active_partition, draw_conditional, ActiveDelta, ActivePartition};
pub use bound::{HardcoreBound, Region};
pub use chain::{dg_apply, dg_bound_apply, gibbs_apply, gibbs_bound_apply, DgChain, GibbsChain, ENUMERATION_LIMIT};
pub use fugacity::Fugacities;
pub use graph::{Graph, MAX_VERTICES};
pub use letter::{HardcoreLetter, SwapCoin};

use rand::Rng;

use crate::automaton::MarkovAutomaton;
use crate::error::Result;
use crate::skipping::{HistoryContext, SkippingAutomaton};

/// Gibbs bound plus its active partition, kept in sync letter by letter.
#[derive(Debug, Clone)]
pub struct GibbsContext {
    bound: HardcoreBound,
    partition: ActivePartition,
}

impl GibbsContext {
    pub fn new(chain: &GibbsChain, bound: HardcoreBound) -> Self {
        let partition = ActivePartition::new(chain.graph(), chain.fugacities(), &bound);
        Self { bound, partition }
    }

    pub fn partition(&self) -> &ActivePartition {
        &self.partition
    }
}

impl HistoryContext<GibbsChain> for GibbsContext {
    fn bound(&self) -> &HardcoreBound {
        &self.bound
    }

    fn active_mass(&self) -> f64 {
        self.partition.addition_mass() + self.partition.removal_mass()
    }

    #[inline]
    fn is_active(&self, letter: HardcoreLetter) -> bool {
        match letter {
            HardcoreLetter::Sharp => true,
            HardcoreLetter::Remove(v) => self.partition.removal_active(v),
            HardcoreLetter::Add(v) => self.partition.addition_active(v),
            HardcoreLetter::AddSwap(..) => false,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, _chain: &GibbsChain, q: f64, rng: &mut R) -> Result<HardcoreLetter> {
        self.partition.draw(q, rng)
    }

    fn advance(&mut self, chain: &GibbsChain, letter: HardcoreLetter) -> bool {
        let changed = self.bound.apply(chain.graph(), letter);
        if changed {
            let v = letter.vertex().expect("the delimiter never changes a bound");
            self.partition.refresh(chain.graph(), &self.bound, v);
            debug_assert!(chain.graph().vertex_count() > 64 || self.partition.matches(chain.graph(), &self.bound));
        }
        changed
    }
}

impl SkippingAutomaton for GibbsChain {
    type Context = GibbsContext;

    fn context(&self) -> GibbsContext {
        GibbsContext::new(self, self.top())
    }
}
