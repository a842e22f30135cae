//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use oskip::graphs::{barabasi_albert, star};
use oskip::rng::seeded;
use oskip::{Fugacities, Graph, HardcoreSampler, SamplerKind};

pub fn star_graph(leaves: usize) -> Arc<Graph> {
    Arc::new(star(leaves).expect("star graphs are always valid"))
}

pub fn ba_graph(n: usize, seed: u64) -> Arc<Graph> {
    Arc::new(barabasi_albert(n, &mut seeded(seed)).expect("n is at least 5"))
}

pub fn sampler(kind: SamplerKind, graph: &Arc<Graph>, lambda: f64) -> HardcoreSampler {
    let fugacities = Fugacities::uniform(graph.vertex_count(), lambda).expect("positive fugacity");
    HardcoreSampler::new(kind, Arc::clone(graph), fugacities, 1.0).expect("valid sampler")
}
