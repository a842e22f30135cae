//! The three perfect samplers behind one interface.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::cftp::{cftp_bounded_with_budget, CftpSample};
use crate::error::{Error, Result};
use crate::hardcore::{DgChain, Fugacities, GibbsChain, Graph};
use crate::skipping::cftp_oracle_observed;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    /// Bounded CFTP on the Gibbs chain.
    Gibbs,
    /// Bounded CFTP on the Dyer–Greenhill chain.
    Dg,
    /// Oracle-skipping CFTP on the Gibbs chain.
    Oracle,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 3] = [SamplerKind::Gibbs, SamplerKind::Dg, SamplerKind::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            SamplerKind::Gibbs => "gibbs",
            SamplerKind::Dg => "dg",
            SamplerKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gibbs" => Ok(SamplerKind::Gibbs),
            "dg" => Ok(SamplerKind::Dg),
            "oracle" => Ok(SamplerKind::Oracle),
            _ => Err(Error::InvalidParameter(format!(
                "unknown sampler `{s}` (expected gibbs, dg or oracle)"
            ))),
        }
    }
}

/// A configured perfect sampler for the hard-core model.
#[derive(Debug, Clone)]
pub enum HardcoreSampler {
    Gibbs(GibbsChain),
    Dg(DgChain),
    Oracle(GibbsChain),
}

impl HardcoreSampler {
    /// `swap_probability` is only read by the DG sampler.
    pub fn new(kind: SamplerKind, graph: Arc<Graph>, fugacities: Fugacities, swap_probability: f64) -> Result<Self> {
        Ok(match kind {
            SamplerKind::Gibbs => HardcoreSampler::Gibbs(GibbsChain::new(graph, fugacities)?),
            SamplerKind::Dg => HardcoreSampler::Dg(DgChain::new(graph, fugacities, swap_probability)?),
            SamplerKind::Oracle => HardcoreSampler::Oracle(GibbsChain::new(graph, fugacities)?),
        })
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            HardcoreSampler::Gibbs(_) => SamplerKind::Gibbs,
            HardcoreSampler::Dg(_) => SamplerKind::Dg,
            HardcoreSampler::Oracle(_) => SamplerKind::Oracle,
        }
    }

    /// One exact sample, failing once more than `max_letters` letters have
    /// been drawn.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_letters: u64) -> Result<CftpSample<VertexSet>> {
        match self {
            HardcoreSampler::Gibbs(chain) => cftp_bounded_with_budget(chain, rng, max_letters),
            HardcoreSampler::Dg(chain) => cftp_bounded_with_budget(chain, rng, max_letters),
            HardcoreSampler::Oracle(chain) => cftp_oracle_observed(chain, rng, max_letters, |_| {}),
        }
    }
}
