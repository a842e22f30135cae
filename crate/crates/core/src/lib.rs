//! Perfect sampling of Markov chains by coupling from the past, with
//! bounding chains and oracle skipping of passive events.
//!
//! The generic machinery lives in [`automaton`], [`cftp`] and [`skipping`];
//! [`hardcore`] instantiates it for independent sets under the Gibbs and
//! Dyer–Greenhill chains.

pub mod automaton;
pub mod cftp;
pub mod error;
pub mod experiment;
pub mod graphs;
pub mod hardcore;
pub mod rng;
pub mod sampler;
pub mod skipping;
pub mod verify;
mod vertex_set;

pub use automaton::{apply_word, bound_word, forward_coupling, EventWord, ForwardCoupling, MarkovAutomaton};
pub use cftp::{cftp_bounded, cftp_naive, CftpSample, CftpStats};
pub use error::{Error, Result};
pub use hardcore::{DgChain, Fugacities, GibbsChain, Graph, HardcoreBound, HardcoreLetter, SwapCoin};
pub use sampler::{HardcoreSampler, SamplerKind};
pub use skipping::{cftp_oracle, forward_incremental_coupling, forward_oracle_coupling, SkippingAutomaton};
pub use vertex_set::VertexSet;
