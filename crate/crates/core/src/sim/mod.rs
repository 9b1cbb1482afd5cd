//! Coverage simulation: how much of a network do a few participants map?
//!
//! Synthetic scale-free and clustered graphs stand in for the true community
//! network; participants report their own links and, optionally, links among
//! their connections.

mod generate;
mod mapping;

use thiserror::Error;

pub use generate::{generate_clustered, generate_scale_free};
pub use mapping::{
    coverage, coverage_curve, participant_order, select_participants, simulate_mapping,
    CoveragePoint, EdgeSet, SimMode, SimPolicy, Strategy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),
    #[error("cannot pick {k} participants from {n} nodes")]
    TooManyParticipants { k: usize, n: usize },
    #[error("participant {0} is not a node of the graph")]
    UnknownNode(usize),
}

/// Derives an independent seed for sub-stream `index` (SplitMix64 finalizer).
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
