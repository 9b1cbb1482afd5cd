use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sub_seed, SimError};
use crate::scalar::Scalar;
use crate::ugraph::{edge_key, UGraph};

/// Edges as `(u, v)` with `u < v`.
pub type EdgeSet = BTreeSet<(usize, usize)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Participants report only their own links.
    EgoOnly,
    /// Participants also report links among their connections.
    EgoPlusThirdParty,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPolicy {
    pub mode: SimMode,
    /// Chance a participant knows about any one link among their connections.
    /// Ignored for [`SimMode::EgoOnly`].
    pub third_party_know_prob: f64,
}

impl SimPolicy {
    pub fn ego_only() -> Self {
        SimPolicy {
            mode: SimMode::EgoOnly,
            third_party_know_prob: 0.0,
        }
    }

    pub fn third_party(know_prob: f64) -> Self {
        SimPolicy {
            mode: SimMode::EgoPlusThirdParty,
            third_party_know_prob: know_prob,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.mode == SimMode::EgoPlusThirdParty && !(0.0..=1.0).contains(&self.third_party_know_prob) {
            return Err(SimError::InvalidParams(format!(
                "knowledge probability must be in [0, 1], got {}",
                self.third_party_know_prob
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Random,
    DegreeDescending,
}

/// Mean (and spread) of coverage over trials for one participant count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint<F> {
    pub participants: usize,
    pub coverage: F,
    pub stddev: F,
}

/// Full recruitment order; any prefix is a valid participant set, so
/// prefixes of one order are nested.
pub fn participant_order(graph: &UGraph, strategy: Strategy, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.node_count()).collect();
    match strategy {
        Strategy::Random => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        Strategy::DegreeDescending => {
            order.sort_by(|&x, &y| graph.degree(y).cmp(&graph.degree(x)).then(x.cmp(&y)))
        }
    }
    order
}

pub fn select_participants(
    graph: &UGraph,
    strategy: Strategy,
    k: usize,
    seed: u64,
) -> Result<BTreeSet<usize>, SimError> {
    if k > graph.node_count() {
        return Err(SimError::TooManyParticipants {
            k,
            n: graph.node_count(),
        });
    }
    Ok(participant_order(graph, strategy, seed).into_iter().take(k).collect())
}

/// Edges reported by `participants`: each reports all of their own links,
/// and under [`SimMode::EgoPlusThirdParty`] each link among their connections
/// independently with the policy's probability.
///
/// A participant's knowledge depends only on `seed` and their own id, so
/// growing the participant set never loses edges.
pub fn simulate_mapping(
    graph: &UGraph,
    participants: &BTreeSet<usize>,
    policy: SimPolicy,
    seed: u64,
) -> Result<EdgeSet, SimError> {
    policy.validate()?;
    let mut captured = EdgeSet::new();
    for &p in participants {
        if p >= graph.node_count() {
            return Err(SimError::UnknownNode(p));
        }
        let neighbors = graph.neighbors(p);
        captured.extend(neighbors.iter().map(|&v| edge_key(p, v)));
        if policy.mode == SimMode::EgoOnly {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, p as u64));
        for (i, &u) in neighbors.iter().enumerate() {
            for &w in &neighbors[i + 1..] {
                if graph.has_edge(u, w) && rng.gen_bool(policy.third_party_know_prob) {
                    captured.insert((u, w));
                }
            }
        }
    }
    Ok(captured)
}

/// Fraction of the true edges that were captured; 1 for an edgeless graph.
pub fn coverage<F: Scalar>(graph: &UGraph, captured: &EdgeSet) -> F {
    if graph.edge_count() == 0 {
        return F::one();
    }
    let hits = captured.iter().filter(|&&(u, v)| graph.has_edge(u, v)).count();
    F::of_usize(hits) / F::of_usize(graph.edge_count())
}

/// Mean coverage per participant count over `trials` seeded runs.
///
/// Within a trial the participant sets for successive `ks` are prefixes of
/// one recruitment order, so each trial's curve is monotone in `k`.
pub fn coverage_curve<F: Scalar>(
    graph: &UGraph,
    strategy: Strategy,
    policy: SimPolicy,
    ks: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<CoveragePoint<F>>, SimError> {
    if trials == 0 {
        return Err(SimError::InvalidParams("trials must be >= 1".into()));
    }
    policy.validate()?;
    if let Some(&k) = ks.iter().find(|&&k| k > graph.node_count()) {
        return Err(SimError::TooManyParticipants {
            k,
            n: graph.node_count(),
        });
    }

    let runs: Vec<Vec<F>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = sub_seed(seed, trial as u64);
            let order = participant_order(graph, strategy, trial_seed);
            ks.iter()
                .map(|&k| {
                    let participants: BTreeSet<usize> = order[..k].iter().copied().collect();
                    let captured = simulate_mapping(graph, &participants, policy, trial_seed)
                        .expect("inputs validated above");
                    coverage(graph, &captured)
                })
                .collect()
        })
        .collect();

    let count = F::of_usize(trials);
    Ok(ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mean = runs.iter().fold(F::zero(), |acc, r| acc + r[i]) / count;
            let stddev = if trials > 1 {
                let ss = runs.iter().fold(F::zero(), |acc, r| acc + (r[i] - mean) * (r[i] - mean));
                (ss / F::of_usize(trials - 1)).sqrt()
            } else {
                F::zero()
            };
            CoveragePoint {
                participants: k,
                coverage: mean,
                stddev,
            }
        })
        .collect())
}
