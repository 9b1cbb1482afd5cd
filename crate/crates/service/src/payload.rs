//! JSON shapes returned by the API.

use std::collections::BTreeMap;

use atlas_core::graph::EgoStats;
use atlas_core::recommend::SuggestionReason;
use atlas_core::{Link, LinkStatus, Person, PersonId};
use serde::{Deserialize, Serialize};

use crate::events::{AddSource, FloorPlan, View};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkPayload {
    #[serde(flatten)]
    pub link: Link,
    pub status: LinkStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transparent: Option<bool>,
}

impl LinkPayload {
    pub fn new(link: Link) -> Self {
        LinkPayload {
            status: link.status(),
            link,
            transparent: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoredPerson {
    #[serde(flatten)]
    pub person: Person,
    pub community: usize,
    pub color: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EgoPayload {
    pub subject: PersonId,
    pub neighbors: Vec<ColoredPerson>,
    pub links: Vec<LinkPayload>,
    pub stats: EgoStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalPayload {
    pub nodes: Vec<ColoredPerson>,
    pub links: Vec<LinkPayload>,
    pub community_count: usize,
    pub modularity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuggestionPayload {
    pub id: PersonId,
    pub display_name: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avatar_ref: Option<String>,
    pub score: usize,
    pub reason: SuggestionReason,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Occupant {
    pub id: PersonId,
    pub display_name: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avatar_ref: Option<String>,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorPayload {
    #[serde(flatten)]
    pub floor: FloorPlan,
    pub occupants: Vec<Occupant>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewStats {
    pub sessions: usize,
    pub participants: usize,
    pub average_session_seconds: f64,
    /// Total seconds per view over all sessions.
    pub seconds_per_view: BTreeMap<View, i64>,
    /// Total seconds per view divided by the number of participants.
    pub seconds_per_view_per_participant: BTreeMap<View, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceStats {
    pub counts: BTreeMap<AddSource, usize>,
    pub total: usize,
}
