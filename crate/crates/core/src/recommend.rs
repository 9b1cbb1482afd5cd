//! "People you may know": triadic-closure ranking with a research-group fallback.
//!
//! Candidates are ranked by how many of the subject's current connections they
//! share. When there are not enough of those, the list is filled with members
//! of the subject's own group.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::{AtlasGraph, GraphError, Person, PersonId};

/// Suggestion list length when the caller does not ask for one.
pub const DEFAULT_SUGGESTION_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuggestionReason {
    MutualConnections,
    SameGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub person: PersonId,
    /// Number of mutual connections; 0 for group backfill.
    pub score: usize,
    pub reason: SuggestionReason,
}

/// `|N(subject) ∩ N(candidate)|` over all live links, confirmed or not.
pub fn mutual_count(
    graph: &AtlasGraph,
    subject: PersonId,
    candidate: PersonId,
) -> Result<usize, GraphError> {
    let (Some(ns), Some(nc)) = (graph.neighbor_set(subject), graph.neighbor_set(candidate)) else {
        let missing = if graph.person(subject).is_none() { subject } else { candidate };
        return Err(GraphError::UnknownPerson(missing));
    };
    let (small, large) = if ns.len() <= nc.len() { (ns, nc) } else { (nc, ns) };
    Ok(small.iter().filter(|p| large.contains(p)).count())
}

fn by_name(x: &Person, y: &Person) -> Ordering {
    x.display_name.cmp(&y.display_name).then(x.id.cmp(&y.id))
}

/// Ranked suggestions for `subject`, never including themselves, their
/// current neighbors, or anyone in `excluded`.
pub fn suggest(
    graph: &AtlasGraph,
    subject: PersonId,
    limit: usize,
    excluded: &BTreeSet<PersonId>,
) -> Result<Vec<Suggestion>, GraphError> {
    let me = graph.person(subject).ok_or(GraphError::UnknownPerson(subject))?;
    if limit == 0 {
        return Ok(Vec::new());
    }
    let skip = |p: PersonId| {
        p == subject || excluded.contains(&p) || graph.link_between(subject, p).is_some()
    };

    // Two-hop walk: every path subject - n - c adds one mutual connection to c.
    let mut counts: HashMap<PersonId, usize> = HashMap::new();
    for n in graph.neighbors(subject) {
        for c in graph.neighbors(n) {
            if !skip(c) {
                *counts.entry(c).or_default() += 1;
            }
        }
    }

    let mut scored: Vec<(&Person, usize)> = counts
        .into_iter()
        .map(|(id, score)| (graph.person(id).expect("neighbor exists"), score))
        .collect();
    scored.sort_by(|(px, sx), (py, sy)| sy.cmp(sx).then_with(|| by_name(px, py)));

    let mut out: Vec<Suggestion> = scored
        .iter()
        .take(limit)
        .map(|&(p, score)| Suggestion {
            person: p.id,
            score,
            reason: SuggestionReason::MutualConnections,
        })
        .collect();

    if out.len() < limit {
        let mut group: Vec<&Person> = graph
            .people()
            .filter(|p| p.group == me.group && !skip(p.id) && !scored.iter().any(|(s, _)| s.id == p.id))
            .collect();
        group.sort_by(|x, y| by_name(x, y));
        out.extend(group.into_iter().take(limit - out.len()).map(|p| Suggestion {
            person: p.id,
            score: 0,
            reason: SuggestionReason::SameGroup,
        }));
    }
    Ok(out)
}
