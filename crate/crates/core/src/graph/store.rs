use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use super::types::{pair_key, Actor, Link, LinkId, LinkStatus, NewPerson, Person, PersonId};
use super::GraphError;
use crate::ugraph::UGraph;

/// The live publicly knowable graph: people plus their typed, confirmable links.
///
/// Every mutation validates fully before touching state, so a returned error
/// leaves the graph unchanged.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct AtlasGraph {
    people: BTreeMap<PersonId, Person>,
    links: BTreeMap<LinkId, Link>,
    pairs: HashMap<(PersonId, PersonId), LinkId>,
    adjacency: BTreeMap<PersonId, BTreeSet<PersonId>>,
    next_person: u64,
    next_link: u64,
}

/// A person's immediate network, without the person themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EgoView {
    pub subject: PersonId,
    pub neighbors: Vec<Person>,
    pub links: Vec<EgoLink>,
    pub stats: EgoStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EgoLink {
    pub link: Link,
    /// Drawn faded: the subject has not confirmed their end yet.
    pub transparent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EgoStats {
    pub node_count: usize,
    pub link_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalNetwork {
    pub people: Vec<Person>,
    pub links: Vec<Link>,
}

impl AtlasGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn person_count(&self) -> usize {
        self.people.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn person(&self, id: PersonId) -> Option<&Person> {
        self.people.get(&id)
    }

    /// All people in id order.
    pub fn people(&self) -> impl Iterator<Item = &Person> + '_ {
        self.people.values()
    }

    pub fn link(&self, id: LinkId) -> Option<&Link> {
        self.links.get(&id)
    }

    /// All live links in id order.
    pub fn links(&self) -> impl Iterator<Item = &Link> + '_ {
        self.links.values()
    }

    pub fn link_between(&self, a: PersonId, b: PersonId) -> Option<&Link> {
        self.pairs
            .get(&pair_key(a, b))
            .and_then(|id| self.links.get(id))
    }

    /// Live neighbors of `id`, regardless of confirmation.
    pub fn neighbors(&self, id: PersonId) -> impl Iterator<Item = PersonId> + '_ {
        self.adjacency.get(&id).into_iter().flatten().copied()
    }

    pub fn neighbor_set(&self, id: PersonId) -> Option<&BTreeSet<PersonId>> {
        self.adjacency.get(&id)
    }

    pub fn degree(&self, id: PersonId) -> usize {
        self.adjacency.get(&id).map_or(0, BTreeSet::len)
    }

    fn require(&self, id: PersonId) -> Result<&Person, GraphError> {
        self.people.get(&id).ok_or(GraphError::UnknownPerson(id))
    }

    fn require_mut(&mut self, id: PersonId) -> Result<&mut Person, GraphError> {
        self.people.get_mut(&id).ok_or(GraphError::UnknownPerson(id))
    }

    /// Id the next `add_person` call will assign.
    pub fn next_person_id(&self) -> PersonId {
        PersonId(self.next_person + 1)
    }

    /// Id the next `create_link` call will assign.
    pub fn next_link_id(&self) -> LinkId {
        LinkId(self.next_link + 1)
    }

    pub fn add_person(&mut self, entry: NewPerson) -> Result<PersonId, GraphError> {
        if entry.display_name.trim().is_empty() {
            return Err(GraphError::EmptyName);
        }
        self.next_person += 1;
        let id = PersonId(self.next_person);
        self.people.insert(id, Person::from_entry(id, entry));
        self.adjacency.insert(id, BTreeSet::new());
        Ok(id)
    }

    /// Marks `id` as someone who has used the atlas. Returns whether it changed.
    pub fn mark_registered(&mut self, id: PersonId) -> Result<bool, GraphError> {
        let person = self.require_mut(id)?;
        let changed = !person.is_registered;
        person.is_registered = true;
        Ok(changed)
    }

    /// Removes a person's office placement. Returns whether one was present.
    pub fn clear_office(&mut self, id: PersonId) -> Result<bool, GraphError> {
        Ok(self.require_mut(id)?.office.take().is_some())
    }

    /// Creates a link. The creator's own endpoint starts confirmed; links
    /// made by third parties or the system start with both ends unconfirmed.
    ///
    /// `created_at` is truncated to whole seconds.
    pub fn create_link(
        &mut self,
        actor: Actor,
        a: PersonId,
        b: PersonId,
        link_type: &str,
        created_at: DateTime<Utc>,
    ) -> Result<Link, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.require(a)?;
        self.require(b)?;
        if let Actor::Person(creator) = actor {
            self.require(creator)?;
        }
        let link_type = link_type.trim();
        if link_type.is_empty() {
            return Err(GraphError::EmptyLinkType);
        }
        if let Some(&existing) = self.pairs.get(&pair_key(a, b)) {
            return Err(GraphError::DuplicateLink { a, b, existing });
        }

        self.next_link += 1;
        let link = Link {
            id: LinkId(self.next_link),
            a,
            b,
            link_type: link_type.to_owned(),
            created_by: actor,
            created_at: created_at.trunc_subsecs(0),
            a_confirmed: actor.is(a),
            b_confirmed: actor.is(b),
        };
        self.pairs.insert(link.pair(), link.id);
        self.adjacency.entry(a).or_default().insert(b);
        self.adjacency.entry(b).or_default().insert(a);
        self.links.insert(link.id, link.clone());
        Ok(link)
    }

    /// Sets the actor's endpoint flag. Idempotent; never unsets anything.
    pub fn confirm_link(&mut self, actor: PersonId, id: LinkId) -> Result<Link, GraphError> {
        let link = self.links.get_mut(&id).ok_or(GraphError::UnknownLink(id))?;
        if link.a == actor {
            link.a_confirmed = true;
        } else if link.b == actor {
            link.b_confirmed = true;
        } else {
            return Err(GraphError::Unauthorized {
                actor: actor.into(),
                link: id,
                action: "confirm",
            });
        }
        Ok(link.clone())
    }

    /// Removes a live link. Endpoints and the creator may delete.
    pub fn delete_link(&mut self, actor: Actor, id: LinkId) -> Result<Link, GraphError> {
        let link = self.links.get(&id).ok_or(GraphError::UnknownLink(id))?;
        let allowed = link.created_by == actor
            || actor.person().is_some_and(|person| link.touches(person));
        if !allowed {
            return Err(GraphError::Unauthorized {
                actor,
                link: id,
                action: "delete",
            });
        }
        let link = self.links.remove(&id).expect("checked above");
        self.pairs.remove(&link.pair());
        if let Some(set) = self.adjacency.get_mut(&link.a) {
            set.remove(&link.b);
        }
        if let Some(set) = self.adjacency.get_mut(&link.b) {
            set.remove(&link.a);
        }
        Ok(link)
    }

    /// The subject's network as `viewer` is allowed to see it.
    ///
    /// Subjects see every link touching them, faded until they confirm their
    /// end. Everyone else only sees fully confirmed links.
    pub fn ego_network(&self, viewer: PersonId, subject: PersonId) -> Result<EgoView, GraphError> {
        self.require(viewer)?;
        self.require(subject)?;
        let own = viewer == subject;

        let mut links = Vec::new();
        let mut neighbors = BTreeSet::new();
        for other in self.neighbors(subject) {
            let link = self.link_between(subject, other).expect("adjacency matches pairs");
            let visible = own || link.status() == LinkStatus::FullyConfirmed;
            if !visible {
                continue;
            }
            neighbors.insert(other);
            let transparent = own && link.confirmed_by(subject) == Some(false);
            links.push(EgoLink {
                link: link.clone(),
                transparent,
            });
        }

        for &u in &neighbors {
            for w in self.neighbors(u) {
                if w <= u || !neighbors.contains(&w) {
                    continue;
                }
                let link = self.link_between(u, w).expect("adjacency matches pairs");
                if link.status() == LinkStatus::FullyConfirmed {
                    links.push(EgoLink {
                        link: link.clone(),
                        transparent: false,
                    });
                }
            }
        }
        links.sort_by_key(|l| l.link.id);

        let neighbors: Vec<Person> = neighbors
            .into_iter()
            .map(|id| self.people[&id].clone())
            .collect();
        let stats = EgoStats {
            node_count: neighbors.len(),
            link_count: links.len(),
        };
        Ok(EgoView {
            subject,
            neighbors,
            links,
            stats,
        })
    }

    /// Everyone, plus either all live links or only the fully confirmed ones.
    pub fn global_network(&self, include_unconfirmed: bool) -> GlobalNetwork {
        GlobalNetwork {
            people: self.people.values().cloned().collect(),
            links: self
                .links
                .values()
                .filter(|l| include_unconfirmed || l.status() == LinkStatus::FullyConfirmed)
                .cloned()
                .collect(),
        }
    }

    /// Dense index graph over all people (in id order) for the numeric algorithms.
    pub fn index_graph(&self, include_unconfirmed: bool) -> (UGraph, Vec<PersonId>) {
        let ids: Vec<PersonId> = self.people.keys().copied().collect();
        self.subgraph(&ids, include_unconfirmed)
    }

    /// Index graph induced by `ids` (node `i` is `ids[i]`).
    pub fn subgraph(&self, ids: &[PersonId], include_unconfirmed: bool) -> (UGraph, Vec<PersonId>) {
        let index: HashMap<PersonId, usize> = ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut graph = UGraph::new(ids.len());
        for link in self.links.values() {
            if !include_unconfirmed && link.status() != LinkStatus::FullyConfirmed {
                continue;
            }
            if let (Some(&u), Some(&v)) = (index.get(&link.a), index.get(&link.b)) {
                graph.add_edge(u, v);
            }
        }
        (graph, ids.to_vec())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    people: Vec<Person>,
    links: Vec<Link>,
    next_person: u64,
    next_link: u64,
}

impl From<AtlasGraph> for GraphRepr {
    fn from(graph: AtlasGraph) -> Self {
        GraphRepr {
            people: graph.people.into_values().collect(),
            links: graph.links.into_values().collect(),
            next_person: graph.next_person,
            next_link: graph.next_link,
        }
    }
}

impl TryFrom<GraphRepr> for AtlasGraph {
    type Error = String;

    fn try_from(repr: GraphRepr) -> Result<Self, Self::Error> {
        let mut graph = AtlasGraph {
            next_person: repr.next_person,
            next_link: repr.next_link,
            ..Default::default()
        };
        for person in repr.people {
            if person.id.0 > repr.next_person {
                return Err(format!("person id {} beyond id counter", person.id));
            }
            graph.adjacency.insert(person.id, BTreeSet::new());
            graph.people.insert(person.id, person);
        }
        for link in repr.links {
            if link.id.0 > repr.next_link {
                return Err(format!("link id {} beyond id counter", link.id));
            }
            if link.a == link.b || !graph.people.contains_key(&link.a) || !graph.people.contains_key(&link.b) {
                return Err(format!("link {} has invalid endpoints", link.id));
            }
            if graph.pairs.insert(link.pair(), link.id).is_some() {
                return Err(format!("link {} duplicates a live pair", link.id));
            }
            graph.adjacency.entry(link.a).or_default().insert(link.b);
            graph.adjacency.entry(link.b).or_default().insert(link.a);
            graph.links.insert(link.id, link);
        }
        Ok(graph)
    }
}
