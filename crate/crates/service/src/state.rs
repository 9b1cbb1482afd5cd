use std::collections::{BTreeMap, BTreeSet};

use atlas_core::{Actor, AtlasGraph, NewPerson, PersonId};
use serde::{Deserialize, Serialize};

use crate::events::{ActionEvent, FloorPlan, GraphChange, LogRecord};

/// Everything the log determines: the graph, the floor plans, and how many
/// records have been applied.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub graph: AtlasGraph,
    pub floors: BTreeMap<String, FloorPlan>,
    /// Number of log records applied.
    pub version: u64,
}

impl State {
    /// People who have acted in the atlas themselves.
    pub fn registered(&self) -> BTreeSet<PersonId> {
        self.graph.people().filter(|p| p.is_registered).map(|p| p.id).collect()
    }

    /// Offices that do not sit on a known floor or fall outside its bounds.
    pub fn misplaced_offices(&self) -> Vec<PersonId> {
        self.graph
            .people()
            .filter(|p| {
                p.office.as_ref().is_some_and(|o| {
                    self.floors.get(&o.floor_id).is_none_or(|f| !f.contains(o.x, o.y))
                })
            })
            .map(|p| p.id)
            .collect()
    }

    /// Re-applies one log record, checking that it reproduces what was
    /// recorded.
    pub fn replay(&mut self, record: &LogRecord) -> Result<(), String> {
        match record {
            LogRecord::Action(event) => self.replay_action(event)?,
            LogRecord::Floors { floors } => {
                for f in floors {
                    self.floors.insert(f.floor_id.clone(), f.clone());
                }
            }
            LogRecord::OfficeCleared { person } => {
                self.graph.clear_office(*person).map_err(|e| e.to_string())?;
            }
        }
        self.settle(record);
        Ok(())
    }

    /// Bookkeeping shared by live mutations and replay, run once the
    /// record's own change is in place: the acting person becomes registered
    /// and the version advances.
    pub(crate) fn settle(&mut self, record: &LogRecord) {
        if let LogRecord::Action(ActionEvent {
            actor: Actor::Person(p),
            ..
        }) = record
        {
            // The actor was checked to exist before the record was built.
            let _ = self.graph.mark_registered(*p);
        }
        self.version += 1;
    }

    /// Applies `record`'s bookkeeping and queues it for the log.
    pub(crate) fn push(&mut self, records: &mut Vec<LogRecord>, record: LogRecord) {
        self.settle(&record);
        records.push(record);
    }

    fn replay_action(&mut self, event: &ActionEvent) -> Result<(), String> {
        event.validate().map_err(|e| e.to_string())?;
        let graph = &mut self.graph;
        match &event.change {
            None => {}
            Some(GraphChange::PersonAdded { person }) => {
                let id = graph
                    .add_person(NewPerson {
                        display_name: person.display_name.clone(),
                        group: person.group.clone(),
                        avatar_ref: person.avatar_ref.clone(),
                        office: person.office.clone(),
                        external_id: person.external_id.clone(),
                    })
                    .map_err(|e| e.to_string())?;
                if id != person.id {
                    return Err(format!("person got id {id}, log says {}", person.id));
                }
            }
            Some(GraphChange::LinkCreated { link }) => {
                let made = graph
                    .create_link(link.created_by, link.a, link.b, &link.link_type, link.created_at)
                    .map_err(|e| e.to_string())?;
                if &made != link {
                    return Err(format!("link {} replayed as {made:?}", link.id));
                }
            }
            Some(GraphChange::LinkConfirmed { link }) => {
                let actor = event.actor.person().ok_or("system cannot confirm links")?;
                graph.confirm_link(actor, *link).map_err(|e| e.to_string())?;
            }
            Some(GraphChange::LinkDeleted { link }) => {
                graph.delete_link(event.actor, *link).map_err(|e| e.to_string())?;
            }
        }
        if let Actor::Person(p) = event.actor {
            if graph.person(p).is_none() {
                return Err(format!("actor {p} does not exist"));
            }
        }
        Ok(())
    }
}
