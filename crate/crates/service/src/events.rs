//! Logged user actions and the records of the append-only log.

use atlas_core::{Actor, Link, LinkId, Person, PersonId};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::AtlasError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    ViewSwitch,
    Search,
    AddNode,
    AddLink,
    ConfirmLink,
    DeleteLink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum View {
    Splash,
    Ego,
    Physical,
    Global,
}

impl View {
    pub const ALL: [View; 4] = [View::Splash, View::Ego, View::Physical, View::Global];

    /// The view a session starts in.
    pub const DEFAULT: View = View::Ego;
}

/// How the person on the other end of a new link was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AddSource {
    Suggestion,
    Search,
    Physical,
}

impl AddSource {
    pub const ALL: [AddSource; 3] = [AddSource::Suggestion, AddSource::Search, AddSource::Physical];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Person(PersonId),
    Link(LinkId),
}

/// Graph mutation carried by an event, enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum GraphChange {
    PersonAdded { person: Person },
    LinkCreated { link: Link },
    LinkConfirmed { link: LinkId },
    LinkDeleted { link: LinkId },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionEvent {
    pub actor: Actor,
    pub kind: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view: Option<View>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<AddSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    pub timestamp: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub change: Option<GraphChange>,
}

impl ActionEvent {
    /// An event with only the required fields set.
    pub fn new(actor: Actor, kind: ActionKind, timestamp: DateTime<Utc>) -> Self {
        ActionEvent {
            actor,
            kind,
            view: None,
            source: None,
            target: None,
            query: None,
            timestamp,
            change: None,
        }
    }

    pub fn with_view(mut self, view: View) -> Self {
        self.view = Some(view);
        self
    }

    pub fn with_source(mut self, source: AddSource) -> Self {
        self.source = Some(source);
        self
    }

    pub fn with_query(mut self, query: impl Into<String>) -> Self {
        self.query = Some(query.into());
        self
    }

    /// Checks the field invariants of each kind.
    ///
    /// `source` is only allowed on `AddLink`; `view` is required for
    /// `ViewSwitch` and for links added by a person. Graph-changing kinds must
    /// carry the matching change.
    pub fn validate(&self) -> Result<(), AtlasError> {
        let fail = |msg: &str| Err(AtlasError::Validation(format!("{:?} event: {msg}", self.kind)));
        if self.source.is_some() && self.kind != ActionKind::AddLink {
            return fail("only link additions carry a source");
        }
        if self.kind == ActionKind::ViewSwitch && self.view.is_none() {
            return fail("a view switch must name the view");
        }
        if self.kind == ActionKind::AddLink && self.view.is_none() && self.actor != Actor::System {
            return fail("links added by people must name the view");
        }
        if self.kind == ActionKind::Search && self.query.is_none() {
            return fail("a search must carry its query");
        }
        let change_ok = matches!(
            (&self.kind, &self.change),
            (ActionKind::ViewSwitch | ActionKind::Search, None)
                | (ActionKind::AddNode, Some(GraphChange::PersonAdded { .. }))
                | (ActionKind::AddLink, Some(GraphChange::LinkCreated { .. }))
                | (ActionKind::ConfirmLink, Some(GraphChange::LinkConfirmed { .. }))
                | (ActionKind::DeleteLink, Some(GraphChange::LinkDeleted { .. }))
        );
        if !change_ok {
            return fail("graph change does not match the event kind");
        }
        if self.kind == ActionKind::ConfirmLink && self.actor == Actor::System {
            return fail("only people confirm links");
        }
        Ok(())
    }
}

/// Imported floor image and its pixel dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorPlan {
    pub floor_id: String,
    pub name: String,
    pub image_ref: String,
    pub width: f64,
    pub height: f64,
}

impl FloorPlan {
    pub fn validate(&self) -> Result<(), AtlasError> {
        if self.floor_id.trim().is_empty() {
            return Err(AtlasError::Validation("floor id must not be empty".into()));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.width) || !positive(self.height) {
            return Err(AtlasError::Validation(format!(
                "floor {} must have positive dimensions, got {}x{}",
                self.floor_id, self.width, self.height
            )));
        }
        Ok(())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width).contains(&x) && (0.0..=self.height).contains(&y)
    }
}

/// One entry of the append-only log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LogRecord {
    Action(ActionEvent),
    Floors { floors: Vec<FloorPlan> },
    OfficeCleared { person: PersonId },
}
