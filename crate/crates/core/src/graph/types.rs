use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Link type assigned when the caller does not name one.
pub const DEFAULT_LINK_TYPE: &str = "interaction";

/// Stable identifier of a community member. Never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PersonId(pub u64);

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Stable identifier of a link. Never reused, even after deletion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub u64);

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whoever performs a mutation: a member, or the system itself (imports).
///
/// Serialized as the person id, or the string `"system"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Actor {
    System,
    Person(PersonId),
}

impl Actor {
    pub fn person(self) -> Option<PersonId> {
        match self {
            Actor::Person(id) => Some(id),
            Actor::System => None,
        }
    }

    pub fn is(self, id: PersonId) -> bool {
        self == Actor::Person(id)
    }
}

impl From<PersonId> for Actor {
    fn from(id: PersonId) -> Self {
        Actor::Person(id)
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::System => f.write_str("system"),
            Actor::Person(id) => write!(f, "person {id}"),
        }
    }
}

impl Serialize for Actor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Actor::System => serializer.serialize_str("system"),
            Actor::Person(id) => serializer.serialize_u64(id.0),
        }
    }
}

impl<'de> Deserialize<'de> for Actor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Id(u64),
            Name(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Id(id) => Ok(Actor::Person(PersonId(id))),
            Repr::Name(name) if name == "system" => Ok(Actor::System),
            Repr::Name(other) => Err(serde::de::Error::custom(format!(
                "expected a person id or \"system\", got {other:?}"
            ))),
        }
    }
}

/// Office position on an imported floor plan, in pixels of the floor image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OfficeLocation {
    pub floor_id: String,
    pub x: f64,
    pub y: f64,
}

/// Person fields supplied by whoever adds someone to the atlas.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NewPerson {
    pub display_name: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avatar_ref: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub office: Option<OfficeLocation>,
    /// Key used to join import files; not shown to users.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_id: Option<String>,
}

impl NewPerson {
    pub fn new(display_name: impl Into<String>, group: impl Into<String>) -> Self {
        NewPerson {
            display_name: display_name.into(),
            group: group.into(),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Person {
    pub id: PersonId,
    pub display_name: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avatar_ref: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub office: Option<OfficeLocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_id: Option<String>,
    /// Set once the person has acted in the atlas themselves.
    #[serde(default)]
    pub is_registered: bool,
}

impl Person {
    pub(crate) fn from_entry(id: PersonId, entry: NewPerson) -> Self {
        Person {
            id,
            display_name: entry.display_name,
            group: entry.group,
            avatar_ref: entry.avatar_ref,
            office: entry.office,
            external_id: entry.external_id,
            is_registered: false,
        }
    }
}

/// Confirmation state of a link, derived from its two endpoint flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Unconfirmed,
    HalfConfirmed,
    FullyConfirmed,
}

/// An undirected connection between two people.
///
/// `a` and `b` are stored in the order the creator supplied them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub id: LinkId,
    pub a: PersonId,
    pub b: PersonId,
    pub link_type: String,
    pub created_by: Actor,
    pub created_at: DateTime<Utc>,
    pub a_confirmed: bool,
    pub b_confirmed: bool,
}

impl Link {
    pub fn status(&self) -> LinkStatus {
        link_status(self.a_confirmed, self.b_confirmed)
    }

    pub fn touches(&self, id: PersonId) -> bool {
        self.a == id || self.b == id
    }

    /// The endpoint opposite `id`, if `id` is an endpoint.
    pub fn other(&self, id: PersonId) -> Option<PersonId> {
        if self.a == id {
            Some(self.b)
        } else if self.b == id {
            Some(self.a)
        } else {
            None
        }
    }

    /// Confirmation flag of endpoint `id`, if `id` is an endpoint.
    pub fn confirmed_by(&self, id: PersonId) -> Option<bool> {
        if self.a == id {
            Some(self.a_confirmed)
        } else if self.b == id {
            Some(self.b_confirmed)
        } else {
            None
        }
    }

    /// Whether the creator was neither endpoint (includes imports).
    pub fn is_third_party(&self) -> bool {
        !(self.created_by.is(self.a) || self.created_by.is(self.b))
    }

    pub fn pair(&self) -> (PersonId, PersonId) {
        pair_key(self.a, self.b)
    }
}

pub fn link_status(a_confirmed: bool, b_confirmed: bool) -> LinkStatus {
    match (a_confirmed, b_confirmed) {
        (false, false) => LinkStatus::Unconfirmed,
        (true, true) => LinkStatus::FullyConfirmed,
        _ => LinkStatus::HalfConfirmed,
    }
}

pub(crate) fn pair_key(a: PersonId, b: PersonId) -> (PersonId, PersonId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
