//! People, confirmable links, and the visibility rules over them.

mod search;
mod store;
mod types;

use thiserror::Error;

pub use store::{AtlasGraph, EgoLink, EgoStats, EgoView, GlobalNetwork};
pub use types::{
    link_status, Actor, Link, LinkId, LinkStatus, NewPerson, OfficeLocation, Person, PersonId,
    DEFAULT_LINK_TYPE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("display name must not be empty")]
    EmptyName,
    #[error("link type must not be empty")]
    EmptyLinkType,
    #[error("person {0} cannot be linked to themselves")]
    SelfLoop(PersonId),
    #[error("unknown person {0}")]
    UnknownPerson(PersonId),
    #[error("unknown link {0}")]
    UnknownLink(LinkId),
    #[error("{a} and {b} are already linked by link {existing}")]
    DuplicateLink {
        a: PersonId,
        b: PersonId,
        existing: LinkId,
    },
    #[error("{actor} may not {action} link {link}")]
    Unauthorized {
        actor: Actor,
        link: LinkId,
        action: &'static str,
    },
}
