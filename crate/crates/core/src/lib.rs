//! Core model and algorithms for crowdsourced mapping of a community's
//! social network.
//!
//! * [`graph`]: people, links with per-endpoint confirmation, ego and global views.
//! * [`recommend`]: mutual-connection suggestions.
//! * [`community`]: Louvain community detection and modularity.
//! * [`layout`]: force-directed layout and SVG export.
//! * [`sim`]: synthetic networks and participant coverage simulation.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod community;
pub mod graph;
pub mod layout;
pub mod recommend;
pub mod scalar;
pub mod sim;
pub mod ugraph;

pub use graph::{Actor, AtlasGraph, GraphError, Link, LinkId, LinkStatus, NewPerson, Person, PersonId};
pub use scalar::Scalar;
pub use ugraph::UGraph;

pub type WeightedGraph64 = community::WeightedGraph<f64>;
pub type LayoutParams64 = layout::LayoutParams<f64>;
pub type LayoutState64 = layout::LayoutState<f64>;
pub type CoveragePoint64 = sim::CoveragePoint<f64>;
