//! Persistent service around the atlas graph: an append-only event log,
//! snapshots, interaction analytics and the HTTP API.

pub mod analytics;
mod atlas;
pub mod error;
pub mod events;
pub mod http;
pub mod payload;
pub mod state;
pub mod store;

pub use atlas::{Atlas, Clock, Config, FloorImport};
pub use error::AtlasError;
pub use events::{ActionEvent, ActionKind, AddSource, FloorPlan, GraphChange, LogRecord, Target, View};
pub use state::State;
