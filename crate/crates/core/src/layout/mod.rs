//! Force-directed layout: charged particles repel, edges act as springs,
//! and gravity pulls everything toward the center.

mod params;
mod sim;
mod svg;

use thiserror::Error;

pub use params::LayoutParams;
pub use sim::{init_layout, run_until, step, LayoutState};
pub use svg::{export_svg, PALETTE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("layout state has {state} nodes but the graph has {graph}")]
    NodeMismatch { state: usize, graph: usize },
    #[error("invalid layout parameters: {0}")]
    InvalidParams(String),
}
