//! Headless drawings of the global and ego networks.

use std::collections::HashMap;

use atlas_core::community::louvain;
use atlas_core::layout::{export_svg, init_layout, run_until, LayoutParams};
use atlas_core::{AtlasGraph, PersonId, UGraph};

use crate::error::CliError;

pub const NODE_RADIUS: f64 = 6.0;
pub const MAX_ITERATIONS: usize = 2000;
pub const SETTLE_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Global,
    /// A person's own network without their own node.
    Ego(PersonId),
}

/// The graph a scope draws: every live link for the global network; for an
/// ego network, the person's connections and the links among them.
pub fn scope_graph(graph: &AtlasGraph, scope: Scope) -> Result<UGraph, CliError> {
    match scope {
        Scope::Global => Ok(graph.index_graph(true).0),
        Scope::Ego(person) => {
            let view = graph
                .ego_network(person, person)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            let index: HashMap<PersonId, usize> =
                view.neighbors.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
            let mut g = UGraph::new(index.len());
            for l in &view.links {
                if let (Some(&u), Some(&v)) = (index.get(&l.link.a), index.get(&l.link.b)) {
                    g.add_edge(u, v);
                }
            }
            Ok(g)
        }
    }
}

/// Lays out and colors a scope, returning the SVG document. The same graph
/// and seed always give the same bytes.
pub fn render(graph: &AtlasGraph, scope: Scope, seed: u64) -> Result<String, CliError> {
    let g = scope_graph(graph, scope)?;
    let params = LayoutParams::<f64>::default();
    let start = init_layout(&g, seed, &params);
    let state = run_until(&start, &g, &params, MAX_ITERATIONS, SETTLE_TOLERANCE)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let partition = louvain::<f64>(&g, seed);
    Ok(export_svg(&g, &state.positions, &partition, NODE_RADIUS))
}
