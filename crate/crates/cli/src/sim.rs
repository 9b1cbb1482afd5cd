//! Coverage simulations on synthetic networks.

use std::fmt::Write as _;

use atlas_core::sim::{coverage_curve, generate_clustered, generate_scale_free, SimPolicy, Strategy};
use atlas_core::{CoveragePoint64, UGraph};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    /// Preferential attachment, `m` links per new node.
    ScaleFree { n: usize, m: usize },
    /// Ring lattice of degree `k` with rewiring probability `p`.
    Clustered { n: usize, k: usize, p: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimRequest {
    pub model: Model,
    pub strategy: Strategy,
    pub policy: SimPolicy,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

pub fn build_graph(model: Model, seed: u64) -> Result<UGraph, CliError> {
    let g = match model {
        Model::ScaleFree { n, m } => generate_scale_free(n, m, seed),
        Model::Clustered { n, k, p } => generate_clustered(n, k, p, seed),
    };
    g.map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn run(req: &SimRequest) -> Result<Vec<CoveragePoint64>, CliError> {
    let graph = build_graph(req.model, req.seed)?;
    coverage_curve(&graph, req.strategy, req.policy, &req.ks, req.trials, req.seed)
        .map_err(|e| CliError::Invalid(e.to_string()))
}

/// `k<TAB>mean<TAB>stddev`, one line per point.
pub fn to_tsv(points: &[CoveragePoint64]) -> String {
    let mut out = String::new();
    for p in points {
        let _ = writeln!(out, "{}\t{:.6}\t{:.6}", p.participants, p.coverage, p.stddev);
    }
    out
}
