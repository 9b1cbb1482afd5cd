use std::collections::BTreeMap;

use crate::scalar::Scalar;
use crate::ugraph::UGraph;

/// Undirected weighted graph with self-loops, as produced by community
/// aggregation. A self-loop of weight `w` stands for `w` internal edges and
/// adds `2w` to its node's degree.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<F> {
    adjacency: Vec<Vec<(usize, F)>>,
    self_loops: Vec<F>,
    total_weight: F,
}

impl<F: Scalar> WeightedGraph<F> {
    pub fn new(node_count: usize) -> Self {
        WeightedGraph {
            adjacency: vec![Vec::new(); node_count],
            self_loops: vec![F::zero(); node_count],
            total_weight: F::zero(),
        }
    }

    /// Unit weight per edge.
    pub fn from_ugraph(graph: &UGraph) -> Self {
        let mut out = Self::new(graph.node_count());
        for (u, v) in graph.edges() {
            out.adjacency[u].push((v, F::one()));
            out.adjacency[v].push((u, F::one()));
        }
        out.total_weight = F::of_usize(graph.edge_count());
        out
    }

    /// Adds weight `w` to edge `{u, v}` (a self-loop when `u == v`).
    pub fn add_weight(&mut self, u: usize, v: usize, w: F) {
        if u == v {
            self.self_loops[u] += w;
        } else {
            for (from, to) in [(u, v), (v, u)] {
                match self.adjacency[from].iter_mut().find(|(n, _)| *n == to) {
                    Some((_, existing)) => *existing += w,
                    None => self.adjacency[from].push((to, w)),
                }
            }
        }
        self.total_weight += w;
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Sum of all edge weights, `m`.
    pub fn total_weight(&self) -> F {
        self.total_weight
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, F)] {
        &self.adjacency[u]
    }

    pub fn self_loop(&self, u: usize) -> F {
        self.self_loops[u]
    }

    pub fn degree(&self, u: usize) -> F {
        self.adjacency[u]
            .iter()
            .fold(self.self_loops[u] + self.self_loops[u], |acc, &(_, w)| acc + w)
    }

    /// `Q = Σ_c [ in_c / m − (tot_c / 2m)² ]` for node labels `0..k`.
    /// Defined as 0 for a graph without edges.
    pub fn modularity(&self, labels: &[usize]) -> F {
        assert_eq!(labels.len(), self.node_count(), "one label per node");
        let m = self.total_weight;
        if m <= F::zero() {
            return F::zero();
        }
        let k = labels.iter().max().map_or(0, |&c| c + 1);
        let mut internal = vec![F::zero(); k];
        let mut total = vec![F::zero(); k];
        for u in 0..self.node_count() {
            let c = labels[u];
            internal[c] += self.self_loops[u];
            total[c] += self.degree(u);
            for &(v, w) in &self.adjacency[u] {
                if v > u && labels[v] == c {
                    internal[c] += w;
                }
            }
        }
        let two_m = m + m;
        internal
            .into_iter()
            .zip(total)
            .fold(F::zero(), |q, (e, d)| q + e / m - (d / two_m) * (d / two_m))
    }

    /// Collapses each community of `labels` (dense `0..k`) into one node.
    /// Internal edges become self-loop weight; parallel edges are summed.
    pub fn aggregate(&self, labels: &[usize]) -> WeightedGraph<F> {
        let k = labels.iter().max().map_or(0, |&c| c + 1);
        let mut loops = vec![F::zero(); k];
        let mut between: BTreeMap<(usize, usize), F> = BTreeMap::new();
        for u in 0..self.node_count() {
            let cu = labels[u];
            loops[cu] += self.self_loops[u];
            for &(v, w) in &self.adjacency[u] {
                if v <= u {
                    continue;
                }
                let cv = labels[v];
                if cu == cv {
                    loops[cu] += w;
                } else {
                    let key = if cu < cv { (cu, cv) } else { (cv, cu) };
                    *between.entry(key).or_insert_with(F::zero) += w;
                }
            }
        }
        let mut out = WeightedGraph::new(k);
        for (c, w) in loops.into_iter().enumerate() {
            out.self_loops[c] = w;
            out.total_weight += w;
        }
        for ((c, d), w) in between {
            out.adjacency[c].push((d, w));
            out.adjacency[d].push((c, w));
            out.total_weight += w;
        }
        out
    }
}
