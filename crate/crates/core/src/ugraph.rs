//! Compact undirected simple graph over dense node indices.

use serde::{Deserialize, Serialize};

/// Undirected simple graph on nodes `0..n`. Self-loops and parallel edges
/// are silently dropped by [`UGraph::add_edge`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UGraph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl UGraph {
    pub fn new(node_count: usize) -> Self {
        UGraph {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut graph = UGraph::new(node_count);
        for (u, v) in edges {
            graph.add_edge(u, v);
        }
        graph
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn add_node(&mut self) -> usize {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    /// Inserts `{u, v}`. Returns false for self-loops and existing edges.
    ///
    /// # Panics
    /// If either endpoint is out of range.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.node_count() && v < self.node_count(), "edge ({u}, {v}) out of range");
        if u == v {
            return false;
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => false,
            Err(at) => {
                self.adjacency[u].insert(at, v);
                let back = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(back, u);
                self.edge_count += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adjacency.get(u).map(|adj| adj.binary_search(&v)) {
            Some(Ok(at)) => {
                self.adjacency[u].remove(at);
                let back = self.adjacency[v].binary_search(&u).expect("symmetric adjacency");
                self.adjacency[v].remove(back);
                self.edge_count -= 1;
                true
            }
            _ => false,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|adj| adj.binary_search(&v).is_ok())
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    /// Every edge once as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }
}

/// Orders an undirected edge as `(min, max)`.
pub fn edge_key(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}
