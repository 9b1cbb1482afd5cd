use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SimError;
use crate::ugraph::UGraph;

/// Preferential attachment: a complete graph on `m + 1` nodes, then each new
/// node links to `m` distinct existing nodes chosen with probability
/// proportional to degree. Yields `C(m+1, 2) + (n − m − 1)·m` edges.
pub fn generate_scale_free(n: usize, m: usize, seed: u64) -> Result<UGraph, SimError> {
    if m == 0 || n <= m {
        return Err(SimError::InvalidParams(format!(
            "scale-free model needs n > m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = UGraph::new(n);
    // Each node appears once per incident edge end.
    let mut ends: Vec<usize> = Vec::with_capacity(2 * (m * (m + 1) / 2 + (n - m - 1) * m));
    for u in 0..=m {
        for v in (u + 1)..=m {
            graph.add_edge(u, v);
            ends.extend([u, v]);
        }
    }
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.gen_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            graph.add_edge(v, t);
            ends.extend([v, t]);
        }
    }
    Ok(graph)
}

/// Small-world model: a ring where each node links to its `k` nearest
/// neighbors, then every lattice edge has its far end rewired to a uniform
/// random node with probability `p_rewire`. Rewiring never creates self-loops
/// or duplicates, so the graph keeps `n·k/2` edges.
pub fn generate_clustered(n: usize, k: usize, p_rewire: f64, seed: u64) -> Result<UGraph, SimError> {
    if k < 2 || !k.is_multiple_of(2) || n <= k {
        return Err(SimError::InvalidParams(format!(
            "clustered model needs even k >= 2 and n > k, got n={n}, k={k}"
        )));
    }
    if !(0.0..=1.0).contains(&p_rewire) {
        return Err(SimError::InvalidParams(format!(
            "rewiring probability must be in [0, 1], got {p_rewire}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = UGraph::new(n);
    for u in 0..n {
        for j in 1..=k / 2 {
            graph.add_edge(u, (u + j) % n);
        }
    }
    let mut free: Vec<usize> = Vec::with_capacity(n);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.gen_bool(p_rewire) || !graph.has_edge(u, v) {
                continue;
            }
            free.clear();
            free.extend((0..n).filter(|&w| w != u && !graph.has_edge(u, w)));
            if let Some(&w) = free.choose(&mut rng) {
                graph.remove_edge(u, v);
                graph.add_edge(u, w);
            }
        }
    }
    Ok(graph)
}
