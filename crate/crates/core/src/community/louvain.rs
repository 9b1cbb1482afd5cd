use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Partition, WeightedGraph};
use crate::scalar::Scalar;
use crate::ugraph::UGraph;

/// Louvain modularity maximization.
///
/// Alternates local moving (each node, in a seed-shuffled order, joins the
/// neighboring community with the largest modularity gain) with aggregation of
/// communities into super-nodes, until a level produces no move. The number of
/// communities falls out of the optimization.
pub fn louvain<F: Scalar>(graph: &UGraph, seed: u64) -> Partition {
    let n = graph.node_count();
    if graph.edge_count() == 0 {
        return Partition::singletons(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = WeightedGraph::<F>::from_ugraph(graph);
    // Original node -> node of the current level.
    let mut membership: Vec<usize> = (0..n).collect();

    while let Some(labels) = local_moving(&level, &mut rng) {
        let dense = Partition::from_labels(&labels);
        for m in membership.iter_mut() {
            *m = dense.community_of(*m);
        }
        level = level.aggregate(dense.assignment());
    }
    Partition::from_labels(&membership)
}

/// One local-moving phase. Returns the community labels, or `None` when no
/// node changed community.
pub(crate) fn local_moving<F: Scalar>(graph: &WeightedGraph<F>, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = graph.node_count();
    let m = graph.total_weight();
    let two_m_sq = (m + m) * m;
    let threshold = F::gain_threshold();

    let degree: Vec<F> = (0..n).map(|u| graph.degree(u)).collect();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<F> = degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    // Scratch: weight from the current node into each community.
    let mut link_weight = vec![F::zero(); n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        let mut moved = false;
        for &u in &order {
            let home = community[u];
            let k = degree[u];
            for &(v, w) in graph.neighbors(u) {
                let c = community[v];
                if link_weight[c] == F::zero() {
                    touched.push(c);
                }
                link_weight[c] += w;
            }
            total[home] -= k;

            let gain = |c: usize, into: F| into / m - total[c] * k / two_m_sq;
            let mut best = home;
            let mut best_gain = gain(home, link_weight[home]);
            touched.sort_unstable();
            for &c in &touched {
                if c == home {
                    continue;
                }
                let g = gain(c, link_weight[c]);
                if g > best_gain + threshold {
                    best = c;
                    best_gain = g;
                }
            }

            total[best] += k;
            community[u] = best;
            if best != home {
                moved = true;
            }
            for &c in &touched {
                link_weight[c] = F::zero();
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    moved_any.then_some(community)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::modularity;

    fn two_triangles_bridged() -> UGraph {
        UGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    #[test]
    fn bridged_triangles_split() {
        for seed in 0..20 {
            let p = louvain::<f64>(&two_triangles_bridged(), seed);
            let mut members = p.members();
            members.sort();
            assert_eq!(members, vec![vec![0, 1, 2], vec![3, 4, 5]], "seed {seed}");
        }
    }

    #[test]
    fn single_edge_merges() {
        let p = louvain::<f64>(&UGraph::from_edges(2, [(0, 1)]), 1);
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn edgeless_graph_stays_singletons() {
        let p = louvain::<f64>(&UGraph::new(4), 3);
        assert_eq!(p, Partition::singletons(4));
        assert!(louvain::<f64>(&UGraph::new(0), 3).is_empty());
    }

    #[test]
    fn isolated_nodes_keep_their_own_community() {
        let g = UGraph::from_edges(5, [(0, 1), (1, 2), (0, 2)]);
        let p = louvain::<f64>(&g, 9);
        assert_eq!(p.community_count(), 3);
        assert_ne!(p.community_of(3), p.community_of(4));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = UGraph::from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0)]);
        assert_eq!(louvain::<f64>(&g, 5), louvain::<f64>(&g, 5));
    }

    #[test]
    fn works_in_single_precision() {
        let g = two_triangles_bridged();
        let p = louvain::<f32>(&g, 0);
        assert_eq!(p.community_count(), 2);
        let q: f32 = modularity(&g, &p);
        assert!(q > 0.35);
    }
}
