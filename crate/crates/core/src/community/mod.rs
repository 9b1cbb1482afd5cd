//! Community detection by modularity maximization, and coloring of the result.

mod louvain;
mod partition;
mod weighted;

use std::collections::BTreeMap;

pub use louvain::louvain;
pub use partition::Partition;
pub use weighted::WeightedGraph;

use crate::scalar::Scalar;
use crate::ugraph::UGraph;

/// Modularity of `partition` on an unweighted simple graph; 0 when there are no edges.
pub fn modularity<F: Scalar>(graph: &UGraph, partition: &Partition) -> F {
    WeightedGraph::<F>::from_ugraph(graph).modularity(partition.assignment())
}

/// Palette slot per community: largest community first, wrapping around the palette.
/// Equal sizes are ordered by community index.
pub fn color_assignment(partition: &Partition, palette_size: usize) -> BTreeMap<usize, usize> {
    let palette_size = palette_size.max(1);
    let sizes = partition.sizes();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&x, &y| sizes[y].cmp(&sizes[x]).then(x.cmp(&y)));
    order
        .into_iter()
        .enumerate()
        .map(|(rank, community)| (community, rank % palette_size))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_graph_community_scores_zero() {
        let g = UGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let q: f64 = modularity(&g, &Partition::whole(4));
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn triangle_singletons() {
        let g = UGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let q: f64 = modularity(&g, &Partition::singletons(3));
        assert!((q + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn edgeless_modularity_is_zero() {
        let q: f64 = modularity(&UGraph::new(3), &Partition::singletons(3));
        assert_eq!(q, 0.0);
    }

    #[test]
    fn colors_by_size_and_wrap() {
        let p = Partition::from_labels(&[0, 1]);
        assert_eq!(color_assignment(&p, 8), BTreeMap::from([(0, 0), (1, 1)]));

        let labels: Vec<usize> = (0..10).collect();
        let colors = color_assignment(&Partition::from_labels(&labels), 8);
        assert_eq!(colors[&8], 0);
        assert_eq!(colors[&9], 1);

        let p = Partition::from_labels(&[0, 1, 1, 2, 2, 2]);
        assert_eq!(color_assignment(&p, 8), BTreeMap::from([(2, 0), (1, 1), (0, 2)]));
        assert!(color_assignment(&Partition::default(), 8).is_empty());
    }
}
