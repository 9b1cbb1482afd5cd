use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Assignment of nodes `0..n` to communities `0..k`, every index in use.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Builds a partition from arbitrary labels, renumbering communities
    /// densely in order of first appearance.
    pub fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut index: HashMap<L, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = index.len();
                *index.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            count: index.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    /// Everyone in one community (or nothing, for `n = 0`).
    pub fn whole(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Sorted member lists, indexed by community.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.assignment {
            out[c] += 1;
        }
        out
    }
}
