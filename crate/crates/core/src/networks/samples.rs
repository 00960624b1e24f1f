//! Small hand-built networks used by tests, benches and the CLI.

use super::{NodeKind, PhyloNetwork};

/// Builds a network from 1-based node numbers. Node 1 is the root,
/// `leaves` gives `(node, label)` pairs, and the remaining kinds follow from
/// degrees (indegree 2 means reticulation).
pub fn from_one_based(node_count: usize, leaves: &[(usize, u32)], edges: &[(usize, usize)]) -> PhyloNetwork {
    let mut indegree = vec![0; node_count];
    for &(_, c) in edges {
        indegree[c - 1] += 1;
    }
    let nodes = (0..node_count)
        .map(|i| {
            if i == 0 {
                NodeKind::Root
            } else if let Some(&(_, label)) = leaves.iter().find(|(v, _)| *v == i + 1) {
                NodeKind::Leaf { label }
            } else if indegree[i] == 2 {
                NodeKind::Reticulation
            } else {
                NodeKind::Tree
            }
        })
        .collect();
    let edges = edges.iter().map(|&(p, c)| (p - 1, c - 1)).collect();
    PhyloNetwork::new(nodes, edges)
}

/// Three leaves, two reticulations sharing the tree parent node 5.
pub fn non_tree_child() -> PhyloNetwork {
    from_one_based(
        10,
        &[(7, 2), (9, 1), (10, 3)],
        &[(1, 2), (2, 3), (2, 6), (3, 4), (3, 5), (4, 8), (5, 8), (5, 6), (4, 7), (8, 9), (6, 10)],
    )
}

/// Four leaves, two reticulations, five tree nodes.
pub fn tree_child() -> PhyloNetwork {
    from_one_based(
        12,
        &[(7, 2), (9, 1), (10, 3), (12, 4)],
        &[
            (1, 2), (2, 3), (2, 6), (3, 4), (3, 5), (4, 8), (5, 8), (5, 11),
            (11, 6), (11, 12), (4, 7), (8, 9), (6, 10),
        ],
    )
}

/// Four leaves, one reticulation. Free tree nodes are 1 and 7 (0-based).
pub fn one_reticulation() -> PhyloNetwork {
    from_one_based(
        10,
        &[(5, 3), (6, 1), (9, 4), (10, 2)],
        &[(1, 2), (2, 3), (3, 4), (4, 6), (3, 5), (2, 7), (7, 4), (7, 8), (8, 9), (8, 10)],
    )
}

/// [`one_reticulation`] after inserting a reticulation into the free edge
/// `7 -> 9` (0-based), drawn by hand.
pub fn one_reticulation_expanded() -> PhyloNetwork {
    from_one_based(
        12,
        &[(5, 3), (6, 1), (9, 4), (10, 2)],
        &[
            (1, 11), (11, 2), (2, 3), (3, 4), (4, 6), (3, 5), (2, 7), (7, 4),
            (7, 8), (8, 9), (8, 12), (12, 10), (11, 12),
        ],
    )
}

/// Four leaves and three reticulations. Its path components, in index
/// order, spell `21312|13|2|3`.
pub fn maximal() -> PhyloNetwork {
    from_one_based(
        14,
        &[(7, 1), (10, 2), (12, 3), (14, 4)],
        &[
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8), (5, 8),
            (8, 9), (9, 10), (9, 11), (4, 11), (11, 12), (2, 13), (6, 13), (13, 14),
        ],
    )
}
