use serde::{Deserialize, Serialize};

use super::{ensure_tree_child, NodeId, NodeKind, PhyloNetwork};
use crate::{Error, Result};

/// Decomposition of a maximal tree-child network (`k = n - 1`) into its
/// `n` path components, listed in index order.
///
/// Component 0 starts at the child of the root; every other component starts
/// at a reticulation. Each follows the unique non-reticulation child down to
/// a leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathComponentDecomposition {
    pub components: Vec<Vec<NodeId>>,
    /// Component index of each node; `None` only for the root.
    pub index_of: Vec<Option<usize>>,
}

impl PathComponentDecomposition {
    /// Position of `node` inside its component.
    pub fn position(&self, node: NodeId) -> Option<usize> {
        let c = self.index_of[node]?;
        self.components[c].iter().position(|&v| v == node)
    }
}

pub fn path_components(net: &PhyloNetwork) -> Result<PathComponentDecomposition> {
    let adj = ensure_tree_child(net)?;
    let kinds = net.nodes();
    let n = net.leaf_count();
    let k = net.reticulation_count();
    if k + 1 != n {
        return Err(Error::NotMaximal {
            leaves: n,
            reticulations: k,
            expected: n - 1,
        });
    }
    let root = net.root().expect("valid network has a root");

    // Raw components, before indexing.
    let starts: Vec<NodeId> = std::iter::once(adj.children[root][0])
        .chain((0..kinds.len()).filter(|&v| kinds[v].is_reticulation()))
        .collect();
    let mut raw: Vec<Vec<NodeId>> = Vec::with_capacity(n);
    let mut raw_of = vec![usize::MAX; kinds.len()];
    let mut pos = vec![0usize; kinds.len()];
    for &s in &starts {
        let id = raw.len();
        let mut path = Vec::new();
        let mut cur = s;
        loop {
            raw_of[cur] = id;
            pos[cur] = path.len();
            path.push(cur);
            match kinds[cur] {
                NodeKind::Leaf { .. } => break,
                NodeKind::Reticulation => cur = adj.children[cur][0],
                _ => {
                    let mut tree = adj.children[cur]
                        .iter()
                        .copied()
                        .filter(|&c| !kinds[c].is_reticulation());
                    cur = tree.next().expect("tree-child");
                    if tree.next().is_some() {
                        // Two tree children means more than one tree path.
                        return Err(Error::NotMaximal {
                            leaves: n,
                            reticulations: k,
                            expected: n - 1,
                        });
                    }
                }
            }
        }
        raw.push(path);
    }

    // Second parent of a reticulation: the descendant one when both parents
    // share a component, otherwise the one in the higher-indexed component.
    // A tree node parents at most one reticulation, so sort keys are distinct.
    let mut index = vec![usize::MAX; raw.len()];
    index[0] = 0;
    let mut next = 1;
    while next < raw.len() {
        let mut candidates: Vec<((usize, usize), usize)> = Vec::new();
        for (id, path) in raw.iter().enumerate().skip(1) {
            if index[id] != usize::MAX {
                continue;
            }
            let r = path[0];
            let (p, q) = (adj.parents[r][0], adj.parents[r][1]);
            let (ip, iq) = (index[raw_of[p]], index[raw_of[q]]);
            if ip == usize::MAX || iq == usize::MAX {
                continue;
            }
            let second = if ip == iq {
                if pos[p] > pos[q] {
                    p
                } else {
                    q
                }
            } else if ip > iq {
                p
            } else {
                q
            };
            let key = (index[raw_of[second]], pos[second]);
            candidates.push((key, id));
        }
        if candidates.is_empty() {
            return Err(Error::NotMaximal {
                leaves: n,
                reticulations: k,
                expected: n - 1,
            });
        }
        candidates.sort_unstable();
        for (_, id) in candidates {
            index[id] = next;
            next += 1;
        }
    }

    let mut components = vec![Vec::new(); raw.len()];
    let mut index_of = vec![None; kinds.len()];
    for (id, path) in raw.into_iter().enumerate() {
        for &v in &path {
            index_of[v] = Some(index[id]);
        }
        components[index[id]] = path;
    }
    Ok(PathComponentDecomposition {
        components,
        index_of,
    })
}
