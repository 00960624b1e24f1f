use std::collections::{BTreeSet, HashMap};

use super::{ensure_valid, Adjacency, NodeId, NodeKind, PhyloNetwork};
use crate::{Error, Result};

/// Path-multiplicity vectors: entry `label - 1` of node `v` counts directed
/// paths from `v` to leaf `label`. Stored flat, `n` entries per node.
struct PathCounts {
    n: usize,
    counts: Vec<u128>,
}

impl PathCounts {
    fn compute(kinds: &[NodeKind], adj: &Adjacency, n: usize) -> Result<Self> {
        let mut counts = vec![0u128; kinds.len() * n];
        let order = adj
            .topological_order()
            .expect("validated networks are acyclic");
        for &v in order.iter().rev() {
            if let NodeKind::Leaf { label } = kinds[v] {
                counts[v * n + label as usize - 1] = 1;
            }
            for &c in &adj.children[v] {
                for i in 0..n {
                    let sum = counts[v * n + i].checked_add(counts[c * n + i]);
                    counts[v * n + i] = sum.ok_or_else(|| {
                        Error::ResourceLimit("path count exceeds 128 bits".into())
                    })?;
                }
            }
        }
        Ok(PathCounts { n, counts })
    }

    fn of(&self, v: NodeId) -> &[u128] {
        &self.counts[v * self.n..(v + 1) * self.n]
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: u128) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn role(kind: NodeKind) -> u8 {
    match kind {
        NodeKind::Root => 0,
        NodeKind::Reticulation => 1,
        _ => 2,
    }
}

/// Code of a valid network given its adjacency.
pub(crate) fn code_of(kinds: &[NodeKind], adj: &Adjacency) -> Result<Vec<u8>> {
    let n = kinds.iter().filter(|k| k.is_leaf()).count();
    let paths = PathCounts::compute(kinds, adj, n)?;
    let keys: Vec<Vec<u8>> = (0..kinds.len())
        .map(|v| {
            let mut key = vec![role(kinds[v])];
            for &c in paths.of(v) {
                push_varint(&mut key, c);
            }
            key
        })
        .collect();
    let mut pairs: Vec<Vec<u8>> = Vec::with_capacity(kinds.len() + n);
    for (p, children) in adj.children.iter().enumerate() {
        for &c in children {
            let mut pair = keys[p].clone();
            pair.extend_from_slice(&keys[c]);
            pairs.push(pair);
        }
    }
    pairs.sort_unstable();
    let mut code = Vec::with_capacity(4 + pairs.iter().map(Vec::len).sum::<usize>());
    code.extend((n as u32).to_le_bytes());
    for pair in pairs {
        code.extend(pair);
    }
    Ok(code)
}

fn read_varint(code: &[u8], at: &mut usize) -> u128 {
    let mut x = 0u128;
    let mut shift = 0;
    loop {
        let byte = code[*at];
        *at += 1;
        x |= u128::from(byte & 0x7f) << shift;
        if byte & 0x80 == 0 {
            return x;
        }
        shift += 7;
    }
}

/// Rebuilds a network from a code produced by [`code_of`]. Node ids follow
/// first appearance in the sorted edge list, so the root is node 0.
pub(crate) fn decode_code(code: &[u8]) -> PhyloNetwork {
    let n = u32::from_le_bytes(code[..4].try_into().expect("code header")) as usize;
    let mut at = 4;
    let mut ids: HashMap<&[u8], NodeId> = HashMap::new();
    // (role, first leaf with a nonzero path count)
    let mut info: Vec<(u8, u32)> = Vec::new();
    let mut edges = Vec::new();
    let mut has_child = Vec::new();
    while at < code.len() {
        let mut pair = [0; 2];
        for slot in &mut pair {
            let start = at;
            let role = code[at];
            at += 1;
            let mut first = 0;
            for i in 0..n {
                if read_varint(code, &mut at) != 0 && first == 0 {
                    first = i as u32 + 1;
                }
            }
            let key = &code[start..at];
            *slot = *ids.entry(key).or_insert_with(|| {
                info.push((role, first));
                has_child.push(false);
                info.len() - 1
            });
        }
        has_child[pair[0]] = true;
        edges.push((pair[0], pair[1]));
    }
    let nodes = info
        .iter()
        .zip(&has_child)
        .map(|(&(role, first), &inner)| match (role, inner) {
            (0, _) => NodeKind::Root,
            (1, _) => NodeKind::Reticulation,
            (_, true) => NodeKind::Tree,
            (_, false) => NodeKind::Leaf { label: first },
        })
        .collect();
    PhyloNetwork::new(nodes, edges)
}

/// A byte string equal for two tree-child networks exactly when they are
/// isomorphic as leaf-labeled networks.
///
/// Each node is keyed by its role (root, reticulation, other) and its
/// vector of path counts to every leaf. In a tree-child network two nodes
/// share a path-count vector only when one is a reticulation and the other
/// its child, so the key is unique per node and the sorted edge list over
/// keys determines the network.
pub fn canonical_code(net: &PhyloNetwork) -> Result<Vec<u8>> {
    ensure_valid(net)?;
    code_of(net.nodes(), &net.adjacency())
}

/// Labels of leaves reachable from `node` (including `node` itself).
pub fn descendant_set(net: &PhyloNetwork, node: NodeId) -> Result<BTreeSet<u32>> {
    ensure_valid(net)?;
    if node >= net.node_count() {
        return Err(Error::OutOfRange(format!(
            "node {node} not in 0..{}",
            net.node_count()
        )));
    }
    let adj = net.adjacency();
    let mut seen = vec![false; net.node_count()];
    let mut stack = vec![node];
    let mut labels = BTreeSet::new();
    seen[node] = true;
    while let Some(v) = stack.pop() {
        if let NodeKind::Leaf { label } = net.kind(v) {
            labels.insert(label);
        }
        for &c in &adj.children[v] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    Ok(labels)
}
