//! Rooted binary leaf-labeled phylogenetic networks.
//!
//! A [`PhyloNetwork`] is a plain node/edge list: node `i` has kind
//! `nodes[i]` and edges are `(parent, child)` pairs. Nothing is enforced at
//! construction time so that arbitrary candidate graphs can be handed to
//! [`validate_network`], which reports every violated rule as data.
//!
//! Everything else in this module requires a valid network and returns
//! [`Error::InvalidNetwork`] otherwise.

mod canonical;
mod components;
pub mod format;
pub mod samples;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use canonical::{canonical_code, descendant_set};
pub use components::{path_components, PathComponentDecomposition};

pub(crate) use canonical::{code_of, decode_code};

pub type NodeId = usize;
pub type Edge = (NodeId, NodeId);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeKind {
    Root,
    Leaf { label: u32 },
    Tree,
    Reticulation,
}

impl NodeKind {
    pub fn is_reticulation(self) -> bool {
        self == NodeKind::Reticulation
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, NodeKind::Leaf { .. })
    }

    fn degrees(self) -> (usize, usize) {
        match self {
            NodeKind::Root => (0, 1),
            NodeKind::Leaf { .. } => (1, 0),
            NodeKind::Tree => (1, 2),
            NodeKind::Reticulation => (2, 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhyloNetwork {
    nodes: Vec<NodeKind>,
    edges: Vec<Edge>,
}

impl PhyloNetwork {
    pub fn new(nodes: Vec<NodeKind>, edges: Vec<Edge>) -> Self {
        PhyloNetwork { nodes, edges }
    }

    /// The smallest network: a root above the single leaf `1`.
    pub fn single_leaf() -> Self {
        PhyloNetwork::new(vec![NodeKind::Root, NodeKind::Leaf { label: 1 }], vec![(0, 1)])
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.nodes[node]
    }

    pub fn root(&self) -> Option<NodeId> {
        self.nodes.iter().position(|k| *k == NodeKind::Root)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|k| k.is_leaf()).count()
    }

    pub fn reticulation_count(&self) -> usize {
        self.nodes.iter().filter(|k| k.is_reticulation()).count()
    }

    /// Node carrying leaf label `label`, if any.
    pub fn leaf(&self, label: u32) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|k| *k == NodeKind::Leaf { label })
    }

    /// Replaces every leaf label, assigning `1..=n` in increasing node-id
    /// order. Used to compare leaf-unlabeled shapes.
    pub fn relabel_leaves_by_id(&self) -> PhyloNetwork {
        let mut next = 0;
        let nodes = self
            .nodes
            .iter()
            .map(|k| match k {
                NodeKind::Leaf { .. } => {
                    next += 1;
                    NodeKind::Leaf { label: next }
                }
                other => *other,
            })
            .collect();
        PhyloNetwork::new(nodes, self.edges.clone())
    }

    /// Applies `relabel(old) -> new` to every leaf label.
    pub fn map_leaf_labels(&self, relabel: impl Fn(u32) -> u32) -> PhyloNetwork {
        let nodes = self
            .nodes
            .iter()
            .map(|k| match k {
                NodeKind::Leaf { label } => NodeKind::Leaf {
                    label: relabel(*label),
                },
                other => *other,
            })
            .collect();
        PhyloNetwork::new(nodes, self.edges.clone())
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }
}

/// Parent/child lists of a network whose edge endpoints are in range.
#[derive(Clone, Debug)]
pub(crate) struct Adjacency {
    pub children: Vec<Vec<NodeId>>,
    pub parents: Vec<Vec<NodeId>>,
}

impl Adjacency {
    fn new(net: &PhyloNetwork) -> Self {
        let len = net.node_count();
        let mut children = vec![Vec::with_capacity(2); len];
        let mut parents = vec![Vec::with_capacity(2); len];
        for &(p, c) in net.edges() {
            if p < len && c < len {
                children[p].push(c);
                parents[c].push(p);
            }
        }
        Adjacency { children, parents }
    }

    /// Kahn order from sources to sinks; `None` when the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let len = self.children.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<NodeId> = (0..len).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(len);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        (order.len() == len).then_some(order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Root,
    Leaf,
    LeafLabels,
    TreeNode,
    Reticulation,
    DanglingEdge,
    ParallelEdge,
    Acyclicity,
    Connectivity,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::Root => "root",
            Rule::Leaf => "leaf",
            Rule::LeafLabels => "leaf-labels",
            Rule::TreeNode => "tree-node",
            Rule::Reticulation => "reticulation",
            Rule::DanglingEdge => "dangling-edge",
            Rule::ParallelEdge => "parallel-edge",
            Rule::Acyclicity => "acyclicity",
            Rule::Connectivity => "connectivity",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub node: Option<NodeId>,
    pub edge: Option<Edge>,
    pub message: String,
}

impl Violation {
    fn at_node(rule: Rule, node: NodeId, message: String) -> Self {
        Violation {
            rule,
            node: Some(node),
            edge: None,
            message,
        }
    }

    fn at_edge(rule: Rule, edge: Edge, message: String) -> Self {
        Violation {
            rule,
            node: None,
            edge: Some(edge),
            message,
        }
    }

    fn global(rule: Rule, message: String) -> Self {
        Violation {
            rule,
            node: None,
            edge: None,
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural rule of a phylogenetic network. Never fails:
/// problems are returned in the report.
pub fn validate_network(net: &PhyloNetwork) -> ValidationReport {
    let len = net.node_count();
    let mut violations = Vec::new();

    let mut edge_set = BTreeSet::new();
    for &(p, c) in net.edges() {
        if p >= len || c >= len {
            violations.push(Violation::at_edge(
                Rule::DanglingEdge,
                (p, c),
                format!("edge {p} -> {c} references a node outside 0..{len}"),
            ));
        } else if !edge_set.insert((p, c)) {
            violations.push(Violation::at_edge(
                Rule::ParallelEdge,
                (p, c),
                format!("edge {p} -> {c} appears more than once"),
            ));
        }
    }

    let adj = net.adjacency();

    let roots: Vec<NodeId> = (0..len).filter(|&v| net.kind(v) == NodeKind::Root).collect();
    if roots.len() != 1 {
        violations.push(Violation::global(
            Rule::Root,
            format!("expected exactly one root, found {}", roots.len()),
        ));
    }

    for v in 0..len {
        let kind = net.kind(v);
        let (want_in, want_out) = kind.degrees();
        let (got_in, got_out) = (adj.parents[v].len(), adj.children[v].len());
        if (got_in, got_out) != (want_in, want_out) {
            let rule = match kind {
                NodeKind::Root => Rule::Root,
                NodeKind::Leaf { .. } => Rule::Leaf,
                NodeKind::Tree => Rule::TreeNode,
                NodeKind::Reticulation => Rule::Reticulation,
            };
            violations.push(Violation::at_node(
                rule,
                v,
                format!(
                    "node {v} ({kind:?}) has indegree {got_in} and outdegree {got_out}, expected {want_in} and {want_out}"
                ),
            ));
        }
    }

    let labels: Vec<u32> = net
        .nodes()
        .iter()
        .filter_map(|k| match k {
            NodeKind::Leaf { label } => Some(*label),
            _ => None,
        })
        .collect();
    let n = labels.len();
    let distinct: BTreeSet<u32> = labels.iter().copied().collect();
    let in_range = labels.iter().all(|&l| l >= 1 && (l as usize) <= n);
    if distinct.len() != n || !in_range {
        violations.push(Violation::global(
            Rule::LeafLabels,
            format!("leaf labels {labels:?} are not a bijection onto 1..={n}"),
        ));
    }
    if n == 0 {
        violations.push(Violation::global(Rule::Leaf, "network has no leaves".into()));
    }

    if adj.topological_order().is_none() {
        let on_cycle = first_cycle_node(&adj);
        violations.push(Violation {
            rule: Rule::Acyclicity,
            node: on_cycle,
            edge: None,
            message: match on_cycle {
                Some(v) => format!("directed cycle through node {v}"),
                None => "directed cycle".into(),
            },
        });
    }

    if len > 0 {
        let mut seen = vec![false; len];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in adj.children[v].iter().chain(&adj.parents[v]) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            violations.push(Violation::at_node(
                Rule::Connectivity,
                v,
                format!("node {v} is not connected to node 0"),
            ));
        }
    }

    ValidationReport { violations }
}

fn first_cycle_node(adj: &Adjacency) -> Option<NodeId> {
    let len = adj.children.len();
    let mut state = vec![0u8; len];
    for start in 0..len {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if let Some(&c) = adj.children[v].get(*i) {
                *i += 1;
                match state[c] {
                    0 => {
                        state[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return Some(c),
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

fn ensure_valid(net: &PhyloNetwork) -> Result<()> {
    let report = validate_network(net);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidNetwork(report))
    }
}

fn ensure_tree_child(net: &PhyloNetwork) -> Result<Adjacency> {
    ensure_valid(net)?;
    let adj = net.adjacency();
    if tree_child_holds(net.nodes(), &adj) {
        Ok(adj)
    } else {
        Err(Error::NotTreeChild)
    }
}

pub(crate) fn tree_child_holds(kinds: &[NodeKind], adj: &Adjacency) -> bool {
    kinds.iter().enumerate().all(|(v, kind)| {
        kind.is_leaf() || adj.children[v].iter().any(|&c| !kinds[c].is_reticulation())
    })
}

/// Every non-leaf node has at least one child that is not a reticulation.
pub fn is_tree_child(net: &PhyloNetwork) -> Result<bool> {
    ensure_valid(net)?;
    Ok(tree_child_holds(net.nodes(), &net.adjacency()))
}

/// Leaf, reticulation and tree-node counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkProfile {
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

pub fn profile(net: &PhyloNetwork) -> Result<NetworkProfile> {
    ensure_valid(net)?;
    let count = |want: fn(NodeKind) -> bool| net.nodes().iter().filter(|k| want(**k)).count();
    let n = count(NodeKind::is_leaf);
    let k = count(NodeKind::is_reticulation);
    let t = count(|k| k == NodeKind::Tree);
    if n + k != t + 1 {
        return Err(Error::ProfileMismatch { n, k, t });
    }
    Ok(NetworkProfile { n, k, t })
}

fn free_nodes_of(kinds: &[NodeKind], adj: &Adjacency) -> Vec<NodeId> {
    (0..kinds.len())
        .filter(|&v| {
            kinds[v] == NodeKind::Tree
                && adj.children[v]
                    .iter()
                    .all(|&c| !kinds[c].is_reticulation())
        })
        .collect()
}

/// Tree nodes whose children are all tree nodes or leaves.
pub fn free_tree_nodes(net: &PhyloNetwork) -> Result<BTreeSet<NodeId>> {
    let adj = ensure_tree_child(net)?;
    Ok(free_nodes_of(net.nodes(), &adj).into_iter().collect())
}

/// Edges leaving a free tree node.
pub fn free_edges(net: &PhyloNetwork) -> Result<BTreeSet<Edge>> {
    let adj = ensure_tree_child(net)?;
    Ok(free_nodes_of(net.nodes(), &adj)
        .into_iter()
        .flat_map(|v| adj.children[v].iter().map(move |&c| (v, c)))
        .collect())
}

/// Subdivides the root edge with a new tree node `u`, subdivides
/// `free_edge` with a new reticulation `v` and adds `u -> v`. The new nodes
/// get ids `len` and `len + 1`.
pub fn insert_reticulation(net: &PhyloNetwork, free_edge: Edge) -> Result<PhyloNetwork> {
    if !free_edges(net)?.contains(&free_edge) {
        return Err(Error::NotFreeEdge(free_edge.0, free_edge.1));
    }
    let root = net.root().expect("valid network has a root");
    let len = net.node_count();
    let (u, v) = (len, len + 1);
    let mut nodes = net.nodes().to_vec();
    nodes.push(NodeKind::Tree);
    nodes.push(NodeKind::Reticulation);
    let mut edges = Vec::with_capacity(net.edges().len() + 3);
    for &(p, c) in net.edges() {
        if p == root {
            edges.push((root, u));
            edges.push((u, c));
        } else if (p, c) == free_edge {
            edges.push((p, v));
            edges.push((v, c));
        } else {
            edges.push((p, c));
        }
    }
    edges.push((u, v));
    Ok(PhyloNetwork::new(nodes, edges))
}

/// Number of paths from `v` to a leaf whose intermediate nodes are all tree
/// nodes, for every node.
fn tree_path_counts(kinds: &[NodeKind], adj: &Adjacency) -> Vec<u64> {
    let order = adj
        .topological_order()
        .expect("validated networks are acyclic");
    // through[v]: tree-paths that may pass *through* v (v as an intermediate
    // node or as the final leaf).
    let mut through = vec![0u64; kinds.len()];
    let mut from = vec![0u64; kinds.len()];
    for &v in order.iter().rev() {
        from[v] = match kinds[v] {
            NodeKind::Leaf { .. } => 1,
            _ => adj.children[v].iter().map(|&c| through[c]).sum(),
        };
        through[v] = match kinds[v] {
            NodeKind::Leaf { .. } => 1,
            NodeKind::Tree => from[v],
            _ => 0,
        };
    }
    from
}

/// Whether every node has exactly one tree-path to a leaf. For tree-child
/// networks this is equivalent to `k = n - 1`.
pub fn has_unique_tree_paths(net: &PhyloNetwork) -> Result<bool> {
    let adj = ensure_tree_child(net)?;
    Ok(tree_path_counts(net.nodes(), &adj).iter().all(|&c| c == 1))
}
