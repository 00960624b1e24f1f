//! Brute-force enumeration: ground truth for the counting formulas.
//!
//! Tree-child networks are generated level by level in the reticulation
//! count. Every network with `k + 1` reticulations arises from one with `k`
//! by subdividing an edge with a new tree node `u`, subdividing another edge
//! with a new reticulation `v` and adding `u -> v` (reverse: delete one
//! reticulation edge and suppress the two degree-2 nodes, which keeps the
//! network tree-child). Level 0 is the set of binary trees. Candidates are
//! filtered for acyclicity and the tree-child property and deduplicated by
//! canonical code.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use dashmap::DashSet;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::exec::{self, Strategy};
use crate::networks::{code_of, decode_code, NodeKind, PhyloNetwork};
use crate::words::{can_append, Word};
use crate::{Error, Result};

/// Exact `TC_{n,k}` for every `k`, with `counts[k]` stored up to the largest
/// level enumerated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountByReticulation {
    pub n: usize,
    pub counts: Vec<Integer>,
    pub total: Integer,
}

impl CountByReticulation {
    fn from_counts(n: usize, counts: Vec<Integer>) -> Self {
        let total = counts.iter().sum();
        CountByReticulation { n, counts, total }
    }

    pub fn count(&self, k: usize) -> Integer {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    /// `n,k,count` rows, one per stored level.
    pub fn csv_rows(&self) -> Vec<String> {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{},{k},{c}", self.n))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateConfig {
    /// Largest reticulation count to enumerate; defaults to `n - 1`.
    pub k_max: Option<usize>,
    /// Cap on distinct networks held for one level.
    pub max_level_size: usize,
    /// Largest alphabet accepted by the word enumerators.
    pub max_word_letters: usize,
    pub strategy: Strategy,
}

impl Default for EnumerateConfig {
    fn default() -> Self {
        EnumerateConfig {
            k_max: None,
            max_level_size: 4_000_000,
            max_word_letters: 7,
            strategy: Strategy::default(),
        }
    }
}

/// All rooted binary trees on leaves `1..=n`, built by inserting leaf `i`
/// into every edge of every tree on `1..i`. Yields `(2n-3)!!` trees.
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = PhyloNetwork>> {
    if n == 0 {
        return Err(Error::OutOfRange("a network needs at least one leaf".into()));
    }
    let mut stack = vec![PhyloNetwork::single_leaf()];
    Ok(std::iter::from_fn(move || loop {
        let net = stack.pop()?;
        let have = net.leaf_count();
        if have == n {
            return Some(net);
        }
        // Push in reverse so edges are expanded in order.
        for &(p, c) in net.edges().iter().rev() {
            let mut nodes = net.nodes().to_vec();
            let w = nodes.len();
            nodes.push(NodeKind::Tree);
            nodes.push(NodeKind::Leaf {
                label: have as u32 + 1,
            });
            let mut edges: Vec<_> = net
                .edges()
                .iter()
                .copied()
                .filter(|&e| e != (p, c))
                .collect();
            edges.extend([(p, w), (w, c), (w, w + 1)]);
            stack.push(PhyloNetwork::new(nodes, edges));
        }
    }))
}

/// Reachability bitsets: bit `j` of `reach[i]` is set when `j` is a proper
/// descendant of `i`.
fn reachability(net: &PhyloNetwork) -> Vec<u64> {
    let adj = net.adjacency();
    let order = adj.topological_order().expect("acyclic");
    let mut reach = vec![0u64; net.node_count()];
    for &v in order.iter().rev() {
        for &c in &adj.children[v] {
            reach[v] |= reach[c] | (1 << c);
        }
    }
    reach
}

/// Codes of every tree-child network obtained from `net` by one edge-pair
/// insertion.
fn expand(net: &PhyloNetwork, mut emit: impl FnMut(Vec<u8>) -> Result<()>) -> Result<()> {
    let kinds = net.nodes();
    let edges = net.edges();
    let reach = reachability(net);
    let adj = net.adjacency();
    let (u, v) = (kinds.len(), kinds.len() + 1);
    let mut nodes = kinds.to_vec();
    nodes.extend([NodeKind::Tree, NodeKind::Reticulation]);
    for (i, &(a, b)) in edges.iter().enumerate() {
        if kinds[b].is_reticulation() {
            continue;
        }
        for (j, &(c, d)) in edges.iter().enumerate() {
            if i == j || kinds[d].is_reticulation() || kinds[c] != NodeKind::Tree {
                continue;
            }
            let sibling = adj.children[c].iter().copied().find(|&x| x != d);
            if a != c && sibling.is_some_and(|s| kinds[s].is_reticulation()) {
                continue;
            }
            if d == a || reach[d] & (1 << a) != 0 {
                continue;
            }
            let mut new_edges = Vec::with_capacity(edges.len() + 3);
            for (t, &e) in edges.iter().enumerate() {
                if t == i {
                    new_edges.extend([(a, u), (u, b)]);
                } else if t == j {
                    new_edges.extend([(c, v), (v, d)]);
                } else {
                    new_edges.push(e);
                }
            }
            new_edges.push((u, v));
            let candidate = PhyloNetwork::new(nodes.clone(), new_edges);
            let cadj = candidate.adjacency();
            debug_assert!(crate::networks::tree_child_holds(&nodes, &cadj));
            emit(code_of(&nodes, &cadj)?)?;
        }
    }
    Ok(())
}

/// Sorted codes of every level `0..=k_max`, passed to `on_level` as soon as
/// each level is complete.
fn for_each_level(
    n: usize,
    config: &EnumerateConfig,
    mut on_level: impl FnMut(usize, &[Vec<u8>]) -> Result<()>,
) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange("a network needs at least one leaf".into()));
    }
    // Reachability uses one u64 per node; 4n nodes must fit.
    if 4 * n > 64 {
        return Err(Error::ResourceLimit(format!(
            "network enumeration supports n <= 16, got {n}"
        )));
    }
    let k_max = config.k_max.unwrap_or(n - 1);
    let mut level: Vec<Vec<u8>> = enumerate_trees(n)?
        .map(|t| code_of(t.nodes(), &t.adjacency()))
        .collect::<Result<_>>()?;
    if level.len() > config.max_level_size {
        return Err(level_limit(config, 0));
    }
    level.sort_unstable();
    on_level(0, &level)?;
    for k in 1..=k_max {
        let seen: DashSet<Vec<u8>> = DashSet::new();
        let size = AtomicUsize::new(0);
        let results = exec::map(config.strategy, &level, |code| {
            expand(&decode_code(code), |child| {
                if seen.insert(child) && size.fetch_add(1, Ordering::Relaxed) >= config.max_level_size {
                    return Err(level_limit(config, k));
                }
                Ok(())
            })
        });
        results.into_iter().collect::<Result<()>>()?;
        level = seen.into_iter().collect();
        level.sort_unstable();
        on_level(k, &level)?;
    }
    Ok(())
}

fn level_limit(config: &EnumerateConfig, k: usize) -> Error {
    Error::ResourceLimit(format!(
        "more than {} networks with {k} reticulations",
        config.max_level_size
    ))
}

/// Exact counts `TC_{n,k}` for `k = 0..=k_max`.
pub fn enumerate_tree_child(n: usize, config: &EnumerateConfig) -> Result<CountByReticulation> {
    let mut counts = Vec::new();
    for_each_level(n, config, |_, level| {
        counts.push(Integer::from(level.len()));
        Ok(())
    })?;
    Ok(CountByReticulation::from_counts(n, counts))
}

/// Like [`enumerate_tree_child`], additionally handing every network to
/// `sink` in a deterministic order (by level, then by canonical code).
pub fn enumerate_tree_child_with(
    n: usize,
    config: &EnumerateConfig,
    mut sink: impl FnMut(usize, &PhyloNetwork) -> Result<()>,
) -> Result<CountByReticulation> {
    let mut counts = Vec::new();
    for_each_level(n, config, |k, level| {
        for code in level {
            sink(k, &decode_code(code))?;
        }
        counts.push(Integer::from(level.len()));
        Ok(())
    })?;
    Ok(CountByReticulation::from_counts(n, counts))
}

/// Every reticulation's child is a leaf.
pub fn is_one_component(net: &PhyloNetwork) -> bool {
    let kinds = net.nodes();
    net.edges()
        .iter()
        .all(|&(p, c)| !kinds[p].is_reticulation() || kinds[c].is_leaf())
}

/// Counts of tree-child networks in which every reticulation is directly
/// followed by a leaf.
pub fn enumerate_one_component(n: usize, config: &EnumerateConfig) -> Result<CountByReticulation> {
    let mut counts = Vec::new();
    for_each_level(n, config, |_, level| {
        let hits = exec::map(config.strategy, level, |code| is_one_component(&decode_code(code)));
        counts.push(Integer::from(hits.into_iter().filter(|&h| h).count()));
        Ok(())
    })?;
    Ok(CountByReticulation::from_counts(n, counts))
}

fn check_word_size(n: usize, config: &EnumerateConfig) -> Result<()> {
    if n > config.max_word_letters {
        return Err(Error::ResourceLimit(format!(
            "word enumeration limited to {} letters, got {n}",
            config.max_word_letters
        )));
    }
    Ok(())
}

/// Depth-first extension of a valid prefix; `visit` sees every complete
/// word in lexicographic order.
fn extend_words(counts: &mut [u8], prefix: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if prefix.len() == 3 * counts.len() {
        visit(prefix);
        return;
    }
    for x in 0..counts.len() {
        if can_append(counts, x) {
            counts[x] += 1;
            prefix.push(x as u32 + 1);
            extend_words(counts, prefix, visit);
            prefix.pop();
            counts[x] -= 1;
        }
    }
}

/// Counts `a_n` by prefix-pruned backtracking, split over first letters.
pub fn enumerate_words(n: usize, config: &EnumerateConfig) -> Result<Integer> {
    check_word_size(n, config)?;
    if n == 0 {
        return Ok(Integer::from(1));
    }
    let per_first = exec::map_range(config.strategy, 0, n, |first| {
        let mut counts = vec![0u8; n];
        counts[first] = 1;
        let mut prefix = vec![first as u32 + 1];
        let mut found = 0u64;
        extend_words(&mut counts, &mut prefix, &mut |_| found += 1);
        found
    });
    Ok(per_first.into_iter().map(Integer::from).sum())
}

/// Every word of `A_n` in lexicographic order.
pub fn enumerate_words_with(
    n: usize,
    config: &EnumerateConfig,
    mut sink: impl FnMut(Word),
) -> Result<Integer> {
    check_word_size(n, config)?;
    let mut count = 0u64;
    let mut counts = vec![0u8; n];
    extend_words(&mut counts, &mut Vec::with_capacity(3 * n), &mut |w| {
        count += 1;
        sink(Word::new_unchecked(w.to_vec()));
    });
    Ok(Integer::from(count))
}

/// Counts `a_n` by memoizing the number of completions of each
/// letter-count vector. Independent of the recurrence for `b_{n,m}`.
pub fn count_words(n: usize) -> Result<Integer> {
    if n > 30 {
        return Err(Error::ResourceLimit(format!(
            "word-count memo limited to 30 letters, got {n}"
        )));
    }
    fn completions(counts: &mut [u8], memo: &mut HashMap<u64, u128>) -> Result<u128> {
        let key = counts.iter().fold(0u64, |acc, &c| acc << 2 | u64::from(c));
        if let Some(&hit) = memo.get(&key) {
            return Ok(hit);
        }
        let total = if counts.iter().all(|&c| c == 3) {
            1
        } else {
            let mut sum = 0u128;
            for x in 0..counts.len() {
                if can_append(counts, x) {
                    counts[x] += 1;
                    let sub = completions(counts, memo);
                    counts[x] -= 1;
                    sum = sum
                        .checked_add(sub?)
                        .ok_or_else(|| Error::ResourceLimit("word count exceeds 128 bits".into()))?;
                }
            }
            sum
        };
        memo.insert(key, total);
        Ok(total)
    }
    let mut memo = HashMap::new();
    Ok(Integer::from(completions(&mut vec![0u8; n], &mut memo)?))
}
