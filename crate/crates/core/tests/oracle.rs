//! Exhaustive checks of the enumeration oracle against structural
//! invariants, an independent isomorphism test and the closed forms.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use rug::{Integer, Rational};
use treechild::closed_forms::{hat_tc, one_tc, one_tc_nk, TcTable};
use treechild::enumerate::{
    enumerate_one_component, enumerate_tree_child, enumerate_tree_child_with, is_one_component, EnumerateConfig,
};
use treechild::networks::{
    canonical_code, free_edges, free_tree_nodes, has_unique_tree_paths, insert_reticulation, is_tree_child,
    profile, validate_network, NodeKind, PhyloNetwork,
};
use treechild::recurrences::{a_n, cmp_sqrt_e, factorial};

/// All tree-child networks on `n <= 4` leaves, grouped by reticulation count.
fn networks(n: usize) -> &'static [Vec<PhyloNetwork>] {
    static CACHE: OnceLock<Vec<Vec<Vec<PhyloNetwork>>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=4)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                let mut levels: Vec<Vec<PhyloNetwork>> = vec![Vec::new(); n];
                enumerate_tree_child_with(n, &EnumerateConfig::default(), |k, net| {
                    levels[k].push(net.clone());
                    Ok(())
                })
                .unwrap();
                levels
            })
            .collect()
    });
    &all[n]
}

fn tc(n: usize, k: usize) -> Integer {
    Integer::from(networks(n)[k].len())
}

fn tc_total(n: usize) -> Integer {
    Integer::from(networks(n).iter().map(Vec::len).sum::<usize>())
}

#[test]
fn totals_match_the_printed_sequence() {
    let totals: Vec<Integer> = (2..=4).map(tc_total).collect();
    assert_eq!(totals, [3, 66, 4059]);
}

#[test]
fn every_network_is_valid_and_tree_child() {
    for n in 1..=4 {
        for (k, level) in networks(n).iter().enumerate() {
            for net in level {
                assert!(validate_network(net).is_ok());
                assert!(is_tree_child(net).unwrap());
                let p = profile(net).unwrap();
                assert_eq!((p.n, p.k), (n, k));
                assert_eq!(p.n + p.k, p.t + 1);
            }
        }
    }
}

#[test]
fn free_tree_nodes_up_to_five_leaves() {
    let mut seen = 0usize;
    let counts = enumerate_tree_child_with(5, &EnumerateConfig::default(), |k, net| {
        let p = profile(net).unwrap();
        assert_eq!(p.n + p.k, p.t + 1);
        assert_eq!(free_tree_nodes(net).unwrap().len(), 5 - k - 1);
        seen += 1;
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, 496_710);
    assert_eq!(counts.total, 496_710);
    for n in 1..=4 {
        for (k, level) in networks(n).iter().enumerate() {
            for net in level {
                assert_eq!(free_tree_nodes(net).unwrap().len(), n - k - 1);
            }
        }
    }
}

#[test]
fn unique_tree_paths_exactly_when_maximal() {
    for n in 1..=4 {
        for (k, level) in networks(n).iter().enumerate() {
            for net in level {
                assert_eq!(has_unique_tree_paths(net).unwrap(), k == n - 1);
            }
        }
    }
}

#[test]
fn canonical_codes_are_distinct() {
    let codes: HashSet<Vec<u8>> = networks(4).iter().flatten().map(|net| canonical_code(net).unwrap()).collect();
    assert_eq!(codes.len(), 4059);
}

#[test]
fn reticulation_insertion_is_injective() {
    for n in 2..=4 {
        for level in networks(n) {
            let mut codes = HashSet::new();
            let mut pairs = 0;
            for net in level {
                for edge in free_edges(net).unwrap() {
                    let grown = insert_reticulation(net, edge).unwrap();
                    assert!(is_tree_child(&grown).unwrap());
                    codes.insert(canonical_code(&grown).unwrap());
                    pairs += 1;
                }
            }
            assert_eq!(codes.len(), pairs, "n = {n}");
        }
    }
}

/// Minimum, over all renumberings of the non-leaf non-root nodes, of the
/// sorted edge list. Leaves are identified by label and the root is fixed.
fn brute_form(net: &PhyloNetwork) -> Vec<(u32, u32)> {
    let kinds = net.nodes();
    let inner: Vec<usize> = (0..kinds.len())
        .filter(|&v| matches!(kinds[v], NodeKind::Tree | NodeKind::Reticulation))
        .collect();
    let fixed = |v: usize| match kinds[v] {
        NodeKind::Root => Some(0),
        NodeKind::Leaf { label } => Some(1000 + label),
        _ => None,
    };
    let mut best: Option<Vec<(u32, u32)>> = None;
    let mut perm: Vec<u32> = (1..=inner.len() as u32).collect();
    permute(&mut perm, 0, &mut |perm| {
        let id = |v: usize| fixed(v).unwrap_or_else(|| perm[inner.iter().position(|&u| u == v).unwrap()]);
        let mut edges: Vec<(u32, u32)> = net.edges().iter().map(|&(p, c)| (id(p), id(c))).collect();
        edges.sort_unstable();
        if best.as_ref().map_or(true, |b| edges < *b) {
            best = Some(edges);
        }
    });
    best.unwrap()
}

fn permute(v: &mut Vec<u32>, i: usize, visit: &mut dyn FnMut(&[u32])) {
    if i == v.len() {
        visit(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, visit);
        v.swap(i, j);
    }
}

/// Same network with node ids reversed (root kept first) and edges reversed.
fn shuffled(net: &PhyloNetwork) -> PhyloNetwork {
    let len = net.node_count();
    let id = |v: usize| if v == 0 { 0 } else { len - v };
    let mut nodes = vec![NodeKind::Root; len];
    for (v, &k) in net.nodes().iter().enumerate() {
        nodes[id(v)] = k;
    }
    let edges = net.edges().iter().rev().map(|&(p, c)| (id(p), id(c))).collect();
    PhyloNetwork::new(nodes, edges)
}

#[test]
fn canonical_code_agrees_with_brute_isomorphism() {
    let nets: Vec<&PhyloNetwork> = networks(3).iter().flatten().collect();
    assert!(nets.iter().all(|n| n.root() == Some(0)));
    let forms: BTreeSet<Vec<(u32, u32)>> = nets.iter().map(|n| brute_form(n)).collect();
    assert_eq!(forms.len(), 66);
    // Relabeled copies: same class under both routes.
    for net in &nets {
        let copy = shuffled(net);
        assert_eq!(brute_form(&copy), brute_form(net));
        assert_eq!(canonical_code(&copy).unwrap(), canonical_code(net).unwrap());
    }
    // Code equality and brute isomorphism coincide on all pairs.
    let by_code: BTreeMap<Vec<u8>, Vec<(u32, u32)>> =
        nets.iter().map(|n| (canonical_code(n).unwrap(), brute_form(n))).collect();
    assert_eq!(by_code.len(), 66);
}

#[test]
fn stratified_identities() {
    for n in 3..=4 {
        assert_eq!(tc(n, n - 1), factorial(n) * a_n(n - 1), "n = {n}");
        assert_eq!(tc(n, n - 1), tc(n, n - 2) * 2u32, "n = {n}");
        for k in 0..=n - 2 {
            assert!(tc(n, k) * (2 * (n - k - 1)) as u32 <= tc(n, k + 1), "n = {n}, k = {k}");
        }
        assert!(tc(n, n - 3) * 8u32 >= tc(n, n - 2), "n = {n}");
        let top = tc(n, n - 1);
        assert!(Rational::from((top.clone() * 25u32, 16)) <= tc_total(n));
        assert_eq!(cmp_sqrt_e(&tc_total(n), &top), std::cmp::Ordering::Less);
    }
    assert_eq!(tc(2, 1), factorial(2) * a_n(1));
}

#[test]
fn one_component_matches_closed_form() {
    let cfg = EnumerateConfig::default();
    for n in 1..=4 {
        let counts = enumerate_one_component(n, &cfg).unwrap();
        for k in 0..n {
            assert_eq!(counts.count(k), one_tc_nk(n, k).unwrap(), "n = {n}, k = {k}");
            let direct = networks(n)[k].iter().filter(|net| is_one_component(net)).count();
            assert_eq!(counts.count(k), direct);
        }
        assert_eq!(counts.total, one_tc(n).unwrap());
        assert!(one_tc(n).unwrap() <= tc_total(n));
    }
}

#[test]
fn node_labeled_counts_from_the_oracle() {
    let cfg = EnumerateConfig::default();
    let table = TcTable::from_enumeration(4, &cfg).unwrap();
    for big_n in [3usize, 5, 7] {
        // Direct sum over n with k = (N+1)/2 - n, using raw level sizes.
        let mut direct = Integer::new();
        for n in 1..=4 {
            let k = ((big_n + 1) / 2).checked_sub(n);
            if let Some(k) = k.filter(|&k| k < n) {
                direct += factorial(big_n) / factorial(n) * tc(n, k);
            }
        }
        assert_eq!(hat_tc(big_n, &table).unwrap(), direct, "N = {big_n}");
    }
    assert_eq!(hat_tc(5, &table).unwrap(), 180);
    assert_eq!(hat_tc(3, &table).unwrap(), 3);
    let counts = enumerate_tree_child(4, &cfg).unwrap();
    assert_eq!(counts.counts, [15, 228, 1272, 2544]);
}
