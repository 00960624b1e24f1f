//! Words of the class `A_n` and their bijection with leaf-unlabeled
//! tree-child networks carrying `n - 1` reticulations.
//!
//! A word over `{1..n}` belongs to `A_n` when every letter occurs exactly
//! three times and, in every prefix, each letter that has occurred occurs at
//! least as often as every larger letter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::networks::{path_components, NodeKind, PhyloNetwork};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        check_word(&letters)?;
        Ok(Word(letters))
    }

    pub(crate) fn new_unchecked(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Number of distinct letters `n`; the word has length `3n`.
    pub fn alphabet_size(&self) -> usize {
        self.0.len() / 3
    }

    /// Splits the word into the per-component blocks: block `j >= 1` starts
    /// at the third occurrence of `j`, block 0 is everything before.
    pub fn blocks(&self) -> Vec<&[u32]> {
        let starts = third_occurrences(&self.0);
        let mut cuts = vec![0];
        cuts.extend(starts);
        cuts.push(self.0.len());
        cuts.windows(2).map(|w| &self.0[w[0]..w[1]]).collect()
    }

    /// Blocks joined by `|`, letters without separators when all are single
    /// digits and space-separated otherwise.
    pub fn display_blocks(&self) -> String {
        let sep = if self.alphabet_size() < 10 { "" } else { " " };
        self.blocks()
            .iter()
            .map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(sep))
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;

    fn try_from(letters: Vec<u32>) -> Result<Self> {
        Word::new(letters)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Whitespace-separated 1-based letters.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::InvalidWord(format!("{t:?} is not a letter")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

/// Whether appending `x` keeps a valid prefix valid. `counts[i]` is the
/// number of occurrences of letter `i + 1` so far.
#[inline]
pub(crate) fn can_append(counts: &[u8], x: usize) -> bool {
    let new = counts[x] + 1;
    if new > 3 {
        return false;
    }
    counts[..x].iter().all(|&c| c == 0 || c >= new) && counts[x + 1..].iter().all(|&c| c <= new)
}

fn check_word(letters: &[u32]) -> Result<()> {
    if letters.len() % 3 != 0 {
        return Err(Error::InvalidWord(format!(
            "length {} is not a multiple of 3",
            letters.len()
        )));
    }
    let n = letters.len() / 3;
    let mut counts = vec![0u8; n];
    for (pos, &l) in letters.iter().enumerate() {
        if l == 0 || l as usize > n {
            return Err(Error::InvalidWord(format!(
                "letter {l} at position {pos} outside 1..={n}"
            )));
        }
        let x = l as usize - 1;
        if !can_append(&counts, x) {
            return Err(Error::InvalidWord(format!(
                "prefix ending at position {pos} violates the occurrence rule"
            )));
        }
        counts[x] += 1;
    }
    // Length 3n with no count above 3 forces every count to be exactly 3.
    Ok(())
}

pub fn is_valid_word(letters: &[u32]) -> bool {
    check_word(letters).is_ok()
}

/// Positions of the third occurrence of `1, 2, ..., n`, increasing.
fn third_occurrences(letters: &[u32]) -> Vec<usize> {
    let n = letters.len() / 3;
    let mut counts = vec![0u8; n];
    let mut third = vec![0usize; n];
    for (pos, &l) in letters.iter().enumerate() {
        let x = l as usize - 1;
        counts[x] += 1;
        if counts[x] == 3 {
            third[x] = pos;
        }
    }
    third
}

/// Encodes a maximal tree-child network (leaf labels ignored).
///
/// Components are indexed, the first node of component `j > 0` and both of
/// its parents are labeled `j`, and labels are read component by component.
pub fn network_to_word(net: &PhyloNetwork) -> Result<Word> {
    let dec = path_components(net)?;
    let mut label = vec![0u32; net.node_count()];
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); net.node_count()];
    for &(p, c) in net.edges() {
        parents[c].push(p);
    }
    for (j, comp) in dec.components.iter().enumerate().skip(1) {
        let r = comp[0];
        label[r] = j as u32;
        for &p in &parents[r] {
            label[p] = j as u32;
        }
    }
    let letters = dec
        .components
        .iter()
        .flatten()
        .filter(|&&v| label[v] != 0)
        .map(|&v| label[v])
        .collect();
    Ok(Word::new_unchecked(letters))
}

/// Decodes a word over `{1..n-1}` into a maximal tree-child network with
/// `n` leaves.
///
/// Node ids are assigned in reading order: the root is 0, then the nodes of
/// each block followed by the block's leaf. Leaves are labeled `1..=n` in
/// that order.
pub fn word_to_network(word: &Word) -> Result<PhyloNetwork> {
    let letters = word.letters();
    let blocks = word.blocks();
    let mut nodes = vec![NodeKind::Root];
    let mut edges = Vec::with_capacity(2 * letters.len() + 1);
    let mut retic_of = vec![0usize; blocks.len()];
    let mut tree_nodes: Vec<(usize, u32)> = Vec::new();
    for (j, block) in blocks.iter().enumerate() {
        let mut prev = if j == 0 { Some(0) } else { None };
        for (i, &l) in block.iter().enumerate() {
            let id = nodes.len();
            if j > 0 && i == 0 {
                nodes.push(NodeKind::Reticulation);
                retic_of[j] = id;
            } else {
                nodes.push(NodeKind::Tree);
                tree_nodes.push((id, l));
            }
            if let Some(p) = prev {
                edges.push((p, id));
            }
            prev = Some(id);
        }
        let leaf = nodes.len();
        nodes.push(NodeKind::Leaf {
            label: j as u32 + 1,
        });
        if let Some(p) = prev {
            edges.push((p, leaf));
        }
    }
    for (id, l) in tree_nodes {
        edges.push((id, retic_of[l as usize]));
    }
    Ok(PhyloNetwork::new(nodes, edges))
}

/// Relabels the leaves of a maximal tree-child network by component: the
/// leaf ending component `j` gets label `j + 1`. This is the labeling
/// [`word_to_network`] produces, so
/// `word_to_network(network_to_word(net))` and `component_labeling(net)`
/// have the same canonical code.
pub fn component_labeling(net: &PhyloNetwork) -> Result<PhyloNetwork> {
    let dec = path_components(net)?;
    Ok(net.map_leaf_labels(|l| {
        let leaf = net.leaf(l).expect("label taken from the network");
        dec.index_of[leaf].expect("leaves lie on a component") as u32 + 1
    }))
}

/// Reads one word per non-empty line.
pub fn read_words(text: &str) -> Result<Vec<Word>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(Word::from_str)
        .collect()
}
