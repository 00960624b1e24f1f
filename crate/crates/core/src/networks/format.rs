//! Plain-text and JSON serialization of networks.
//!
//! Text form, one network per block:
//!
//! ```text
//! # treechild network v1
//! nodes 4
//! 0 root
//! 1 tree
//! 2 leaf 1
//! 3 leaf 2
//! edges 3
//! 0 1
//! 1 2
//! 1 3
//! ```
//!
//! Blank lines and other `#` lines are ignored. Several blocks may follow
//! each other in one stream.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::{NodeKind, PhyloNetwork};
use crate::{Error, Result};

pub const HEADER: &str = "# treechild network v1";

pub fn to_text(net: &PhyloNetwork) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "nodes {}", net.node_count()).unwrap();
    for (id, kind) in net.nodes().iter().enumerate() {
        match kind {
            NodeKind::Root => writeln!(out, "{id} root"),
            NodeKind::Leaf { label } => writeln!(out, "{id} leaf {label}"),
            NodeKind::Tree => writeln!(out, "{id} tree"),
            NodeKind::Reticulation => writeln!(out, "{id} retic"),
        }
        .unwrap();
    }
    writeln!(out, "edges {}", net.edges().len()).unwrap();
    for (p, c) in net.edges() {
        writeln!(out, "{p} {c}").unwrap();
    }
    out
}

pub fn write_text<W: Write>(mut w: W, net: &PhyloNetwork) -> Result<()> {
    w.write_all(to_text(net).as_bytes())?;
    Ok(())
}

struct Lines<I> {
    inner: I,
    line: usize,
}

impl<I: Iterator<Item = std::io::Result<String>>> Lines<I> {
    /// Next non-blank, non-comment line with its 1-based number.
    fn next_content(&mut self) -> Result<Option<(usize, String)>> {
        for raw in self.inner.by_ref() {
            self.line += 1;
            let raw = raw?;
            let trimmed = raw.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                return Ok(Some((self.line, trimmed.to_string())));
            }
        }
        Ok(None)
    }

    fn expect(&mut self, what: &str) -> Result<(usize, String)> {
        self.next_content()?.ok_or_else(|| Error::Parse {
            line: self.line + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn count_line(line: usize, text: &str, keyword: &str) -> Result<usize> {
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == keyword => v
            .parse()
            .map_err(|_| parse_err(line, format!("bad {keyword} count {v:?}"))),
        _ => Err(parse_err(line, format!("expected `{keyword} <count>`"))),
    }
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, got {s:?}")))
}

/// Parses every network in a text stream.
pub fn read_text<R: BufRead>(reader: R) -> Result<Vec<PhyloNetwork>> {
    let mut lines = Lines {
        inner: reader.lines(),
        line: 0,
    };
    let mut nets = Vec::new();
    while let Some((line, text)) = lines.next_content()? {
        let node_count = count_line(line, &text, "nodes")?;
        let mut nodes = Vec::with_capacity(node_count);
        for expected in 0..node_count {
            let (line, text) = lines.expect("a node line")?;
            let parts: Vec<&str> = text.split_whitespace().collect();
            let id = parse_usize(line, parts[0])?;
            if id != expected {
                return Err(parse_err(line, format!("expected node id {expected}, got {id}")));
            }
            let kind = match parts[1..] {
                ["root"] => NodeKind::Root,
                ["tree"] => NodeKind::Tree,
                ["retic"] | ["reticulation"] => NodeKind::Reticulation,
                ["leaf", label] => NodeKind::Leaf {
                    label: label
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad leaf label {label:?}")))?,
                },
                _ => return Err(parse_err(line, format!("unrecognized node line {text:?}"))),
            };
            nodes.push(kind);
        }
        let (line, text) = lines.expect("`edges <count>`")?;
        let edge_count = count_line(line, &text, "edges")?;
        let mut edges = Vec::with_capacity(edge_count);
        for _ in 0..edge_count {
            let (line, text) = lines.expect("an edge line")?;
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(parse_err(line, "expected `<parent> <child>`"));
            }
            edges.push((parse_usize(line, parts[0])?, parse_usize(line, parts[1])?));
        }
        nets.push(PhyloNetwork::new(nodes, edges));
    }
    Ok(nets)
}

/// Parses exactly one network.
pub fn from_text(text: &str) -> Result<PhyloNetwork> {
    let mut nets = read_text(text.as_bytes())?;
    match nets.len() {
        1 => Ok(nets.remove(0)),
        got => Err(parse_err(0, format!("expected one network, found {got}"))),
    }
}

pub fn to_json(net: &PhyloNetwork) -> Result<String> {
    Ok(serde_json::to_string(net)?)
}

pub fn from_json(text: &str) -> Result<PhyloNetwork> {
    Ok(serde_json::from_str(text)?)
}
