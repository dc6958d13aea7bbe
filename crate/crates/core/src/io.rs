//! Text edge lists: one `src dst [label]` per line, `#` starts a comment.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{Edge, Hypergraph, Label, LabelDictionary, NodeId};

/// Name of the label given to lines without one.
pub const DEFAULT_LABEL: &str = "";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: expected `src dst [label]`, found {tokens} fields")]
    Parse { line: usize, tokens: usize },
    #[error("self-loops are not supported (lines {})", fmt_lines(.lines))]
    SelfLoops { lines: Vec<usize> },
    #[error("input contains no edges")]
    Empty,
}

fn fmt_lines(lines: &[usize]) -> String {
    lines.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
}

/// A parsed edge list with its node names and label dictionary.
#[derive(Clone, Debug)]
pub struct EdgeList {
    pub graph: Hypergraph,
    /// `node_names[v - 1]` is the input token of node `v`.
    pub node_names: Vec<String>,
    pub labels: LabelDictionary,
    pub warnings: Vec<String>,
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, IngestError> {
    let mut node_ids: HashMap<&str, NodeId> = HashMap::new();
    let mut node_names = Vec::new();
    let mut labels = LabelDictionary::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut warnings = Vec::new();
    let mut loops = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(IngestError::Parse { line: i + 1, tokens: tokens.len() });
        }
        if tokens[0] == tokens[1] {
            loops.push(i + 1);
            continue;
        }
        let mut id_of = |name| {
            *node_ids.entry(name).or_insert_with(|| {
                node_names.push(String::from(name));
                node_names.len() as NodeId
            })
        };
        let (u, v) = (id_of(tokens[0]), id_of(tokens[1]));
        let label = labels.intern(tokens.get(2).copied().unwrap_or(DEFAULT_LABEL));
        if !seen.insert((u, v, label)) {
            warnings.push(format!("line {}: duplicate edge dropped", i + 1));
            continue;
        }
        edges.push(Edge::new(Label::Terminal(label), vec![u, v]));
    }
    if !loops.is_empty() {
        return Err(IngestError::SelfLoops { lines: loops });
    }
    if edges.is_empty() {
        return Err(IngestError::Empty);
    }
    let graph = Hypergraph::new(node_names.len() as u32, edges, Vec::new());
    Ok(EdgeList { graph, node_names, labels, warnings })
}

/// Writes the rank-2 terminal edges of `g`. Nodes are printed through
/// `names` when given, else as numbers; edges with the default label get two
/// columns.
pub fn write_edge_list(g: &Hypergraph, names: Option<&[String]>, labels: &LabelDictionary) -> String {
    let mut out = String::new();
    let node = |v: NodeId| match names {
        Some(n) => n[(v - 1) as usize].clone(),
        None => v.to_string(),
    };
    for e in g.edges() {
        let Label::Terminal(t) = e.label else { continue };
        if e.rank() != 2 {
            continue;
        }
        let (u, v) = (node(e.att[0]), node(e.att[1]));
        match labels.name(t) {
            Some(l) if l != DEFAULT_LABEL => writeln!(out, "{u} {v} {l}").unwrap(),
            Some(_) => writeln!(out, "{u} {v}").unwrap(),
            None => writeln!(out, "{u} {v} {t}").unwrap(),
        }
    }
    out
}
