//! Hypergraphs with ordered attachment and ordered external nodes.
//!
//! Nodes are the dense range `1..=node_count`. Edges are identified by their
//! position in [`Hypergraph::edges`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

/// A node of a hypergraph, 1-based.
pub type NodeId = u32;

/// Edge label. Terminal and nonterminal ids live in separate spaces.
///
/// Terminals sort before nonterminals; within a kind, by id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Terminal(u32),
    Nonterminal(u32),
}

impl Label {
    /// Label of the virtual edges that join components during compression.
    pub const VIRTUAL: Label = Label::Terminal(0);
    /// Label of epsilon edges in product grammars.
    pub const EPSILON: Label = Label::Terminal(u32::MAX);

    pub fn is_terminal(self) -> bool {
        matches!(self, Label::Terminal(_))
    }

    pub fn is_nonterminal(self) -> bool {
        matches!(self, Label::Nonterminal(_))
    }

    pub fn id(self) -> u32 {
        match self {
            Label::Terminal(i) | Label::Nonterminal(i) => i,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Label::EPSILON => write!(f, "eps"),
            Label::Terminal(i) => write!(f, "t{i}"),
            Label::Nonterminal(i) => write!(f, "N{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub label: Label,
    pub att: Vec<NodeId>,
}

impl Edge {
    pub fn new(label: Label, att: Vec<NodeId>) -> Self {
        Edge { label, att }
    }

    pub fn rank(&self) -> usize {
        self.att.len()
    }

    /// Contribution of this edge to the edge size.
    pub fn size(&self) -> usize {
        if self.att.len() <= 2 {
            1
        } else {
            self.att.len()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Size {
    pub nodes: usize,
    pub edges: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An edge attaches to the same node twice (C1).
    RepeatedAttachment { edge: usize },
    /// The external sequence repeats a node (C2).
    RepeatedExternal { node: NodeId },
    EmptyAttachment { edge: usize },
    DanglingAttachment { edge: usize, node: NodeId },
    DanglingExternal { node: NodeId },
    RankMismatch { label: Label, expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RepeatedAttachment { edge } => {
                write!(f, "edge {edge} attaches to a node twice")
            }
            Violation::RepeatedExternal { node } => write!(f, "node {node} is external twice"),
            Violation::EmptyAttachment { edge } => write!(f, "edge {edge} has no attachment"),
            Violation::DanglingAttachment { edge, node } => {
                write!(f, "edge {edge} attaches to missing node {node}")
            }
            Violation::DanglingExternal { node } => write!(f, "external node {node} is missing"),
            Violation::RankMismatch { label, expected, found } => {
                write!(f, "label {label} used with rank {found}, expected {expected}")
            }
        }
    }
}

/// A hypergraph value. Immutable once built; the incidence index is derived
/// from the edges at construction.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    node_count: u32,
    edges: Vec<Edge>,
    ext: Vec<NodeId>,
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Builds a graph. Out-of-range node references are kept but left out of
    /// the incidence index; [`Hypergraph::validate`] reports them.
    pub fn new(node_count: u32, edges: Vec<Edge>, ext: Vec<NodeId>) -> Self {
        let mut incidence = vec![Vec::new(); node_count as usize];
        for (i, e) in edges.iter().enumerate() {
            for &v in &e.att {
                if v >= 1 && v <= node_count {
                    incidence[(v - 1) as usize].push(i as u32);
                }
            }
        }
        Hypergraph { node_count, edges, ext, incidence }
    }

    pub fn builder() -> HypergraphBuilder {
        HypergraphBuilder::default()
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        1..=self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn ext(&self) -> &[NodeId] {
        &self.ext
    }

    pub fn rank(&self) -> usize {
        self.ext.len()
    }

    /// Ids of the edges attached to `v`, ascending.
    pub fn incident(&self, v: NodeId) -> &[u32] {
        &self.incidence[(v - 1) as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.incident(v).len()
    }

    pub fn is_external(&self, v: NodeId) -> bool {
        self.ext.contains(&v)
    }

    /// Nodes not in `ext`, ascending.
    pub fn internal_nodes(&self) -> Vec<NodeId> {
        let ext: HashSet<NodeId> = self.ext.iter().copied().collect();
        self.nodes().filter(|v| !ext.contains(v)).collect()
    }

    pub fn size(&self) -> Size {
        let nodes = self.node_count as usize;
        let edges = self.edges.iter().map(Edge::size).sum();
        Size { nodes, edges, total: nodes + edges }
    }

    pub fn into_parts(self) -> (u32, Vec<Edge>, Vec<NodeId>) {
        (self.node_count, self.edges, self.ext)
    }

    /// Same graph with a different external sequence.
    pub fn with_ext(&self, ext: Vec<NodeId>) -> Hypergraph {
        Hypergraph { ext, ..self.clone() }
    }

    /// All edges rank 2 and no two edges with equal label and attachment.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| e.rank() == 2 && seen.insert((e.label, e.att[0], e.att[1])))
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let mut ranks: HashMap<Label, usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.att.is_empty() {
                out.push(Violation::EmptyAttachment { edge: i });
            }
            let mut seen = HashSet::new();
            let mut repeated = false;
            for &v in &e.att {
                if v == 0 || v > self.node_count {
                    out.push(Violation::DanglingAttachment { edge: i, node: v });
                }
                repeated |= !seen.insert(v);
            }
            if repeated {
                out.push(Violation::RepeatedAttachment { edge: i });
            }
            match ranks.get(&e.label) {
                Some(&r) if r != e.rank() => out.push(Violation::RankMismatch {
                    label: e.label,
                    expected: r,
                    found: e.rank(),
                }),
                Some(_) => {}
                None => {
                    ranks.insert(e.label, e.rank());
                }
            }
        }
        let mut seen = HashSet::new();
        for &v in &self.ext {
            if v == 0 || v > self.node_count {
                out.push(Violation::DanglingExternal { node: v });
            }
            if !seen.insert(v) {
                out.push(Violation::RepeatedExternal { node: v });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Direct search for a path from `s` to `t`. An edge leads from its first
    /// attachment node to each of the others. Every node reaches itself.
    pub fn paths_exist_oracle(&self, s: NodeId, t: NodeId) -> bool {
        if s == t {
            return true;
        }
        let mut seen = vec![false; self.node_count as usize + 1];
        let mut queue = VecDeque::from([s]);
        seen[s as usize] = true;
        while let Some(u) = queue.pop_front() {
            for &e in self.incident(u) {
                let att = &self.edges[e as usize].att;
                if att[0] != u {
                    continue;
                }
                for &w in &att[1..] {
                    if w == t {
                        return true;
                    }
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        false
    }

    /// Edges sorted, as a multiset.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut v = self.edges.clone();
        v.sort();
        v
    }

    /// Renames every node `v` to `map[v - 1]`. The map must be injective
    /// into `1..=node_count`.
    pub fn rename(&self, map: &[NodeId]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.label, e.att.iter().map(|&v| map[(v - 1) as usize]).collect()))
            .collect();
        let ext = self.ext.iter().map(|&v| map[(v - 1) as usize]).collect();
        Hypergraph::new(self.node_count, edges, ext)
    }
}

/// Graphs are equal when node counts, external sequences and edge multisets
/// agree; edge order is immaterial.
impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.ext == other.ext
            && self.edges.len() == other.edges.len()
            && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for Hypergraph {}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ext: Vec<String> = self.ext.iter().map(|v| v.to_string()).collect();
        writeln!(f, "nodes={} ext=({})", self.node_count, ext.join(","))?;
        for e in &self.edges {
            let att: Vec<String> = e.att.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {} ({})", e.label, att.join(","))?;
        }
        Ok(())
    }
}

#[derive(Default, Clone, Debug)]
pub struct HypergraphBuilder {
    node_count: u32,
    edges: Vec<Edge>,
    ext: Vec<NodeId>,
}

impl HypergraphBuilder {
    pub fn nodes(mut self, n: u32) -> Self {
        self.node_count = n;
        self
    }

    /// Adds a node and returns its id.
    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        self.node_count
    }

    pub fn add_edge(&mut self, label: Label, att: Vec<NodeId>) -> usize {
        self.edges.push(Edge::new(label, att));
        self.edges.len() - 1
    }

    pub fn edge(mut self, label: Label, att: &[NodeId]) -> Self {
        self.add_edge(label, att.to_vec());
        self
    }

    pub fn terminal(self, id: u32, att: &[NodeId]) -> Self {
        self.edge(Label::Terminal(id), att)
    }

    pub fn nonterminal(self, id: u32, att: &[NodeId]) -> Self {
        self.edge(Label::Nonterminal(id), att)
    }

    pub fn ext(mut self, ext: &[NodeId]) -> Self {
        self.ext = ext.to_vec();
        self
    }

    pub fn set_ext(&mut self, ext: Vec<NodeId>) {
        self.ext = ext;
    }

    pub fn build(self) -> Hypergraph {
        Hypergraph::new(self.node_count, self.edges, self.ext)
    }
}

/// Bidirectional map between label strings and terminal ids, ids from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelDictionary {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl LabelDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, assigning the next free id if new.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        self.names.push(name.to_string());
        let id = self.names.len() as u32;
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        if id == 0 {
            return None;
        }
        self.names.get(id as usize - 1).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Names in id order.
    pub fn names(&self) -> &[String] {
        &self.names
    }
}
