//! Node orders that drive greedy occurrence counting.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::hypergraph::{Hypergraph, Label, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OrderKind {
    Natural,
    Bfs,
    Fp0,
    #[default]
    Fp,
}

impl FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nat" => Ok(OrderKind::Natural),
            "bfs" => Ok(OrderKind::Bfs),
            "fp0" => Ok(OrderKind::Fp0),
            "fp" => Ok(OrderKind::Fp),
            _ => Err(format!("unknown order `{s}` (expected nat, bfs, fp0 or fp)")),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Natural => "nat",
            OrderKind::Bfs => "bfs",
            OrderKind::Fp0 => "fp0",
            OrderKind::Fp => "fp",
        })
    }
}

/// A total order on the nodes of a graph, with the score it refines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeOrder {
    pub kind: OrderKind,
    /// Nodes in order.
    pub sequence: Vec<NodeId>,
    /// `position[v - 1]` is the index of `v` in `sequence`.
    pub position: Vec<u32>,
    /// `score[v - 1]`; the order sorts by score, then id.
    pub score: Vec<u64>,
    /// Number of distinct scores for the fingerprint orders.
    pub class_count: Option<usize>,
}

impl NodeOrder {
    fn from_scores(kind: OrderKind, score: Vec<u64>, class_count: Option<usize>) -> Self {
        let mut sequence: Vec<NodeId> = (1..=score.len() as NodeId).collect();
        sequence.sort_by_key(|&v| (score[(v - 1) as usize], v));
        let mut position = vec![0; score.len()];
        for (i, &v) in sequence.iter().enumerate() {
            position[(v - 1) as usize] = i as u32;
        }
        NodeOrder { kind, sequence, position, score, class_count }
    }

    /// An explicit order; scores are the positions.
    pub fn from_sequence(sequence: Vec<NodeId>) -> Self {
        let mut score = vec![0; sequence.len()];
        for (i, &v) in sequence.iter().enumerate() {
            score[(v - 1) as usize] = i as u64;
        }
        Self::from_scores(OrderKind::Natural, score, None)
    }

    pub fn position(&self, v: NodeId) -> u32 {
        self.position[(v - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

pub fn order(g: &Hypergraph, kind: OrderKind) -> NodeOrder {
    match kind {
        OrderKind::Natural => natural_order(g),
        OrderKind::Bfs => bfs_order(g),
        OrderKind::Fp0 => fp_order(g, Some(0)),
        OrderKind::Fp => fp_order(g, None),
    }
}

pub fn natural_order(g: &Hypergraph) -> NodeOrder {
    NodeOrder::from_scores(OrderKind::Natural, (0..g.node_count() as u64).collect(), None)
}

/// Each component is searched from a node of least degree (smallest id on
/// ties); the score of a node is one more than its distance from that start.
/// Edges are followed in both directions.
pub fn bfs_order(g: &Hypergraph) -> NodeOrder {
    let n = g.node_count() as usize;
    let mut score = vec![0u64; n];
    let mut by_degree: Vec<NodeId> = g.nodes().collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    for s in by_degree {
        if score[(s - 1) as usize] != 0 {
            continue;
        }
        score[(s - 1) as usize] = 1;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let d = score[(u - 1) as usize];
            for &e in g.incident(u) {
                for &w in &g.edge(e as usize).att {
                    if score[(w - 1) as usize] == 0 {
                        score[(w - 1) as usize] = d + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    NodeOrder::from_scores(OrderKind::Bfs, score, None)
}

/// Colour refinement from degrees. `iterations = Some(0)` is the degree
/// order; `None` refines until the partition is stable.
pub fn fp_order(g: &Hypergraph, iterations: Option<usize>) -> NodeOrder {
    let (colours, counts) = fp_colours(g, iterations);
    let kind = if iterations == Some(0) { OrderKind::Fp0 } else { OrderKind::Fp };
    NodeOrder::from_scores(kind, colours, counts.last().copied())
}

/// Colourings produced by refinement and the class count after each round
/// (first entry: the degree colouring).
///
/// A neighbour `w` reached through edge `e` contributes
/// `(position of v in att(e), position of w, label, colour of w)`; on
/// directed graphs the positions say whether the edge is outgoing.
pub fn fp_colours(g: &Hypergraph, iterations: Option<usize>) -> (Vec<u64>, Vec<usize>) {
    let n = g.node_count() as usize;
    let mut colours: Vec<u64> = g.nodes().map(|v| g.degree(v) as u64).collect();
    let distinct = |c: &[u64]| c.iter().collect::<BTreeSet<_>>().len();
    let mut counts = vec![distinct(&colours)];
    let limit = iterations.unwrap_or(n.max(1));
    for _ in 0..limit {
        type Key = (u64, Vec<(u8, u8, Label, u64)>);
        let keys: Vec<Key> = g
            .nodes()
            .map(|v| {
                let mut nb = Vec::new();
                for &e in g.incident(v) {
                    let att = &g.edge(e as usize).att;
                    let p = att.iter().position(|&x| x == v).unwrap();
                    for (q, &w) in att.iter().enumerate() {
                        if q != p {
                            let label = g.edge(e as usize).label;
                            nb.push((p as u8, q as u8, label, colours[(w - 1) as usize]));
                        }
                    }
                }
                nb.sort_unstable();
                (colours[(v - 1) as usize], nb)
            })
            .collect();
        let mut sorted: Vec<&Key> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u64> = keys
            .iter()
            .map(|k| sorted.binary_search(&k).unwrap() as u64 + 1)
            .collect();
        let before = *counts.last().unwrap();
        let after = distinct(&next);
        let same = next == colours;
        colours = next;
        counts.push(after);
        if iterations.is_none() && (same || after == before) {
            break;
        }
    }
    (colours, counts)
}
