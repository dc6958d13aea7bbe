//! Synthetic graph families and the string/tree encodings.

use crate::hypergraph::{Edge, Hypergraph, Label, NodeId};

/// A path of `w.len()` edges labelled by the symbols of `w`; the ends are
/// external. The empty word gives one node that is its own single external.
pub fn s_graph(w: &[u32]) -> Hypergraph {
    let n = w.len() as u32;
    let edges = w.iter().enumerate().map(|(i, &a)| Edge::new(Label::Terminal(a), vec![i as u32 + 1, i as u32 + 2])).collect();
    let ext = if n == 0 { vec![1] } else { vec![1, n + 1] };
    Hypergraph::new(n + 1, edges, ext)
}

/// An ordered tree; the rank of a symbol is its number of children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedTree {
    pub symbol: u32,
    pub children: Vec<RankedTree>,
}

impl RankedTree {
    pub fn leaf(symbol: u32) -> Self {
        RankedTree { symbol, children: Vec::new() }
    }

    pub fn node(symbol: u32, children: Vec<RankedTree>) -> Self {
        RankedTree { symbol, children }
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            stack.extend(t.children.iter());
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// One node per tree node, numbered in pre-order from 1. A tree node with
/// `k` children becomes an edge of rank `k+1` attached to its own node and
/// then to its children's nodes. The root node is external.
pub fn t_graph(t: &RankedTree) -> Hypergraph {
    let mut edges = Vec::new();
    let mut next: NodeId = 1;
    // (subtree, its node)
    let mut stack = vec![(t, 1)];
    while let Some((u, id)) = stack.pop() {
        let mut att = vec![id];
        let mut child_ids = Vec::with_capacity(u.children.len());
        // pre-order numbering: the first child follows its parent, later
        // children follow the whole subtree before them
        let mut offset = id;
        for c in &u.children {
            child_ids.push(offset + 1);
            offset += c.len() as u32;
        }
        att.extend_from_slice(&child_ids);
        edges.push(Edge::new(Label::Terminal(u.symbol), att));
        next = next.max(offset);
        for (c, &cid) in u.children.iter().zip(&child_ids).rev() {
            stack.push((c, cid));
        }
    }
    Hypergraph::new(next, edges, vec![1])
}

/// `n` rows of `2^n` nodes; node `i` has an edge to `i+1` unless it ends a
/// row, and to `i + 2^n` unless that leaves the grid.
pub fn grid(n: u32) -> Hypergraph {
    let w = 1u32 << n;
    let total = n * w;
    let mut edges = Vec::new();
    for i in 1..=total {
        if i % w != 0 {
            edges.push(Edge::new(Label::Terminal(1), vec![i, i + 1]));
        }
        if i + w <= total {
            edges.push(Edge::new(Label::Terminal(1), vec![i, i + w]));
        }
    }
    Hypergraph::new(total, edges, Vec::new())
}

/// Starts from a triangle; each step adds, for every edge at a node of
/// degree 2, a fresh node joined to both ends of that edge.
pub fn triangle_fractal(n: u32) -> Hypergraph {
    let mut nodes = 3u32;
    let mut pairs: Vec<(u32, u32)> = vec![(1, 2), (1, 3), (2, 3)];
    for _ in 1..n {
        let mut degree = vec![0usize; nodes as usize + 1];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes as usize + 1];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
            incident[u as usize].push(i);
            incident[v as usize].push(i);
        }
        let mut chosen = Vec::new();
        let mut taken = vec![false; pairs.len()];
        for v in 1..=nodes as usize {
            if degree[v] == 2 {
                for &e in &incident[v] {
                    if !taken[e] {
                        taken[e] = true;
                        chosen.push(e);
                    }
                }
            }
        }
        for e in chosen {
            let (u, v) = pairs[e];
            nodes += 1;
            pairs.push((u, nodes));
            pairs.push((v, nodes));
        }
    }
    let edges = pairs.into_iter().map(|(u, v)| Edge::new(Label::Terminal(1), vec![u, v])).collect();
    Hypergraph::new(nodes, edges, Vec::new())
}

/// Symbol ids used by [`comb`].
pub const COMB_F: u32 = 1;
pub const COMB_A: u32 = 2;

/// The tree-graph of a right comb of `2^n` nodes of rank `k`: every comb
/// node has `k-1` leaf children followed by the next comb node; the last
/// one has `k` leaves.
pub fn comb(n: u32, k: u32) -> Hypergraph {
    t_graph(&comb_tree(n, k))
}

pub fn comb_tree(n: u32, k: u32) -> RankedTree {
    let leaves = |m: u32| (0..m).map(|_| RankedTree::leaf(COMB_A)).collect::<Vec<_>>();
    let mut t = RankedTree::node(COMB_F, leaves(k));
    for _ in 1..(1u32 << n) {
        let mut ch = leaves(k - 1);
        ch.push(t);
        t = RankedTree::node(COMB_F, ch);
    }
    t
}

/// Symbol ids used by [`chain_with_cycle`]: `f`, then `a_0 … a_4`.
pub const TN_F: u32 = 1;
pub fn tn_a(l: u32) -> u32 {
    2 + l
}

/// A path of `2^n` `f`-edges over nodes `0..=2^n`; path node `j ≥ 1` also
/// carries an edge labelled `a_{(j + 2^n) mod 5}` to a fresh leaf `j + 2^n`.
/// The node set is `0..=2^{n+1}+1`, so the last node is isolated. Ids are
/// shifted by one.
pub fn chain_with_cycle(n: u32) -> Hypergraph {
    let p = 1u32 << n;
    let mut edges = Vec::new();
    for i in 1..=p {
        edges.push(Edge::new(Label::Terminal(TN_F), vec![i, i + 1]));
    }
    for i in (p + 1)..=(2 * p) {
        edges.push(Edge::new(Label::Terminal(tn_a(i % 5)), vec![i - p + 1, i + 1]));
    }
    Hypergraph::new(2 * p + 2, edges, Vec::new())
}

/// `m` copies of `g`, copy `c` shifted by `c·|V|`. External nodes are
/// dropped.
pub fn disjoint_copies(g: &Hypergraph, m: u32) -> Hypergraph {
    let n = g.node_count();
    let mut edges = Vec::with_capacity(g.edges().len() * m as usize);
    for c in 0..m {
        for e in g.edges() {
            edges.push(Edge::new(e.label, e.att.iter().map(|&v| v + c * n).collect()));
        }
    }
    let ext = if m == 1 { g.ext().to_vec() } else { Vec::new() };
    Hypergraph::new(n * m, edges, ext)
}

/// A directed 4-cycle with one diagonal.
pub fn square_with_diagonal() -> Hypergraph {
    Hypergraph::builder()
        .nodes(4)
        .terminal(1, &[1, 2])
        .terminal(1, &[2, 3])
        .terminal(1, &[3, 4])
        .terminal(1, &[4, 1])
        .terminal(1, &[1, 3])
        .build()
}
