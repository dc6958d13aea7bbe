//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use grepair::{Edge, Hypergraph, Label, NodeId};
use rand::Rng;

/// A simple directed graph: no self-loops, no repeated (src, dst, label).
pub fn random_graph(rng: &mut impl Rng, max_nodes: u32, max_edges: usize, labels: u32) -> Hypergraph {
    let n = rng.gen_range(2..=max_nodes);
    let target = rng.gen_range(1..=max_edges);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..target * 3 {
        if edges.len() == target {
            break;
        }
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        let l = rng.gen_range(1..=labels);
        if u != v && seen.insert((u, v, l)) {
            edges.push(Edge::new(Label::Terminal(l), vec![u, v]));
        }
    }
    Hypergraph::new(n, edges, Vec::new())
}

/// A connected simple graph on `edges` edges, built as a random tree plus
/// extra edges.
pub fn random_connected(rng: &mut impl Rng, edges: usize, labels: u32) -> Hypergraph {
    let n = rng.gen_range(2..=edges as u32 + 1);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in 2..=n {
        let u = rng.gen_range(1..v);
        let (s, t) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        let l = rng.gen_range(1..=labels);
        seen.insert((s, t, l));
        out.push(Edge::new(Label::Terminal(l), vec![s, t]));
    }
    let mut tries = 0;
    while out.len() < edges && tries < 1000 {
        tries += 1;
        let (u, v) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        let l = rng.gen_range(1..=labels);
        if u != v && seen.insert((u, v, l)) {
            out.push(Edge::new(Label::Terminal(l), vec![u, v]));
        }
    }
    Hypergraph::new(n, out, Vec::new())
}

/// Textbook RePair: recount non-overlapping pairs left to right, replace
/// the most frequent (smallest pair on ties) left to right, until no pair
/// occurs twice. Returns the replaced pairs; new symbols are
/// `Nonterminal(1), Nonterminal(2), …`.
pub fn string_repair(word: &[u32]) -> Vec<(Label, Label)> {
    let mut w: Vec<Label> = word.iter().map(|&a| Label::Terminal(a)).collect();
    let mut out = Vec::new();
    loop {
        let mut counts: HashMap<(Label, Label), usize> = HashMap::new();
        let mut last: HashMap<(Label, Label), usize> = HashMap::new();
        for i in 0..w.len().saturating_sub(1) {
            let p = (w[i], w[i + 1]);
            if last.get(&p).is_some_and(|&j| j + 1 == i) {
                continue;
            }
            last.insert(p, i);
            *counts.entry(p).or_insert(0) += 1;
        }
        let best = counts
            .iter()
            .filter(|(_, &c)| c >= 2)
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(&p, _)| p);
        let Some(p) = best else { return out };
        out.push(p);
        let fresh = Label::Nonterminal(out.len() as u32);
        let mut next = Vec::with_capacity(w.len());
        let mut i = 0;
        while i < w.len() {
            if i + 1 < w.len() && (w[i], w[i + 1]) == p {
                next.push(fresh);
                i += 2;
            } else {
                next.push(w[i]);
                i += 1;
            }
        }
        w = next;
    }
}

/// Shape of a pair of edges sharing a node, as
/// (ranks, second attachment, external positions, labels), minimised over
/// both edge orders. Externals: graph externals and nodes with edges
/// outside the pair.
pub type Shape = ((u32, u32), Vec<u32>, Vec<u32>, (Label, Label));

pub fn pair_shape(g: &Hypergraph, x: usize, y: usize) -> Option<Shape> {
    let one = |a: &Edge, b: &Edge| {
        let mut nodes: Vec<NodeId> = a.att.clone();
        for &u in &b.att {
            if !nodes.contains(&u) {
                nodes.push(u);
            }
        }
        let pattern: Vec<u32> = b.att.iter().map(|u| nodes.iter().position(|w| w == u).unwrap() as u32).collect();
        let ext: Vec<u32> = (0..nodes.len())
            .filter(|&i| {
                let u = nodes[i];
                let inside = a.att.contains(&u) as usize + b.att.contains(&u) as usize;
                g.ext().contains(&u) || g.degree(u) > inside
            })
            .map(|i| i as u32)
            .collect();
        ((a.att.len() as u32, b.att.len() as u32), pattern, ext, (a.label, b.label))
    };
    let (a, b) = (g.edge(x), g.edge(y));
    if !a.att.iter().any(|u| b.att.contains(u)) {
        return None;
    }
    Some(one(a, b).min(one(b, a)))
}

/// All adjacent edge pairs of `g`, grouped by shape.
pub fn all_occurrences(g: &Hypergraph) -> HashMap<Shape, Vec<(usize, usize)>> {
    let mut out: HashMap<Shape, Vec<(usize, usize)>> = HashMap::new();
    let m = g.edges().len();
    for x in 0..m {
        for y in x + 1..m {
            if let Some(s) = pair_shape(g, x, y) {
                out.entry(s).or_default().push((x, y));
            }
        }
    }
    out
}

/// Largest set of pairwise disjoint pairs, by exhaustive search.
pub fn max_matching(m: usize, pairs: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); m];
    for &(x, y) in pairs {
        adj[x].push(y);
        adj[y].push(x);
    }
    fn go(v: usize, used: &mut Vec<bool>, adj: &[Vec<usize>]) -> usize {
        let Some(v) = (v..used.len()).find(|&i| !used[i]) else { return 0 };
        used[v] = true;
        let mut best = go(v + 1, used, adj);
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(v + 1, used, adj));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    go(0, &mut vec![false; m], &adj)
}

/// A random straight-line grammar: rule `i` uses only rules below `i`, and
/// every rule is referenced from a later rule or the start graph. Terminal
/// edges have rank 1 to 3 unless `simple`, in which case they have rank 2.
pub fn random_grammar(rng: &mut impl Rng, rules: u32, simple: bool) -> grepair::Grammar {
    use std::collections::BTreeMap;
    let mut out: BTreeMap<u32, Hypergraph> = BTreeMap::new();
    let mut referenced = vec![false; rules as usize + 1];
    let make = |rng: &mut dyn rand::RngCore, below: u32, out: &BTreeMap<u32, Hypergraph>, is_start: bool| {
        let n = rng.gen_range(2..=8u32);
        let rank = if is_start { 0 } else { rng.gen_range(1..=n.min(4)) };
        let mut nodes: Vec<NodeId> = (1..=n).collect();
        for i in (1..nodes.len()).rev() {
            nodes.swap(i, rng.gen_range(0..=i));
        }
        let ext = nodes[..rank as usize].to_vec();
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        let pick = |rng: &mut dyn rand::RngCore, k: usize| {
            let mut v: Vec<NodeId> = (1..=n).collect();
            for i in (1..v.len()).rev() {
                v.swap(i, rng.gen_range(0..=i));
            }
            v.truncate(k);
            v
        };
        for _ in 0..rng.gen_range(1..=10) {
            let k = if simple { 2 } else { rng.gen_range(1..=3.min(n as usize)) };
            let att = pick(rng, k);
            let l = rng.gen_range(1..=3);
            if seen.insert((att.clone(), l)) {
                edges.push(Edge::new(Label::Terminal(l), att));
            }
        }
        let mut used = Vec::new();
        if below > 0 {
            for _ in 0..rng.gen_range(0..=3) {
                let a = rng.gen_range(1..=below);
                let r = out[&a].rank();
                if r <= n as usize {
                    edges.push(Edge::new(Label::Nonterminal(a), pick(rng, r)));
                    used.push(a);
                }
            }
        }
        (Hypergraph::new(n, edges, ext), used)
    };
    for a in 1..=rules {
        let (g, used) = make(rng, a - 1, &out, false);
        for b in used {
            referenced[b as usize] = true;
        }
        out.insert(a, g);
    }
    let (mut start, used) = make(rng, rules, &out, true);
    for b in used {
        referenced[b as usize] = true;
    }
    // reference every unused rule from the start graph
    let (mut n, mut edges, ext) = start.into_parts();
    for a in 1..=rules {
        if !referenced[a as usize] {
            let r = out[&a].rank() as u32;
            edges.push(Edge::new(Label::Nonterminal(a), (n + 1..=n + r).collect()));
            n += r;
        }
    }
    start = Hypergraph::new(n, edges, ext);
    grepair::Grammar::new(start, out)
}

/// Product of `g` (edges lead from their first node to the others) with
/// `nfa`, searched directly: is `(v, final)` reachable from `(u, initial)`?
pub fn flat_rpq(g: &Hypergraph, nfa: &grepair::queries::Nfa, u: NodeId, v: NodeId) -> bool {
    let n = g.node_count() as usize;
    let k = nfa.states;
    let mut seen = vec![false; n * k + 1];
    let id = |x: NodeId, q: usize| q * n + x as usize;
    let mut stack = vec![(u, nfa.initial)];
    seen[id(u, nfa.initial)] = true;
    while let Some((x, q)) = stack.pop() {
        if x == v && q == nfa.final_state {
            return true;
        }
        let mut next = Vec::new();
        for &(a, s, b) in &nfa.transitions {
            if a != q {
                continue;
            }
            match s {
                None => next.push((x, b)),
                Some(s) => {
                    for &e in g.incident(x) {
                        let e = g.edge(e as usize);
                        if e.att[0] == x && s.matches(e.label.id()) {
                            next.extend(e.att[1..].iter().map(|&w| (w, b)));
                        }
                    }
                }
            }
        }
        for (y, p) in next {
            if !seen[id(y, p)] {
                seen[id(y, p)] = true;
                stack.push((y, p));
            }
        }
    }
    false
}

/// A random pattern over `a`, `b`, `c` with about `ops` operators.
pub fn random_pattern(rng: &mut impl Rng, ops: usize) -> String {
    if ops == 0 {
        return ["a", "b", "c"][rng.gen_range(0..3)].to_string();
    }
    match rng.gen_range(0..5) {
        0 => format!("({})*", random_pattern(rng, ops - 1)),
        1 => format!("({})+", random_pattern(rng, ops - 1)),
        2 => format!("({})?", random_pattern(rng, ops - 1)),
        3 => {
            let l = rng.gen_range(0..ops);
            format!("({}|{})", random_pattern(rng, l), random_pattern(rng, ops - 1 - l))
        }
        _ => {
            let l = rng.gen_range(0..ops);
            format!("{}{}", random_pattern(rng, l), random_pattern(rng, ops - 1 - l))
        }
    }
}

pub fn abc(name: &str) -> Option<u32> {
    match name {
        "a" => Some(1),
        "b" => Some(2),
        "c" => Some(3),
        _ => None,
    }
}

pub fn random_pattern_upto(rng: &mut impl Rng, max_ops: usize) -> String {
    let ops = rng.gen_range(0..=max_ops);
    random_pattern(rng, ops)
}
