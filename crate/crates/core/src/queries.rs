//! Queries answered on the grammar without deriving the graph.
//!
//! Nodes of `val(G)` are addressed by [`GRepresentation`]s: the chain of
//! nonterminal edges leading from the start graph to the right-hand side
//! instance that creates the node. Canonical ids follow the pre-order
//! derivation, so an id can be turned into an address (and back) with the
//! per-rule internal node counts alone.
//!
//! An edge leads from its first attachment node to each of the others.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::grammar::{sibling_order, Grammar};
use crate::hypergraph::{Edge, Hypergraph, Label, LabelDictionary, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("node {id} out of range 1..={max}")]
    OutOfRange { id: u64, max: u64 },
    #[error("malformed node address")]
    BadAddress,
    #[error("pattern error at offset {pos}: {msg}")]
    Pattern { pos: usize, msg: String },
    #[error("terminal edge of rank {0}: regular path queries need rank-2 terminal edges")]
    NotSimple(usize),
}

/// Address of a node of `val(G)`: `path[0]` is an edge index in the start
/// graph, `path[i + 1]` an edge index in the right-hand side of the label of
/// `path[i]`, and `node` a node of the last graph reached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GRepresentation {
    pub path: Vec<usize>,
    pub node: NodeId,
}

impl fmt::Display for GRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.path {
            write!(f, "e{e}.")?;
        }
        write!(f, "{}", self.node)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Reachability between the external nodes of a rule: positions `i → j`,
/// read transitively (`j` is reachable from `i` iff there is a path in this
/// graph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub rank: usize,
    pub edges: Vec<(u32, u32)>,
}

impl Skeleton {
    /// `closure[i][j]`: position `j` is reachable from `i`.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![Vec::new(); self.rank];
        for &(i, j) in &self.edges {
            adj[i as usize].push(j as usize);
        }
        (0..self.rank)
            .map(|i| {
                let mut seen = vec![false; self.rank];
                seen[i] = true;
                let mut stack = vec![i];
                while let Some(u) = stack.pop() {
                    for &w in &adj[u] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                seen
            })
            .collect()
    }
}

/// Numbering and reachability data for one graph of the grammar.
#[derive(Clone, Debug)]
struct Layout {
    /// Nodes created by an instance of this graph, ascending (all nodes for
    /// the start graph).
    internal: Vec<NodeId>,
    /// `rank_of[v - 1]`: index of `v` in `internal`.
    rank_of: Vec<Option<u32>>,
    /// `ext_pos[v - 1]`: first position of `v` in ext.
    ext_pos: Vec<Option<u32>>,
    /// Nonterminal edges in derivation order.
    children: Vec<usize>,
    /// `first[k]`: offset of the nodes derived by child `k` within an
    /// instance (own internal nodes come first).
    first: Vec<u64>,
    /// `slot[e]`: position of edge `e` in `children`.
    slot: Vec<Option<u32>>,
    /// Edges of the graph with every nonterminal replaced by its skeleton;
    /// `arcs[v - 1]` are the successors of `v`.
    arcs: Vec<Vec<NodeId>>,
}

impl Layout {
    fn new(g: &Hypergraph, is_start: bool, counts: &BTreeMap<u32, u64>, skeleta: &BTreeMap<u32, Skeleton>) -> Self {
        let n = g.node_count() as usize;
        let internal: Vec<NodeId> = if is_start { g.nodes().collect() } else { g.internal_nodes() };
        let mut rank_of = vec![None; n];
        for (i, &v) in internal.iter().enumerate() {
            rank_of[(v - 1) as usize] = Some(i as u32);
        }
        let mut ext_pos = vec![None; n];
        for (j, &v) in g.ext().iter().enumerate() {
            ext_pos[(v - 1) as usize].get_or_insert(j as u32);
        }
        let children = sibling_order(g);
        let mut slot = vec![None; g.edges().len()];
        let mut first = Vec::with_capacity(children.len());
        let mut offset = internal.len() as u64;
        for (k, &e) in children.iter().enumerate() {
            slot[e] = Some(k as u32);
            first.push(offset);
            offset += counts[&g.edge(e).label.id()];
        }
        Layout { internal, rank_of, ext_pos, children, first, slot, arcs: substituted(g, skeleta) }
    }

    fn derived(&self, counts: &BTreeMap<u32, u64>, g: &Hypergraph) -> u64 {
        self.first.last().map_or(self.internal.len() as u64, |&f| {
            f + counts[&g.edge(*self.children.last().unwrap()).label.id()]
        })
    }
}

/// Successor lists of `g` with terminal edges leading from their first node
/// and nonterminal edges replaced by the skeleton of their label.
fn substituted(g: &Hypergraph, skeleta: &BTreeMap<u32, Skeleton>) -> Vec<Vec<NodeId>> {
    let mut arcs = vec![Vec::new(); g.node_count() as usize];
    for e in g.edges() {
        match e.label {
            Label::Terminal(_) => {
                for &w in &e.att[1..] {
                    arcs[(e.att[0] - 1) as usize].push(w);
                }
            }
            Label::Nonterminal(a) => {
                for &(i, j) in &skeleta[&a].edges {
                    arcs[(e.att[i as usize] - 1) as usize].push(e.att[j as usize]);
                }
            }
        }
    }
    arcs
}

/// Skeleton of `g` given the skeleta of the nonterminals it uses.
///
/// Strongly connected components of the substituted graph are computed;
/// components without external nodes are bridged, every other component
/// becomes a cycle over its external positions, and component edges join
/// the smallest positions.
pub fn skeleton_of(g: &Hypergraph, skeleta: &BTreeMap<u32, Skeleton>) -> Skeleton {
    let n = g.node_count() as usize;
    let arcs = substituted(g, skeleta);
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        dg.add_node(());
    }
    for (u, out) in arcs.iter().enumerate() {
        for &w in out {
            dg.add_edge(NodeIndex::new(u), NodeIndex::new((w - 1) as usize), ());
        }
    }
    // sinks first
    let sccs = tarjan_scc(&dg);
    let mut comp = vec![0usize; n];
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }
    let mut positions: Vec<Vec<u32>> = vec![Vec::new(); sccs.len()];
    for (j, &v) in g.ext().iter().enumerate() {
        positions[comp[(v - 1) as usize]].push(j as u32);
    }
    // targets[c]: components with external nodes reachable from c through
    // components without any
    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); sccs.len()];
    for c in 0..sccs.len() {
        let mut t: Vec<usize> = Vec::new();
        for v in &sccs[c] {
            for &w in &arcs[v.index()] {
                let d = comp[(w - 1) as usize];
                if d == c {
                    continue;
                }
                if positions[d].is_empty() {
                    t.extend_from_slice(&targets[d]);
                } else {
                    t.push(d);
                }
            }
        }
        t.sort_unstable();
        t.dedup();
        targets[c] = t;
    }
    let mut edges = Vec::new();
    for c in 0..sccs.len() {
        let p = &positions[c];
        if p.is_empty() {
            continue;
        }
        if p.len() > 1 {
            for w in p.windows(2) {
                edges.push((w[0], w[1]));
            }
            edges.push((p[p.len() - 1], p[0]));
        }
        for &d in &targets[c] {
            edges.push((p[0], positions[d][0]));
        }
    }
    edges.sort_unstable();
    Skeleton { rank: g.rank(), edges }
}

/// Skeleta of every nonterminal, computed bottom-up.
pub fn skeletons(g: &Grammar) -> BTreeMap<u32, Skeleton> {
    let mut out = BTreeMap::new();
    for a in g.bottom_up() {
        let s = skeleton_of(&g.rules[&a], &out);
        out.insert(a, s);
    }
    out
}

/// A grammar with the precomputed data every query needs. Immutable once
/// built, so it can be shared between threads.
#[derive(Clone, Debug)]
pub struct QueryGrammar {
    grammar: Grammar,
    skeleta: BTreeMap<u32, Skeleton>,
    start: Layout,
    rules: BTreeMap<u32, Layout>,
    total: u64,
}

impl QueryGrammar {
    pub fn new(grammar: Grammar) -> Self {
        let counts = grammar.node_counts();
        let skeleta = skeletons(&grammar);
        let start = Layout::new(&grammar.start, true, &counts, &skeleta);
        let rules =
            grammar.rules.iter().map(|(&a, r)| (a, Layout::new(r, false, &counts, &skeleta))).collect();
        let total = start.derived(&counts, &grammar.start);
        QueryGrammar { grammar, skeleta, start, rules, total }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    /// Number of nodes of `val(G)`.
    pub fn node_total(&self) -> u64 {
        self.total
    }

    pub fn skeleton(&self, a: u32) -> Option<&Skeleton> {
        self.skeleta.get(&a)
    }

    fn graph(&self, host: Option<u32>) -> &Hypergraph {
        match host {
            None => &self.grammar.start,
            Some(a) => &self.grammar.rules[&a],
        }
    }

    fn layout(&self, host: Option<u32>) -> &Layout {
        match host {
            None => &self.start,
            Some(a) => &self.rules[&a],
        }
    }

    /// Graphs visited along `path`, starting with the start graph.
    fn hosts(&self, rep: &GRepresentation) -> Result<Vec<Option<u32>>, QueryError> {
        let mut hosts = vec![None];
        for &e in &rep.path {
            let g = self.graph(*hosts.last().unwrap());
            match g.edges().get(e).map(|x| x.label) {
                Some(Label::Nonterminal(a)) => hosts.push(Some(a)),
                _ => return Err(QueryError::BadAddress),
            }
        }
        let last = self.graph(*hosts.last().unwrap());
        if rep.node == 0 || rep.node > last.node_count() {
            return Err(QueryError::BadAddress);
        }
        Ok(hosts)
    }

    fn check(&self, id: u64) -> Result<(), QueryError> {
        if id == 0 || id > self.total {
            return Err(QueryError::OutOfRange { id, max: self.total });
        }
        Ok(())
    }

    /// The address of the instance creating node `id`; the node is internal
    /// to the last graph unless the path is empty.
    pub fn get_g_rep(&self, id: u64) -> Result<GRepresentation, QueryError> {
        self.check(id)?;
        let mut r = id - 1;
        let mut host = None;
        let mut path = Vec::new();
        loop {
            let lay = self.layout(host);
            if r < lay.internal.len() as u64 {
                return Ok(GRepresentation { path, node: lay.internal[r as usize] });
            }
            let k = lay.first.partition_point(|&f| f <= r) - 1;
            r -= lay.first[k];
            let e = lay.children[k];
            path.push(e);
            host = Some(self.graph(host).edge(e).label.id());
        }
    }

    /// The canonical id of the node addressed by `rep`. External nodes are
    /// followed up to the instance that creates them.
    pub fn get_id(&self, rep: &GRepresentation) -> Result<u64, QueryError> {
        let hosts = self.hosts(rep)?;
        Ok(self.id_at(&hosts, &rep.path, rep.node))
    }

    fn id_at(&self, hosts: &[Option<u32>], path: &[usize], node: NodeId) -> u64 {
        let mut depth = path.len();
        let mut v = node;
        while depth > 0 {
            let lay = self.layout(hosts[depth]);
            if lay.rank_of[(v - 1) as usize].is_some() {
                break;
            }
            let j = lay.ext_pos[(v - 1) as usize].expect("node is internal or external") as usize;
            v = self.graph(hosts[depth - 1]).edge(path[depth - 1]).att[j];
            depth -= 1;
        }
        let mut id = 0;
        for d in 0..depth {
            let lay = self.layout(hosts[d]);
            id += lay.first[lay.slot[path[d]].unwrap() as usize];
        }
        id + self.layout(hosts[depth]).rank_of[(v - 1) as usize].unwrap() as u64 + 1
    }

    /// Out- or in-neighbours of node `id` in `val(G)`, ascending.
    pub fn neighbors(&self, id: u64, dir: Direction) -> Result<Vec<u64>, QueryError> {
        let rep = self.get_g_rep(id)?;
        let hosts = self.hosts(&rep)?;
        let mut out = Vec::new();
        let mut stack = vec![(rep.path, hosts, rep.node)];
        while let Some((path, hosts, x)) = stack.pop() {
            let g = self.graph(*hosts.last().unwrap());
            for &e in g.incident(x) {
                let edge = g.edge(e as usize);
                match edge.label {
                    Label::Terminal(_) => {
                        let found: &[NodeId] = match dir {
                            Direction::Out if edge.att[0] == x => &edge.att[1..],
                            Direction::In if edge.att[0] != x => &edge.att[..1],
                            _ => &[],
                        };
                        for &u in found {
                            out.push(self.id_at(&hosts, &path, u));
                        }
                    }
                    Label::Nonterminal(a) => {
                        let j = edge.att.iter().position(|&v| v == x).unwrap();
                        let mut p = path.clone();
                        p.push(e as usize);
                        let mut h = hosts.clone();
                        h.push(Some(a));
                        stack.push((p, h, self.grammar.rules[&a].ext()[j]));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Nodes of graph `host` reachable from `seeds` in its substituted
    /// form; `seen[v - 1]`.
    fn reach_in(&self, host: Option<u32>, seeds: impl IntoIterator<Item = NodeId>) -> Vec<bool> {
        let arcs = &self.layout(host).arcs;
        let mut seen = vec![false; arcs.len()];
        let mut stack = Vec::new();
        for s in seeds {
            if !seen[(s - 1) as usize] {
                seen[(s - 1) as usize] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &w in &arcs[(u - 1) as usize] {
                if !seen[(w - 1) as usize] {
                    seen[(w - 1) as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Whether node `t` is reachable from node `s` in `val(G)`; every node
    /// reaches itself.
    pub fn reachable(&self, s: u64, t: u64) -> Result<bool, QueryError> {
        let (a, b) = (self.get_g_rep(s)?, self.get_g_rep(t)?);
        self.reachable_reps(&a, &b)
    }

    /// Reachability between two addressed nodes.
    ///
    /// Going up from `s`, each level keeps the nodes reachable from `s`
    /// inside that instance; at the start graph this is exact. Going down
    /// towards `t`, an instance's nodes reachable from `s` are those reached
    /// from its reachable external nodes, plus the upward set when `s` lies
    /// inside the same instance.
    pub fn reachable_reps(&self, s: &GRepresentation, t: &GRepresentation) -> Result<bool, QueryError> {
        let hs = self.hosts(s)?;
        let ht = self.hosts(t)?;
        let p = &s.path;
        let mut up: Vec<Vec<bool>> = vec![Vec::new(); p.len() + 1];
        up[p.len()] = self.reach_in(hs[p.len()], [s.node]);
        for d in (0..p.len()).rev() {
            let edge = self.graph(hs[d]).edge(p[d]);
            let child = self.graph(hs[d + 1]);
            let seeds: Vec<NodeId> = child
                .ext()
                .iter()
                .zip(&edge.att)
                .filter(|&(&x, _)| up[d + 1][(x - 1) as usize])
                .map(|(_, &y)| y)
                .collect();
            up[d] = self.reach_in(hs[d], seeds);
        }
        let common = p.iter().zip(&t.path).take_while(|(a, b)| a == b).count();
        let mut glob = std::mem::take(&mut up[0]);
        for d in 1..=t.path.len() {
            let edge = self.graph(ht[d - 1]).edge(t.path[d - 1]);
            let child = self.graph(ht[d]);
            let mut seeds: Vec<NodeId> = child
                .ext()
                .iter()
                .zip(&edge.att)
                .filter(|&(_, &y)| glob[(y - 1) as usize])
                .map(|(&x, _)| x)
                .collect();
            if d <= common {
                seeds.extend(child.nodes().filter(|&v| up[d][(v - 1) as usize]));
            }
            glob = self.reach_in(ht[d], seeds);
        }
        Ok(glob[(t.node - 1) as usize])
    }
}

/// A transition symbol of an automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// A terminal label id.
    Label(u32),
    /// Any terminal label.
    Any,
}

impl Symbol {
    pub fn matches(self, label: u32) -> bool {
        match self {
            Symbol::Label(l) => l == label,
            Symbol::Any => true,
        }
    }
}

/// An automaton with one initial and one final state; `None` transitions
/// are ε-moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub states: usize,
    pub transitions: Vec<(usize, Option<Symbol>, usize)>,
    pub initial: usize,
    pub final_state: usize,
}

impl Nfa {
    /// Accepts words over `label` whose length is a multiple of `k`.
    pub fn counter(label: u32, k: usize) -> Nfa {
        let transitions = (0..k).map(|q| (q, Some(Symbol::Label(label)), (q + 1) % k)).collect();
        Nfa { states: k, transitions, initial: 0, final_state: 0 }
    }

    fn closure(&self, set: &mut [bool]) {
        let mut stack: Vec<usize> = (0..self.states).filter(|&q| set[q]).collect();
        while let Some(q) = stack.pop() {
            for &(a, s, b) in &self.transitions {
                if a == q && s.is_none() && !set[b] {
                    set[b] = true;
                    stack.push(b);
                }
            }
        }
    }

    pub fn accepts(&self, word: &[u32]) -> bool {
        let mut cur = vec![false; self.states];
        cur[self.initial] = true;
        self.closure(&mut cur);
        for &c in word {
            let mut next = vec![false; self.states];
            for &(a, s, b) in &self.transitions {
                if cur[a] && s.is_some_and(|s| s.matches(c)) {
                    next[b] = true;
                }
            }
            self.closure(&mut next);
            cur = next;
        }
        cur[self.final_state]
    }
}

/// Thompson construction for patterns built from symbols, juxtaposition,
/// `|`, `*`, `+`, `?` and parentheses. A symbol is a single character, a
/// name in angle brackets (`<knows>`; `<>` is the unnamed label) or `.` for
/// any label. Whitespace is ignored. Names missing from the dictionary
/// match nothing.
pub fn regex_to_nfa(pattern: &str, labels: &LabelDictionary) -> Result<Nfa, QueryError> {
    regex_to_nfa_with(pattern, |name| labels.id(name))
}

pub fn regex_to_nfa_with(pattern: &str, resolve: impl Fn(&str) -> Option<u32>) -> Result<Nfa, QueryError> {
    let mut p = Parser { chars: pattern.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(), at: 0, nfa: Builder::default(), resolve: &resolve, len: pattern.len() };
    let (s, f) = p.alternation()?;
    if let Some(&(pos, c)) = p.chars.get(p.at) {
        return Err(QueryError::Pattern { pos, msg: format!("unexpected `{c}`") });
    }
    Ok(Nfa { states: p.nfa.states, transitions: p.nfa.transitions, initial: s, final_state: f })
}

#[derive(Default)]
struct Builder {
    states: usize,
    transitions: Vec<(usize, Option<Symbol>, usize)>,
}

impl Builder {
    fn state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    fn eps(&mut self, a: usize, b: usize) {
        self.transitions.push((a, None, b));
    }
}

struct Parser<'a, F> {
    chars: Vec<(usize, char)>,
    at: usize,
    nfa: Builder,
    resolve: &'a F,
    len: usize,
}

impl<F: Fn(&str) -> Option<u32>> Parser<'_, F> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(p, _)| p)
    }

    fn alternation(&mut self) -> Result<(usize, usize), QueryError> {
        let mut frag = self.concatenation()?;
        while self.peek() == Some('|') {
            self.at += 1;
            let right = self.concatenation()?;
            let (s, f) = (self.nfa.state(), self.nfa.state());
            self.nfa.eps(s, frag.0);
            self.nfa.eps(s, right.0);
            self.nfa.eps(frag.1, f);
            self.nfa.eps(right.1, f);
            frag = (s, f);
        }
        Ok(frag)
    }

    fn concatenation(&mut self) -> Result<(usize, usize), QueryError> {
        let mut frag: Option<(usize, usize)> = None;
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let next = self.repetition()?;
            frag = Some(match frag {
                None => next,
                Some((s, f)) => {
                    self.nfa.eps(f, next.0);
                    (s, next.1)
                }
            });
        }
        Ok(frag.unwrap_or_else(|| {
            let (s, f) = (self.nfa.state(), self.nfa.state());
            self.nfa.eps(s, f);
            (s, f)
        }))
    }

    fn repetition(&mut self) -> Result<(usize, usize), QueryError> {
        let (mut s1, mut f1) = self.atom()?;
        while let Some(op @ ('*' | '+' | '?')) = self.peek() {
            self.at += 1;
            let (s, f) = (self.nfa.state(), self.nfa.state());
            self.nfa.eps(s, s1);
            self.nfa.eps(f1, f);
            if op != '+' {
                self.nfa.eps(s, f);
            }
            if op != '?' {
                self.nfa.eps(f1, s1);
            }
            (s1, f1) = (s, f);
        }
        Ok((s1, f1))
    }

    fn atom(&mut self) -> Result<(usize, usize), QueryError> {
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Err(QueryError::Pattern { pos, msg: "expected a symbol".into() });
        };
        self.at += 1;
        let symbol = match c {
            '(' => {
                let frag = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(QueryError::Pattern { pos: self.pos(), msg: format!("unclosed `(` at {pos}") });
                }
                self.at += 1;
                return Ok(frag);
            }
            '*' | '+' | '?' | ')' | '>' => {
                return Err(QueryError::Pattern { pos, msg: format!("unexpected `{c}`") });
            }
            '.' => Some(Symbol::Any),
            '<' => {
                let mut name = String::new();
                loop {
                    match self.peek() {
                        Some('>') => break,
                        Some(c) => name.push(c),
                        None => {
                            return Err(QueryError::Pattern { pos: self.pos(), msg: format!("unclosed `<` at {pos}") })
                        }
                    }
                    self.at += 1;
                }
                self.at += 1;
                (self.resolve)(&name).map(Symbol::Label)
            }
            c => (self.resolve)(c.encode_utf8(&mut [0; 4])).map(Symbol::Label),
        };
        let (s, f) = (self.nfa.state(), self.nfa.state());
        if let Some(sym) = symbol {
            self.nfa.transitions.push((s, Some(sym), f));
        }
        Ok((s, f))
    }
}

/// The grammar of the product of `val(G)`, read as a transition system, with
/// an automaton. Node `(v, q)` of a graph with `n` nodes is `q·n + v`, so
/// attachments and ext are state-major. ε-moves become [`Label::EPSILON`]
/// edges on the nodes each graph creates (every node of the start graph,
/// internal nodes of rules), so each node of the product carries them once.
#[derive(Clone, Debug)]
pub struct ProductGrammar {
    pub grammar: Grammar,
    pub states: usize,
    pub initial: usize,
    pub final_state: usize,
    /// Per graph, the product edge index of every nonterminal edge.
    edge_map: HashMap<Option<u32>, Vec<usize>>,
}

impl ProductGrammar {
    /// Total number of nodes over all graphs of the grammar.
    pub fn node_slots(&self) -> usize {
        self.grammar.graphs().map(|(_, g)| g.node_count() as usize).sum()
    }

    /// The address of `(v, state)` for an address of `v` in the original
    /// grammar.
    pub fn lift(&self, rep: &GRepresentation, state: usize) -> GRepresentation {
        let mut host = None;
        let mut path = Vec::with_capacity(rep.path.len());
        for &e in &rep.path {
            let pe = self.edge_map[&host][e];
            path.push(pe);
            host = Some(self.graph(host).edge(pe).label.id());
        }
        let n = self.graph(host).node_count() / self.states as u32;
        GRepresentation { path, node: state as u32 * n + rep.node }
    }

    fn graph(&self, host: Option<u32>) -> &Hypergraph {
        match host {
            None => &self.grammar.start,
            Some(a) => &self.grammar.rules[&a],
        }
    }
}

pub fn product_grammar(g: &Grammar, nfa: &Nfa) -> Result<ProductGrammar, QueryError> {
    let mut edge_map = HashMap::new();
    let (start, map) = product_graph(&g.start, nfa, true)?;
    edge_map.insert(None, map);
    let mut rules = BTreeMap::new();
    for (&a, r) in &g.rules {
        let (p, map) = product_graph(r, nfa, false)?;
        edge_map.insert(Some(a), map);
        rules.insert(a, p);
    }
    Ok(ProductGrammar {
        grammar: Grammar::new(start, rules),
        states: nfa.states,
        initial: nfa.initial,
        final_state: nfa.final_state,
        edge_map,
    })
}

fn product_graph(h: &Hypergraph, nfa: &Nfa, is_start: bool) -> Result<(Hypergraph, Vec<usize>), QueryError> {
    let n = h.node_count();
    let k = nfa.states as u32;
    let at = |v: NodeId, q: usize| q as u32 * n + v;
    let mut moves: Vec<(usize, usize)> = Vec::new();
    let mut by_symbol: Vec<(usize, Symbol, usize)> = Vec::new();
    for &(a, s, b) in &nfa.transitions {
        match s {
            None if a != b => moves.push((a, b)),
            None => {}
            Some(s) => by_symbol.push((a, s, b)),
        }
    }
    moves.sort_unstable();
    moves.dedup();
    by_symbol.sort_unstable();
    by_symbol.dedup();
    let mut edges = Vec::new();
    let mut map = vec![usize::MAX; h.edges().len()];
    for (i, e) in h.edges().iter().enumerate() {
        match e.label {
            Label::Nonterminal(_) => {
                map[i] = edges.len();
                let att = (0..nfa.states).flat_map(|q| e.att.iter().map(move |&v| at(v, q))).collect();
                edges.push(Edge::new(e.label, att));
            }
            Label::Terminal(l) => {
                if e.rank() != 2 {
                    return Err(QueryError::NotSimple(e.rank()));
                }
                for &(q, s, p) in &by_symbol {
                    if s.matches(l) {
                        edges.push(Edge::new(e.label, vec![at(e.att[0], q), at(e.att[1], p)]));
                    }
                }
            }
        }
    }
    let creates: Vec<NodeId> = if is_start { h.nodes().collect() } else { h.internal_nodes() };
    for v in creates {
        for &(q, p) in &moves {
            edges.push(Edge::new(Label::EPSILON, vec![at(v, q), at(v, p)]));
        }
    }
    let ext = (0..nfa.states).flat_map(|q| h.ext().iter().map(move |&v| at(v, q))).collect();
    Ok((Hypergraph::new(n * k, edges, ext), map))
}

/// A regular path query prepared against one grammar: the product grammar
/// and its query data are built once.
#[derive(Clone, Debug)]
pub struct RegularPathQuery {
    pub product: ProductGrammar,
    index: QueryGrammar,
}

impl RegularPathQuery {
    pub fn new(g: &Grammar, nfa: &Nfa) -> Result<Self, QueryError> {
        let product = product_grammar(g, nfa)?;
        let index = QueryGrammar::new(product.grammar.clone());
        Ok(RegularPathQuery { product, index })
    }

    /// Whether some path from `u` to `v` in `base` spells a word of the
    /// language. `base` must index the grammar this query was built from.
    pub fn pair(&self, base: &QueryGrammar, u: u64, v: u64) -> Result<bool, QueryError> {
        let s = self.product.lift(&base.get_g_rep(u)?, self.product.initial);
        let t = self.product.lift(&base.get_g_rep(v)?, self.product.final_state);
        self.index.reachable_reps(&s, &t)
    }

    /// Whether any pair of nodes is joined by a path spelling a word of the
    /// language.
    ///
    /// Bottom-up, every rule records which external nodes are reachable from
    /// an initial-state node of its value and which reach a final-state
    /// node; a graph answers yes once the two meet inside it.
    pub fn exists(&self) -> bool {
        let g = &self.product.grammar;
        let k = self.product.states as u32;
        let (qi, qf) = (self.product.initial as u32, self.product.final_state as u32);
        let mut from_initial: BTreeMap<u32, Vec<bool>> = BTreeMap::new();
        let mut to_final: BTreeMap<u32, Vec<bool>> = BTreeMap::new();
        let hosts: Vec<Option<u32>> = g.bottom_up().into_iter().map(Some).chain([None]).collect();
        for host in hosts {
            let h = self.index.graph(host);
            let n = h.node_count() / k;
            let mut sources: Vec<NodeId> = (1..=n).map(|v| qi * n + v).collect();
            let mut sinks: Vec<NodeId> = (1..=n).map(|v| qf * n + v).collect();
            for e in h.edges() {
                if let Label::Nonterminal(a) = e.label {
                    for (j, &v) in e.att.iter().enumerate() {
                        if from_initial[&a][j] {
                            sources.push(v);
                        }
                        if to_final[&a][j] {
                            sinks.push(v);
                        }
                    }
                }
            }
            let forward = self.index.reach_in(host, sources);
            if sinks.iter().any(|&v| forward[(v - 1) as usize]) {
                return true;
            }
            let Some(a) = host else { break };
            let backward = reverse_reach(&self.index.layout(host).arcs, &sinks);
            from_initial.insert(a, h.ext().iter().map(|&v| forward[(v - 1) as usize]).collect());
            to_final.insert(a, h.ext().iter().map(|&v| backward[(v - 1) as usize]).collect());
        }
        false
    }
}

fn reverse_reach(arcs: &[Vec<NodeId>], targets: &[NodeId]) -> Vec<bool> {
    let mut rev = vec![Vec::new(); arcs.len()];
    for (u, out) in arcs.iter().enumerate() {
        for &w in out {
            rev[(w - 1) as usize].push(u as NodeId + 1);
        }
    }
    let mut seen = vec![false; arcs.len()];
    let mut stack = Vec::new();
    for &t in targets {
        if !seen[(t - 1) as usize] {
            seen[(t - 1) as usize] = true;
            stack.push(t);
        }
    }
    while let Some(u) = stack.pop() {
        for &w in &rev[(u - 1) as usize] {
            if !seen[(w - 1) as usize] {
                seen[(w - 1) as usize] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// One-shot pair query.
pub fn rpq_pair(g: &QueryGrammar, nfa: &Nfa, u: u64, v: u64) -> Result<bool, QueryError> {
    RegularPathQuery::new(g.grammar(), nfa)?.pair(g, u, v)
}

/// One-shot existence query.
pub fn rpq_exists(g: &Grammar, nfa: &Nfa) -> Result<bool, QueryError> {
    Ok(RegularPathQuery::new(g, nfa)?.exists())
}
