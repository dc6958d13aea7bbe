//! Straight-line hyperedge replacement grammars.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::hypergraph::{Edge, Hypergraph, Label, NodeId, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("edge rank {edge} does not match graph rank {graph}")]
    RankMismatch { edge: usize, graph: usize },
    #[error("unknown nonterminal N{0}")]
    UnknownNonterminal(u32),
    #[error("edge index {0} out of range")]
    NoSuchEdge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrammarViolation {
    Cycle { nonterminal: u32 },
    MissingRule { nonterminal: u32 },
    Unreachable { nonterminal: u32 },
    EdgeRank { nonterminal: u32, expected: usize, found: usize },
    TerminalRank { label: Label, expected: usize, found: usize },
    /// A graph-level violation; `None` means the start graph.
    Graph { rule: Option<u32>, violation: Violation },
}

/// A grammar: the start graph plus one right-hand side per nonterminal id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub start: Hypergraph,
    pub rules: BTreeMap<u32, Hypergraph>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarStats {
    pub rules: usize,
    pub size: usize,
    pub height: usize,
    /// Internal nodes of `val(A)` per nonterminal.
    pub nodes: BTreeMap<u32, u64>,
}

/// Order in which the nonterminal edges of `g` are derived: by attachment
/// (a proper prefix first), then label, then edge position.
pub fn sibling_order(g: &Hypergraph) -> Vec<usize> {
    let mut idx: Vec<usize> =
        (0..g.edges().len()).filter(|&i| g.edge(i).label.is_nonterminal()).collect();
    idx.sort_by(|&a, &b| {
        let (ea, eb) = (g.edge(a), g.edge(b));
        ea.att.cmp(&eb.att).then(ea.label.cmp(&eb.label)).then(a.cmp(&b))
    });
    idx
}

/// `g[e/h]` with the canonical renaming: internal nodes of `h` become
/// `n+1, n+2, …` in ascending order and external nodes are merged onto the
/// attachment of `e`. The edges of `h` are appended after the remaining
/// edges of `g`.
pub fn replace_edge(g: &Hypergraph, e: usize, h: &Hypergraph) -> Result<Hypergraph, GrammarError> {
    let edge = g.edges().get(e).ok_or(GrammarError::NoSuchEdge(e))?;
    if edge.rank() != h.rank() {
        return Err(GrammarError::RankMismatch { edge: edge.rank(), graph: h.rank() });
    }
    let mut next = g.node_count();
    let map = embed_map(h, &edge.att, &mut next);
    let mut edges: Vec<Edge> =
        g.edges().iter().enumerate().filter(|&(i, _)| i != e).map(|(_, x)| x.clone()).collect();
    edges.extend(h.edges().iter().map(|x| map_edge(x, &map)));
    Ok(Hypergraph::new(next, edges, g.ext().to_vec()))
}

/// Node map for embedding `h` at attachment `att`: ext positions go to
/// `att`, internal nodes to fresh ids after `next`.
fn embed_map(h: &Hypergraph, att: &[NodeId], next: &mut u32) -> Vec<NodeId> {
    let mut map = vec![0; h.node_count() as usize];
    for (&x, &a) in h.ext().iter().zip(att) {
        map[(x - 1) as usize] = a;
    }
    let ext: HashSet<NodeId> = h.ext().iter().copied().collect();
    for v in h.nodes() {
        if !ext.contains(&v) {
            *next += 1;
            map[(v - 1) as usize] = *next;
        }
    }
    map
}

fn map_edge(e: &Edge, map: &[NodeId]) -> Edge {
    Edge::new(e.label, e.att.iter().map(|&v| map[(v - 1) as usize]).collect())
}

/// Per-instance record of a derivation: which labels the internal nodes of
/// each derived right-hand side carry, and which instance derives each
/// nonterminal edge.
///
/// Grammar transformations that renumber `val` keep a trace in step, so the
/// labels always describe the same nodes of the derived graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    /// One label per node of the start graph.
    pub root_labels: Vec<u32>,
    /// Per edge of the start graph, the instance deriving it.
    pub root_children: Vec<Option<usize>>,
    pub instances: Vec<Instance>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub nonterminal: u32,
    /// Labels of the internal nodes of the right-hand side, ascending.
    pub labels: Vec<u32>,
    /// Per edge of the right-hand side.
    pub children: Vec<Option<usize>>,
}

impl Trace {
    /// The full derivation of `g`, labelling every node with its id in
    /// `val(g)`.
    pub fn identity(g: &Grammar) -> Trace {
        let mut trace = Trace {
            root_labels: g.start.nodes().collect(),
            root_children: vec![None; g.start.edges().len()],
            instances: Vec::new(),
        };
        let mut next = g.start.node_count();
        // (parent instance or root, edge index, nonterminal)
        let mut stack: Vec<(Option<usize>, usize, u32)> = Vec::new();
        for &i in sibling_order(&g.start).iter().rev() {
            if let Label::Nonterminal(a) = g.start.edge(i).label {
                stack.push((None, i, a));
            }
        }
        while let Some((parent, edge, a)) = stack.pop() {
            let rhs = &g.rules[&a];
            let labels: Vec<u32> = rhs
                .internal_nodes()
                .iter()
                .map(|_| {
                    next += 1;
                    next
                })
                .collect();
            let id = trace.instances.len();
            trace.instances.push(Instance {
                nonterminal: a,
                labels,
                children: vec![None; rhs.edges().len()],
            });
            match parent {
                None => trace.root_children[edge] = Some(id),
                Some(p) => trace.instances[p].children[edge] = Some(id),
            }
            for &i in sibling_order(rhs).iter().rev() {
                if let Label::Nonterminal(b) = rhs.edge(i).label {
                    stack.push((Some(id), i, b));
                }
            }
        }
        trace
    }

    fn transform(&mut self, host: Option<u32>, kept: &[usize], inlined: &[usize]) {
        let apply = |labels: &mut Vec<u32>, children: &mut Vec<Option<usize>>, insts: &[Instance]| {
            let mut new_children: Vec<Option<usize>> = kept.iter().map(|&i| children[i]).collect();
            for &p in inlined {
                let child = &insts[children[p].expect("trace out of step with grammar")];
                labels.extend_from_slice(&child.labels);
                new_children.extend_from_slice(&child.children);
            }
            *children = new_children;
        };
        match host {
            None => {
                let (mut labels, mut children) =
                    (std::mem::take(&mut self.root_labels), std::mem::take(&mut self.root_children));
                apply(&mut labels, &mut children, &self.instances);
                self.root_labels = labels;
                self.root_children = children;
            }
            Some(b) => {
                for k in 0..self.instances.len() {
                    if self.instances[k].nonterminal != b {
                        continue;
                    }
                    let mut labels = std::mem::take(&mut self.instances[k].labels);
                    let mut children = std::mem::take(&mut self.instances[k].children);
                    apply(&mut labels, &mut children, &self.instances);
                    self.instances[k].labels = labels;
                    self.instances[k].children = children;
                }
            }
        }
    }
}

impl Grammar {
    pub fn new(start: Hypergraph, rules: BTreeMap<u32, Hypergraph>) -> Self {
        Grammar { start, rules }
    }

    /// A grammar without rules.
    pub fn trivial(g: Hypergraph) -> Self {
        Grammar { start: g, rules: BTreeMap::new() }
    }

    pub fn rhs(&self, a: u32) -> Option<&Hypergraph> {
        self.rules.get(&a)
    }

    /// `|S| + Σ |rhs(A)|`.
    pub fn size(&self) -> usize {
        self.start.size().total + self.rules.values().map(|r| r.size().total).sum::<usize>()
    }

    pub fn graphs(&self) -> impl Iterator<Item = (Option<u32>, &Hypergraph)> {
        std::iter::once((None, &self.start)).chain(self.rules.iter().map(|(&a, g)| (Some(a), g)))
    }

    pub fn validate_straight_line(&self) -> Result<(), Vec<GrammarViolation>> {
        let mut out = Vec::new();
        let mut terminal_ranks: HashMap<Label, usize> = HashMap::new();
        for (rule, g) in self.graphs() {
            if let Err(vs) = g.validate() {
                out.extend(vs.into_iter().map(|violation| GrammarViolation::Graph { rule, violation }));
            }
            for e in g.edges() {
                match e.label {
                    Label::Nonterminal(a) => match self.rules.get(&a) {
                        None => out.push(GrammarViolation::MissingRule { nonterminal: a }),
                        Some(r) if r.rank() != e.rank() => out.push(GrammarViolation::EdgeRank {
                            nonterminal: a,
                            expected: r.rank(),
                            found: e.rank(),
                        }),
                        Some(_) => {}
                    },
                    Label::Terminal(_) => {
                        let r = *terminal_ranks.entry(e.label).or_insert(e.rank());
                        if r != e.rank() {
                            out.push(GrammarViolation::TerminalRank {
                                label: e.label,
                                expected: r,
                                found: e.rank(),
                            });
                        }
                    }
                }
            }
        }
        out.dedup();
        // cycles, by depth-first search with colours
        let mut colour: HashMap<u32, u8> = HashMap::new();
        for &a in self.rules.keys() {
            if colour.contains_key(&a) {
                continue;
            }
            let mut stack = vec![(a, 0usize)];
            colour.insert(a, 1);
            while let Some(&mut (x, ref mut pos)) = stack.last_mut() {
                let edges = self.rules[&x].edges();
                if *pos == edges.len() {
                    colour.insert(x, 2);
                    stack.pop();
                    continue;
                }
                let e = &edges[*pos];
                *pos += 1;
                if let Label::Nonterminal(b) = e.label {
                    if !self.rules.contains_key(&b) {
                        continue;
                    }
                    match colour.get(&b) {
                        Some(1) => out.push(GrammarViolation::Cycle { nonterminal: b }),
                        Some(_) => {}
                        None => {
                            colour.insert(b, 1);
                            stack.push((b, 0));
                        }
                    }
                }
            }
        }
        let reach = self.reachable_nonterminals();
        for &a in self.rules.keys() {
            if !reach.contains(&a) {
                out.push(GrammarViolation::Unreachable { nonterminal: a });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn reachable_nonterminals(&self) -> HashSet<u32> {
        let mut seen = HashSet::new();
        let mut stack: Vec<u32> = nonterminals_of(&self.start).collect();
        while let Some(a) = stack.pop() {
            if seen.insert(a) {
                if let Some(r) = self.rules.get(&a) {
                    stack.extend(nonterminals_of(r));
                }
            }
        }
        seen
    }

    /// Nonterminals with every nonterminal before the ones referencing it.
    /// Requires an acyclic grammar.
    pub fn bottom_up(&self) -> Vec<u32> {
        let mut order = Vec::with_capacity(self.rules.len());
        let mut done: HashSet<u32> = HashSet::new();
        for &a in self.rules.keys() {
            if done.contains(&a) {
                continue;
            }
            let mut stack = vec![(a, false)];
            while let Some((x, expanded)) = stack.pop() {
                if expanded {
                    if done.insert(x) {
                        order.push(x);
                    }
                    continue;
                }
                if done.contains(&x) {
                    continue;
                }
                stack.push((x, true));
                for b in nonterminals_of(&self.rules[&x]) {
                    if !done.contains(&b) {
                        stack.push((b, false));
                    }
                }
            }
        }
        order
    }

    /// The derived graph with canonical node ids.
    pub fn val(&self) -> Hypergraph {
        self.derive(None).0
    }

    /// Like [`Grammar::val`], also returning the trace label of every derived
    /// node (`labels[v - 1]`).
    pub fn val_traced(&self, trace: &Trace) -> (Hypergraph, Vec<u32>) {
        let (g, labels) = self.derive(Some(trace));
        (g, labels.expect("labels present with a trace"))
    }

    fn derive(&self, trace: Option<&Trace>) -> (Hypergraph, Option<Vec<u32>>) {
        let mut edges = Vec::new();
        let mut labels = trace.map(|t| t.root_labels.clone());
        let mut next = self.start.node_count();
        let identity: Vec<NodeId> = self.start.nodes().collect();
        struct Item {
            nonterminal: u32,
            map: Vec<NodeId>,
            inst: Option<usize>,
        }
        let root_children = trace.map(|t| t.root_children.as_slice());
        let mut stack: Vec<Item> = Vec::new();
        let emit = |rhs: &Hypergraph,
                        map: &[NodeId],
                        children: Option<&[Option<usize>]>,
                        stack: &mut Vec<Item>,
                        edges: &mut Vec<Edge>| {
            for e in rhs.edges() {
                if e.label.is_terminal() {
                    edges.push(map_edge(e, map));
                }
            }
            let order = sibling_order(rhs);
            for &i in order.iter().rev() {
                let e = rhs.edge(i);
                let Label::Nonterminal(a) = e.label else { unreachable!() };
                let att: Vec<NodeId> = e.att.iter().map(|&v| map[(v - 1) as usize]).collect();
                stack.push(Item {
                    nonterminal: a,
                    map: att,
                    inst: children.and_then(|c| c[i]),
                });
            }
        };
        emit(&self.start, &identity, root_children, &mut stack, &mut edges);
        while let Some(item) = stack.pop() {
            let rhs = &self.rules[&item.nonterminal];
            let map = embed_map(rhs, &item.map, &mut next);
            let inst = trace.map(|t| &t.instances[item.inst.expect("trace out of step with grammar")]);
            if let (Some(l), Some(inst)) = (labels.as_mut(), inst) {
                l.extend_from_slice(&inst.labels);
            }
            emit(rhs, &map, inst.map(|i| i.children.as_slice()), &mut stack, &mut edges);
        }
        (Hypergraph::new(next, edges, self.start.ext().to_vec()), labels)
    }

    /// Number of edges labelled `A` across the start graph and all rules.
    pub fn references(&self) -> HashMap<u32, usize> {
        let mut refs = HashMap::new();
        for (_, g) in self.graphs() {
            for a in nonterminals_of(g) {
                *refs.entry(a).or_insert(0) += 1;
            }
        }
        refs
    }

    /// `con(A) = ref(A)·(|rhs(A)| − |handle(A)|) − |rhs(A)|`.
    pub fn contribution(&self, a: u32) -> Result<i64, GrammarError> {
        let rhs = self.rules.get(&a).ok_or(GrammarError::UnknownNonterminal(a))?;
        let refs = self.references().get(&a).copied().unwrap_or(0);
        Ok(contribution_of(rhs, refs))
    }

    /// Replaces every `A`-edge by `rhs(A)` and drops the rule.
    pub fn inline_nonterminal(&self, a: u32) -> Result<Grammar, GrammarError> {
        let mut g = self.clone();
        g.inline_in_place(a, None)?;
        Ok(g)
    }

    /// [`Grammar::inline_nonterminal`], keeping `trace` in step.
    pub fn inline_traced(&self, a: u32, trace: &mut Trace) -> Result<Grammar, GrammarError> {
        let mut g = self.clone();
        g.inline_in_place(a, Some(trace))?;
        Ok(g)
    }

    pub(crate) fn inline_in_place(&mut self, a: u32, mut trace: Option<&mut Trace>) -> Result<(), GrammarError> {
        let rhs = self.rules.remove(&a).ok_or(GrammarError::UnknownNonterminal(a))?;
        let label = Label::Nonterminal(a);
        let hosts: Vec<Option<u32>> = self
            .graphs()
            .filter(|(_, g)| g.edges().iter().any(|e| e.label == label))
            .map(|(h, _)| h)
            .collect();
        for host in hosts {
            let g = match host {
                None => &self.start,
                Some(b) => &self.rules[&b],
            };
            let (kept, inlined): (Vec<usize>, Vec<usize>) =
                (0..g.edges().len()).partition(|&i| g.edge(i).label != label);
            let mut next = g.node_count();
            let mut edges: Vec<Edge> = kept.iter().map(|&i| g.edge(i).clone()).collect();
            for &p in &inlined {
                let map = embed_map(&rhs, &g.edge(p).att, &mut next);
                edges.extend(rhs.edges().iter().map(|x| map_edge(x, &map)));
            }
            let new = Hypergraph::new(next, edges, g.ext().to_vec());
            if let Some(t) = trace.as_deref_mut() {
                t.transform(host, &kept, &inlined);
            }
            match host {
                None => self.start = new,
                Some(b) => {
                    self.rules.insert(b, new);
                }
            }
        }
        Ok(())
    }

    /// Removes the edges with label `label` from every graph of the grammar.
    pub(crate) fn remove_terminal(&mut self, label: Label, mut trace: Option<&mut Trace>) {
        let hosts: Vec<Option<u32>> = self
            .graphs()
            .filter(|(_, g)| g.edges().iter().any(|e| e.label == label))
            .map(|(h, _)| h)
            .collect();
        for host in hosts {
            let g = match host {
                None => &self.start,
                Some(b) => &self.rules[&b],
            };
            let kept: Vec<usize> = (0..g.edges().len()).filter(|&i| g.edge(i).label != label).collect();
            let new = Hypergraph::new(
                g.node_count(),
                kept.iter().map(|&i| g.edge(i).clone()).collect(),
                g.ext().to_vec(),
            );
            if let Some(t) = trace.as_deref_mut() {
                t.transform(host, &kept, &[]);
            }
            match host {
                None => self.start = new,
                Some(b) => {
                    self.rules.insert(b, new);
                }
            }
        }
    }

    /// Removes repeated external nodes. A repeated position identifies the
    /// attached nodes of every edge using the rule; the merged node keeps
    /// the smaller id and the remaining nodes are renumbered in order.
    pub fn normalize_ext(&self) -> Grammar {
        let mut g = self.clone();
        let mut order = g.bottom_up();
        order.retain(|a| g.rules.contains_key(a));
        for a in order {
            let ext = g.rules[&a].ext().to_vec();
            let mut first: HashMap<NodeId, usize> = HashMap::new();
            let mut keep = Vec::new();
            let mut rep = Vec::with_capacity(ext.len());
            for (i, &v) in ext.iter().enumerate() {
                let f = *first.entry(v).or_insert_with(|| {
                    keep.push(i);
                    i
                });
                rep.push(f);
            }
            if keep.len() == ext.len() {
                continue;
            }
            let dist: Vec<NodeId> = keep.iter().map(|&i| ext[i]).collect();
            let rhs = g.rules[&a].with_ext(dist);
            g.rules.insert(a, rhs);
            let hosts: Vec<Option<u32>> = g
                .graphs()
                .filter(|(_, h)| h.edges().iter().any(|e| e.label == Label::Nonterminal(a)))
                .map(|(h, _)| h)
                .collect();
            for host in hosts {
                let h = match host {
                    None => &g.start,
                    Some(b) => &g.rules[&b],
                };
                let new = merge_repeats(h, a, &keep, &rep);
                match host {
                    None => g.start = new,
                    Some(b) => {
                        g.rules.insert(b, new);
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        let start_ext: Vec<NodeId> = g.start.ext().iter().copied().filter(|v| seen.insert(*v)).collect();
        g.start = g.start.with_ext(start_ext);
        g
    }

    /// Splits right-hand sides so that none has more than two nonterminal
    /// edges. The derived graph keeps its node ids.
    pub fn limit_to_two_nonterminals(&self) -> Grammar {
        let mut g = self.clone();
        let mut fresh = g.rules.keys().next_back().copied().unwrap_or(0);
        let mut work: Vec<Option<u32>> = g.graphs().map(|(h, _)| h).collect();
        while let Some(host) = work.pop() {
            let h = match host {
                None => &g.start,
                Some(b) => &g.rules[&b],
            };
            let order = sibling_order(h);
            if order.len() <= 2 {
                continue;
            }
            let rest = &order[1..];
            let mut ext: Vec<NodeId> = Vec::new();
            for &i in rest {
                for &v in &h.edge(i).att {
                    if !ext.contains(&v) {
                        ext.push(v);
                    }
                }
            }
            let mut nodes = ext.clone();
            nodes.sort_unstable();
            let local = |v: NodeId| nodes.binary_search(&v).unwrap() as NodeId + 1;
            let bundle = Hypergraph::new(
                nodes.len() as u32,
                rest.iter()
                    .map(|&i| Edge::new(h.edge(i).label, h.edge(i).att.iter().map(|&v| local(v)).collect()))
                    .collect(),
                ext.iter().map(|&v| local(v)).collect(),
            );
            fresh += 1;
            let removed: HashSet<usize> = rest.iter().copied().collect();
            let mut edges: Vec<Edge> = (0..h.edges().len())
                .filter(|i| !removed.contains(i))
                .map(|i| h.edge(i).clone())
                .collect();
            edges.push(Edge::new(Label::Nonterminal(fresh), ext));
            let new = Hypergraph::new(h.node_count(), edges, h.ext().to_vec());
            match host {
                None => g.start = new,
                Some(b) => {
                    g.rules.insert(b, new);
                }
            }
            g.rules.insert(fresh, bundle);
            work.push(Some(fresh));
        }
        g
    }

    /// Internal nodes of `val(A)` for every nonterminal.
    pub fn node_counts(&self) -> BTreeMap<u32, u64> {
        let mut counts = BTreeMap::new();
        for a in self.bottom_up() {
            let rhs = &self.rules[&a];
            let own = rhs.node_count() as u64 - rhs.rank() as u64;
            let sub: u64 = nonterminals_of(rhs).map(|b| counts[&b]).sum();
            counts.insert(a, own + sub);
        }
        counts
    }

    /// Length of the longest chain of nonterminal references from the start
    /// graph; 0 without rules.
    pub fn height(&self) -> usize {
        let mut h: HashMap<u32, usize> = HashMap::new();
        for a in self.bottom_up() {
            let below = nonterminals_of(&self.rules[&a]).map(|b| h[&b]).max().unwrap_or(0);
            h.insert(a, below + 1);
        }
        nonterminals_of(&self.start).map(|a| h[&a]).max().unwrap_or(0)
    }

    pub fn stats(&self) -> GrammarStats {
        GrammarStats {
            rules: self.rules.len(),
            size: self.size(),
            height: self.height(),
            nodes: self.node_counts(),
        }
    }

    /// Text dump for debugging and tests.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        write!(out, "S -> {}", self.start).unwrap();
        for (a, g) in &self.rules {
            write!(out, "N{a}/{} -> {}", g.rank(), g).unwrap();
        }
        out
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

pub(crate) fn nonterminals_of(g: &Hypergraph) -> impl Iterator<Item = u32> + '_ {
    g.edges().iter().filter_map(|e| match e.label {
        Label::Nonterminal(a) => Some(a),
        Label::Terminal(_) => None,
    })
}

/// Size of the graph holding one edge of the given rank on its own nodes.
pub fn handle_size(rank: usize) -> usize {
    rank + if rank <= 2 { 1 } else { rank }
}

pub(crate) fn contribution_of(rhs: &Hypergraph, refs: usize) -> i64 {
    let size = rhs.size().total as i64;
    refs as i64 * (size - handle_size(rhs.rank()) as i64) - size
}

fn merge_repeats(h: &Hypergraph, a: u32, keep: &[usize], rep: &[usize]) -> Hypergraph {
    let n = h.node_count() as usize;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let label = Label::Nonterminal(a);
    for e in h.edges().iter().filter(|e| e.label == label) {
        for (j, &i) in rep.iter().enumerate() {
            if i != j {
                let (x, y) = (find(&mut parent, e.att[i] as usize), find(&mut parent, e.att[j] as usize));
                let (lo, hi) = (x.min(y), x.max(y));
                parent[hi] = lo;
            }
        }
    }
    let mut new_id = vec![0u32; n + 1];
    let mut count = 0;
    for v in 1..=n {
        if find(&mut parent, v) == v {
            count += 1;
            new_id[v] = count;
        }
    }
    let mut map = |v: NodeId| new_id[find(&mut parent, v as usize)];
    let edges = h
        .edges()
        .iter()
        .map(|e| {
            let att = if e.label == label {
                keep.iter().map(|&i| map(e.att[i])).collect()
            } else {
                e.att.iter().map(|&v| map(v)).collect()
            };
            Edge::new(e.label, att)
        })
        .collect();
    let ext = h.ext().iter().map(|&v| map(v)).collect();
    Hypergraph::new(count, edges, ext)
}
