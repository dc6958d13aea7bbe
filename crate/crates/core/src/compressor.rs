//! The replacement loop: count digram occurrences greedily along a node
//! order, replace the most frequent digram by a fresh nonterminal, repair
//! the counts locally, repeat.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::grammar::{contribution_of, nonterminals_of, Grammar, Instance, Trace};
use crate::hypergraph::{Edge, Hypergraph, Label, NodeId, Violation};
use crate::orders::{order, NodeOrder, OrderKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressorConfig {
    /// Largest digram rank considered; at least 2. `usize::MAX` is unbounded.
    pub max_rank: usize,
    pub order: OrderKind,
    pub prune: bool,
    pub virtual_edge_pass: bool,
}

impl Default for CompressorConfig {
    fn default() -> Self {
        CompressorConfig { max_rank: 4, order: OrderKind::Fp, prune: true, virtual_edge_pass: true }
    }
}

impl CompressorConfig {
    pub fn with_max_rank(mut self, max_rank: usize) -> Self {
        self.max_rank = max_rank;
        self
    }

    pub fn with_order(mut self, order: OrderKind) -> Self {
        self.order = order;
        self
    }

    pub fn unbounded(self) -> Self {
        self.with_max_rank(usize::MAX)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompressError {
    #[error("max rank must be at least 2, got {0}")]
    MaxRank(usize),
    #[error("input graph is invalid: {0:?}")]
    InvalidInput(Vec<Violation>),
}

/// Canonical form of a digram. Nodes are numbered from 0 in order of first
/// appearance in the first edge's attachment, then the second's; the first
/// edge is therefore attached to `0..r1`. Of the two edge orders the one
/// with the smaller key is used, comparing the shape before the labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigramKey {
    pub ranks: (u32, u32),
    /// Attachment of the second edge.
    pub pattern: Vec<u32>,
    /// External nodes, ascending.
    pub ext: Vec<u32>,
    pub labels: (Label, Label),
}

impl DigramKey {
    pub fn rank(&self) -> usize {
        self.ext.len()
    }

    pub fn node_count(&self) -> u32 {
        self.pattern.iter().copied().chain(0..self.ranks.0).max().map_or(0, |m| m + 1)
    }

    /// The right-hand side of a rule for this digram.
    pub fn rhs(&self) -> Hypergraph {
        let e1 = Edge::new(self.labels.0, (1..=self.ranks.0).collect());
        let e2 = Edge::new(self.labels.1, self.pattern.iter().map(|&v| v + 1).collect());
        Hypergraph::new(self.node_count(), vec![e1, e2], self.ext.iter().map(|&v| v + 1).collect())
    }
}

/// Key and local numbering of the pair `(x, y)` in this edge order.
fn orient(x: &Edge, y: &Edge, external: impl Fn(NodeId, usize) -> bool) -> (DigramKey, Vec<NodeId>) {
    let mut locals: Vec<NodeId> = x.att.clone();
    let mut pattern = Vec::with_capacity(y.att.len());
    for &u in &y.att {
        match locals.iter().position(|&w| w == u) {
            Some(i) => pattern.push(i as u32),
            None => {
                pattern.push(locals.len() as u32);
                locals.push(u);
            }
        }
    }
    let ext = (0..locals.len())
        .filter(|&i| {
            let inc = usize::from(i < x.att.len()) + usize::from(pattern.contains(&(i as u32)));
            external(locals[i], inc)
        })
        .map(|i| i as u32)
        .collect();
    let key = DigramKey {
        ranks: (x.att.len() as u32, y.att.len() as u32),
        pattern,
        ext,
        labels: (x.label, y.label),
    };
    (key, locals)
}

/// Allocation-free stand-in for the key of `(x, y)` in this edge order when
/// both ranks are at most 4; equal codes mean equal keys.
fn compact(x: &Edge, y: &Edge, external: impl Fn(NodeId, usize) -> bool) -> Option<u128> {
    let (r1, r2) = (x.att.len(), y.att.len());
    if r1 > 4 || r2 > 4 {
        return None;
    }
    let mut locals = [0; 8];
    locals[..r1].copy_from_slice(&x.att);
    let mut len = r1;
    let mut code = (r1 as u128) << 3 | r2 as u128;
    let mut in_y = 0u8;
    for &u in &y.att {
        let i = locals[..len].iter().position(|&w| w == u).unwrap_or_else(|| {
            locals[len] = u;
            len += 1;
            len - 1
        });
        in_y |= 1 << i;
        code = code << 4 | i as u128;
    }
    let mut ext = 0u128;
    for (i, &u) in locals[..len].iter().enumerate() {
        let inc = usize::from(i < r1) + usize::from(in_y >> i & 1 == 1);
        if external(u, inc) {
            ext |= 1 << i;
        }
    }
    let label = |l: Label| (l.is_nonterminal() as u128) << 32 | l.id() as u128;
    Some(((code << 8 | ext) << 66) | label(x.label) << 33 | label(y.label))
}

/// A greedily chosen occurrence: edge indices in key order and the node
/// whose scan found it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub edges: [usize; 2],
    pub center: NodeId,
}

/// Non-overlapping occurrences per digram, in the order they were found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccurrenceIndex {
    pub digrams: BTreeMap<DigramKey, Vec<Occurrence>>,
}

impl OccurrenceIndex {
    pub fn count(&self, key: &DigramKey) -> usize {
        self.digrams.get(key).map_or(0, Vec::len)
    }

    pub fn total(&self) -> usize {
        self.digrams.values().map(Vec::len).sum()
    }
}

/// Greedy occurrence counting of `g` along `order`.
pub fn count_occurrences(g: &Hypergraph, order: &NodeOrder, max_rank: usize) -> OccurrenceIndex {
    let c = Compressor::with_order(g, order.clone(), max_rank);
    c.index()
}

#[derive(Clone, Debug)]
struct WorkEdge {
    edge: Edge,
    alive: bool,
    inst: Option<usize>,
    /// Live occurrences containing this edge.
    uses: Vec<u32>,
}

#[derive(Clone, Debug)]
struct Occ {
    digram: u32,
    edges: [u32; 2],
    center: NodeId,
    seq: u64,
}

/// Frequency buckets: exact buckets below `√m`, one unsorted bucket above.
#[derive(Clone, Debug)]
struct Queue {
    threshold: usize,
    buckets: Vec<BTreeSet<(DigramKey, u32)>>,
    top: HashSet<u32>,
    filed: HashMap<u32, usize>,
}

impl Queue {
    fn new(m: usize) -> Self {
        let threshold = ((m as f64).sqrt().ceil() as usize).max(3);
        Queue { threshold, buckets: vec![BTreeSet::new(); threshold], top: HashSet::new(), filed: HashMap::new() }
    }

    fn update(&mut self, d: u32, key: &DigramKey, count: usize) {
        if let Some(old) = self.filed.remove(&d) {
            if old >= self.threshold {
                self.top.remove(&d);
            } else {
                self.buckets[old].remove(&(key.clone(), d));
            }
        }
        if count >= 2 {
            self.filed.insert(d, count);
            if count >= self.threshold {
                self.top.insert(d);
            } else {
                self.buckets[count].insert((key.clone(), d));
            }
        }
    }

    fn select(&self, keys: &[DigramKey]) -> Option<u32> {
        if !self.top.is_empty() {
            return self
                .top
                .iter()
                .copied()
                .max_by(|&a, &b| self.filed[&a].cmp(&self.filed[&b]).then_with(|| keys[b as usize].cmp(&keys[a as usize])));
        }
        self.buckets.iter().rev().find_map(|b| b.first().map(|&(_, d)| d))
    }
}

/// What one replacement step did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub nonterminal: u32,
    pub digram: DigramKey,
    pub occurrences: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompressStats {
    pub input_size: usize,
    pub replacements: usize,
    pub virtual_edges: usize,
    /// Pairs examined while counting occurrences.
    pub pair_ops: u64,
    pub class_count: Option<usize>,
    /// Set when the grammar was not smaller than the input and the input
    /// was kept instead.
    pub fell_back: bool,
}

#[derive(Clone, Debug)]
pub struct Compressed {
    pub grammar: Grammar,
    /// `mapping[v - 1]` is the input node of node `v` of `val(grammar)`.
    pub mapping: Vec<NodeId>,
    /// Replaced digrams in order, before pruning.
    pub digrams: Vec<DigramKey>,
    pub stats: CompressStats,
}

impl Compressed {
    /// `val(grammar)` with input node ids.
    pub fn restore(&self) -> Hypergraph {
        self.grammar.val().rename(&self.mapping)
    }
}

/// Incremental state of the replacement loop.
#[derive(Clone, Debug)]
pub struct Compressor {
    node_count: u32,
    ext: Vec<NodeId>,
    is_ext: Vec<bool>,
    alive: Vec<bool>,
    degree: Vec<usize>,
    incidence: Vec<Vec<u32>>,
    edges: Vec<WorkEdge>,
    order: NodeOrder,
    max_rank: usize,

    keys: Vec<DigramKey>,
    ids: HashMap<DigramKey, u32>,
    /// Classification by compact code: digram and whether the edges swap.
    classified: HashMap<u128, Option<(u32, bool)>>,
    lists: Vec<BTreeSet<(u32, u64, u32)>>,
    occs: Vec<Option<Occ>>,
    centered: Vec<Vec<u32>>,
    seq: u64,
    dirty: BTreeSet<(u32, NodeId)>,
    changed: HashSet<u32>,
    queue: Queue,

    rules: Vec<Hypergraph>,
    instances: Vec<Instance>,
    history: Vec<DigramKey>,
    pair_ops: u64,
    virtual_edges: usize,
}

impl Compressor {
    pub fn new(g: &Hypergraph, kind: OrderKind, max_rank: usize) -> Self {
        Self::with_order(g, order(g, kind), max_rank)
    }

    pub fn with_order(g: &Hypergraph, order: NodeOrder, max_rank: usize) -> Self {
        let n = g.node_count() as usize;
        assert_eq!(order.len(), n, "order must cover every node");
        let mut is_ext = vec![false; n + 1];
        for &v in g.ext() {
            is_ext[v as usize] = true;
        }
        let mut c = Compressor {
            node_count: g.node_count(),
            ext: g.ext().to_vec(),
            is_ext,
            alive: vec![true; n + 1],
            degree: vec![0; n + 1],
            incidence: vec![Vec::new(); n + 1],
            edges: Vec::with_capacity(g.edges().len()),
            order,
            max_rank,
            keys: Vec::new(),
            ids: HashMap::new(),
            classified: HashMap::new(),
            lists: Vec::new(),
            occs: Vec::new(),
            centered: vec![Vec::new(); n + 1],
            seq: 0,
            dirty: BTreeSet::new(),
            changed: HashSet::new(),
            queue: Queue::new(g.edges().len()),
            rules: Vec::new(),
            instances: Vec::new(),
            history: Vec::new(),
            pair_ops: 0,
            virtual_edges: 0,
        };
        for e in g.edges() {
            c.add_edge(e.clone(), None);
        }
        c.settle();
        c
    }

    fn pos(&self, v: NodeId) -> u32 {
        self.order.position(v)
    }

    fn mark(&mut self, v: NodeId) {
        self.dirty.insert((self.pos(v), v));
    }

    fn add_edge(&mut self, edge: Edge, inst: Option<usize>) -> u32 {
        let id = self.edges.len() as u32;
        for &v in &edge.att {
            self.incidence[v as usize].push(id);
            self.degree[v as usize] += 1;
            self.mark(v);
        }
        self.edges.push(WorkEdge { edge, alive: true, inst, uses: Vec::new() });
        id
    }

    fn remove_edge(&mut self, e: u32) {
        let we = &mut self.edges[e as usize];
        we.alive = false;
        let uses = std::mem::take(&mut we.uses);
        let att = we.edge.att.clone();
        for o in uses {
            if let Some(occ) = self.delete_occ(o) {
                let other = if occ.edges[0] == e { occ.edges[1] } else { occ.edges[0] };
                for v in self.edges[other as usize].edge.att.clone() {
                    self.mark(v);
                }
                self.centered[occ.center as usize].retain(|&x| x != o);
            }
        }
        for v in att {
            self.degree[v as usize] -= 1;
            self.mark(v);
            let inc = &mut self.incidence[v as usize];
            if inc.len() > 2 * self.degree[v as usize] + 4 {
                let edges = &self.edges;
                inc.retain(|&x| edges[x as usize].alive);
            }
        }
    }

    /// Unlinks an occurrence everywhere except from its centre's list.
    fn delete_occ(&mut self, o: u32) -> Option<Occ> {
        let occ = self.occs[o as usize].take()?;
        let p = self.pos(occ.center);
        self.lists[occ.digram as usize].remove(&(p, occ.seq, o));
        for &e in &occ.edges {
            self.edges[e as usize].uses.retain(|&x| x != o);
        }
        self.changed.insert(occ.digram);
        Some(occ)
    }

    fn intern(&mut self, key: DigramKey) -> u32 {
        if let Some(&d) = self.ids.get(&key) {
            return d;
        }
        let d = self.keys.len() as u32;
        self.ids.insert(key.clone(), d);
        self.keys.push(key);
        self.lists.push(BTreeSet::new());
        d
    }

    /// Digram of the pair, with the edges in key order; `None` when the
    /// digram has no external node or too high a rank.
    fn classify(&mut self, x: u32, y: u32) -> Option<(u32, u32, u32)> {
        let (ex, ey) = (&self.edges[x as usize].edge, &self.edges[y as usize].edge);
        let external = |u: NodeId, inc: usize| self.is_ext[u as usize] || self.degree[u as usize] > inc;
        let code = compact(ex, ey, external);
        let found = match code.and_then(|c| self.classified.get(&c)) {
            Some(&hit) => hit,
            None => {
                let (k1, _) = orient(ex, ey, external);
                let (k2, _) = orient(ey, ex, external);
                let (key, swap) = if k2 < k1 { (k2, true) } else { (k1, false) };
                let found = if key.ext.is_empty() || key.rank() > self.max_rank {
                    None
                } else {
                    Some((self.intern(key), swap))
                };
                if let Some(c) = code {
                    self.classified.insert(c, found);
                }
                found
            }
        };
        found.map(|(d, swap)| if swap { (d, y, x) } else { (d, x, y) })
    }

    fn used(&self, e: u32, d: u32, v: NodeId) -> bool {
        let pv = self.pos(v);
        self.edges[e as usize].uses.iter().any(|&o| {
            let occ = self.occs[o as usize].as_ref().unwrap();
            occ.digram == d && (occ.center == v || self.pos(occ.center) < pv)
        })
    }

    /// Redoes the greedy pairing around `v`, trusting the occurrences found
    /// at earlier nodes.
    fn recompute(&mut self, v: NodeId) {
        let pv = self.pos(v);
        let mut old = Vec::new();
        for o in std::mem::take(&mut self.centered[v as usize]) {
            if let Some(occ) = self.delete_occ(o) {
                old.push((occ.digram, occ.edges));
            }
        }
        let mut typed: Vec<((Label, u32), u32)> = Vec::new();
        for &e in &self.incidence[v as usize] {
            let we = &self.edges[e as usize];
            if we.alive {
                let p = we.edge.att.iter().position(|&u| u == v).unwrap() as u32;
                typed.push(((we.edge.label, p), e));
            }
        }
        typed.sort();
        let mut runs: Vec<Vec<u32>> = Vec::new();
        for (i, &(t, e)) in typed.iter().enumerate() {
            if i == 0 || typed[i - 1].0 != t {
                runs.push(Vec::new());
            }
            runs.last_mut().unwrap().push(e);
        }
        let mut new = Vec::new();
        for a in 0..runs.len() {
            for b in a..runs.len() {
                let (e1, e2) = if a == b {
                    runs[a].split_at(runs[a].len() / 2)
                } else {
                    (&runs[a][..], &runs[b][..])
                };
                let (e1, e2) = (e1.to_vec(), e2.to_vec());
                let (mut i, mut j) = (0, 0);
                while i < e1.len() && j < e2.len() {
                    self.pair_ops += 1;
                    let (x, y) = (e1[i], e2[j]);
                    match self.classify(x, y) {
                        None => j += 1,
                        Some((d, f1, f2)) => {
                            if self.used(x, d, v) {
                                i += 1;
                            } else if self.used(y, d, v) {
                                j += 1;
                            } else {
                                let o = self.occs.len() as u32;
                                self.seq += 1;
                                self.occs.push(Some(Occ { digram: d, edges: [f1, f2], center: v, seq: self.seq }));
                                self.lists[d as usize].insert((pv, self.seq, o));
                                self.edges[f1 as usize].uses.push(o);
                                self.edges[f2 as usize].uses.push(o);
                                self.centered[v as usize].push(o);
                                self.changed.insert(d);
                                new.push((d, [f1, f2]));
                                i += 1;
                                j += 1;
                            }
                        }
                    }
                }
            }
        }
        let old_set: HashSet<_> = old.iter().copied().collect();
        let new_set: HashSet<_> = new.iter().copied().collect();
        for (_, edges) in old_set.symmetric_difference(&new_set) {
            for &e in edges {
                for &u in &self.edges[e as usize].edge.att {
                    let pu = self.order.position(u);
                    if pu > pv {
                        self.dirty.insert((pu, u));
                    }
                }
            }
        }
    }

    /// Processes dirty nodes in order and refreshes the queue.
    fn settle(&mut self) {
        while let Some((_, v)) = self.dirty.pop_first() {
            self.recompute(v);
        }
        for d in std::mem::take(&mut self.changed) {
            let count = self.lists[d as usize].len();
            self.queue.update(d, &self.keys[d as usize], count);
        }
    }

    /// Replaces every listed occurrence of the most frequent digram.
    pub fn step(&mut self) -> Option<Replacement> {
        let d = self.queue.select(&self.keys)?;
        let key = self.keys[d as usize].clone();
        let nt = self.rules.len() as u32 + 1;
        self.rules.push(key.rhs());
        let occ_ids: Vec<u32> = self.lists[d as usize].iter().map(|&(_, _, o)| o).collect();
        for &o in &occ_ids {
            let occ = self.occs[o as usize].clone().expect("listed occurrence is live");
            let [x, y] = occ.edges;
            let (ex, ey) = (&self.edges[x as usize].edge, &self.edges[y as usize].edge);
            let (_, locals) = orient(ex, ey, |_, _| false);
            let att: Vec<NodeId> = key.ext.iter().map(|&i| locals[i as usize]).collect();
            let removal: Vec<NodeId> = (0..locals.len() as u32)
                .filter(|i| !key.ext.contains(i))
                .map(|i| locals[i as usize])
                .collect();
            let children = vec![self.edges[x as usize].inst, self.edges[y as usize].inst];
            self.instances.push(Instance { nonterminal: nt, labels: removal.clone(), children });
            let inst = self.instances.len() - 1;
            self.remove_edge(x);
            self.remove_edge(y);
            for r in removal {
                self.alive[r as usize] = false;
            }
            self.add_edge(Edge::new(Label::Nonterminal(nt), att), Some(inst));
        }
        self.history.push(key.clone());
        self.settle();
        Some(Replacement { nonterminal: nt, digram: key, occurrences: occ_ids.len() })
    }

    /// Joins the components of the current graph into a chain of virtual
    /// edges between their smallest nodes. Returns the number added.
    pub fn add_virtual_edges(&mut self) -> usize {
        let n = self.node_count as usize;
        let mut comp = vec![usize::MAX; n + 1];
        let mut reps = Vec::new();
        for s in 1..=n {
            if !self.alive[s] || comp[s] != usize::MAX {
                continue;
            }
            comp[s] = reps.len();
            let mut stack = vec![s as NodeId];
            while let Some(u) = stack.pop() {
                for &e in &self.incidence[u as usize] {
                    let we = &self.edges[e as usize];
                    if !we.alive {
                        continue;
                    }
                    for &w in &we.edge.att {
                        if comp[w as usize] == usize::MAX {
                            comp[w as usize] = reps.len();
                            stack.push(w);
                        }
                    }
                }
            }
            reps.push(s as NodeId);
        }
        for w in reps.windows(2) {
            self.add_edge(Edge::new(Label::VIRTUAL, vec![w[0], w[1]]), None);
        }
        let added = reps.len().saturating_sub(1);
        self.virtual_edges += added;
        self.settle();
        added
    }

    pub fn order(&self) -> &NodeOrder {
        &self.order
    }

    pub fn pair_ops(&self) -> u64 {
        self.pair_ops
    }

    pub fn history(&self) -> &[DigramKey] {
        &self.history
    }

    /// The live graph, keeping every input node, with the working id of
    /// each of its edges.
    pub fn working_graph(&self) -> (Hypergraph, Vec<usize>) {
        let ids: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].alive).collect();
        let edges = ids.iter().map(|&e| self.edges[e].edge.clone()).collect();
        (Hypergraph::new(self.node_count, edges, self.ext.clone()), ids)
    }

    /// Current occurrence lists, with working edge ids.
    pub fn index(&self) -> OccurrenceIndex {
        let mut digrams = BTreeMap::new();
        for (d, list) in self.lists.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let occs = list
                .iter()
                .map(|&(_, _, o)| {
                    let occ = self.occs[o as usize].as_ref().unwrap();
                    Occurrence { edges: [occ.edges[0] as usize, occ.edges[1] as usize], center: occ.center }
                })
                .collect();
            digrams.insert(self.keys[d].clone(), occs);
        }
        OccurrenceIndex { digrams }
    }

    /// The current start graph and rules, with the trace that labels every
    /// derived node with its input id.
    pub fn grammar(&self) -> (Grammar, Trace) {
        let n = self.node_count as usize;
        let mut new_id = vec![0; n + 1];
        let mut root_labels = Vec::new();
        for v in 1..=n {
            if self.alive[v] {
                root_labels.push(v as u32);
                new_id[v] = root_labels.len() as NodeId;
            }
        }
        let mut edges = Vec::new();
        let mut root_children = Vec::new();
        for we in self.edges.iter().filter(|we| we.alive) {
            edges.push(Edge::new(we.edge.label, we.edge.att.iter().map(|&v| new_id[v as usize]).collect()));
            root_children.push(we.inst);
        }
        let ext = self.ext.iter().map(|&v| new_id[v as usize]).collect();
        let start = Hypergraph::new(root_labels.len() as u32, edges, ext);
        let rules = self.rules.iter().enumerate().map(|(i, r)| (i as u32 + 1, r.clone())).collect();
        let trace = Trace { root_labels, root_children, instances: self.instances.clone() };
        (Grammar::new(start, rules), trace)
    }
}

pub fn compress(g: &Hypergraph, config: &CompressorConfig) -> Result<Compressed, CompressError> {
    if config.max_rank < 2 {
        return Err(CompressError::MaxRank(config.max_rank));
    }
    g.validate().map_err(CompressError::InvalidInput)?;
    let ord = order(g, config.order);
    let class_count = ord.class_count;
    let mut c = Compressor::with_order(g, ord, config.max_rank);
    while c.step().is_some() {}
    let uses_virtual = g.edges().iter().any(|e| e.label == Label::VIRTUAL);
    if config.virtual_edge_pass && !uses_virtual && c.add_virtual_edges() > 0 {
        while c.step().is_some() {}
    }
    let (mut grammar, mut trace) = c.grammar();
    if c.virtual_edges > 0 {
        grammar.remove_terminal(Label::VIRTUAL, Some(&mut trace));
    }
    if config.prune {
        prune_traced(&mut grammar, &mut trace);
    }
    renumber_nonterminals(&mut grammar, &mut trace);
    let mut stats = CompressStats {
        input_size: g.size().total,
        replacements: c.history.len(),
        virtual_edges: c.virtual_edges,
        pair_ops: c.pair_ops,
        class_count,
        fell_back: false,
    };
    if grammar.size() > stats.input_size {
        grammar = Grammar::trivial(g.clone());
        trace = Trace::identity(&grammar);
        stats.fell_back = true;
    }
    let (_, mapping) = grammar.val_traced(&trace);
    Ok(Compressed { grammar, mapping, digrams: c.history, stats })
}

/// Inlines every nonterminal referenced once, then, from the oldest rule
/// up, every nonterminal whose contribution is not positive.
pub fn prune(g: &Grammar) -> Grammar {
    let mut g = g.clone();
    prune_in_place(&mut g, None);
    g
}

pub fn prune_traced(g: &mut Grammar, trace: &mut Trace) {
    prune_in_place(g, Some(trace));
}

fn prune_in_place(g: &mut Grammar, mut trace: Option<&mut Trace>) {
    let mut refs = g.references();
    let inline = |g: &mut Grammar, refs: &mut HashMap<u32, usize>, a: u32, trace: Option<&mut Trace>| {
        let r = refs.remove(&a).unwrap_or(0);
        for b in nonterminals_of(&g.rules[&a]).collect::<Vec<_>>() {
            let c = refs.entry(b).or_insert(0);
            *c = *c + r - 1;
        }
        g.inline_in_place(a, trace).expect("rule exists");
    };
    let once: Vec<u32> = g.rules.keys().copied().filter(|a| refs.get(a) == Some(&1)).collect();
    for a in once {
        inline(g, &mut refs, a, trace.as_deref_mut());
    }
    let ids: Vec<u32> = g.rules.keys().copied().collect();
    for a in ids {
        let con = contribution_of(&g.rules[&a], refs.get(&a).copied().unwrap_or(0));
        if con <= 0 {
            inline(g, &mut refs, a, trace.as_deref_mut());
        }
    }
}

/// Renames the nonterminals to `1..` keeping their relative order.
fn renumber_nonterminals(g: &mut Grammar, trace: &mut Trace) {
    let map: HashMap<u32, u32> = g.rules.keys().enumerate().map(|(i, &a)| (a, i as u32 + 1)).collect();
    if map.iter().all(|(a, b)| a == b) {
        return;
    }
    let rename = |h: &Hypergraph| {
        let (n, edges, ext) = h.clone().into_parts();
        let edges = edges
            .into_iter()
            .map(|e| match e.label {
                Label::Nonterminal(a) => Edge::new(Label::Nonterminal(map[&a]), e.att),
                Label::Terminal(_) => e,
            })
            .collect();
        Hypergraph::new(n, edges, ext)
    };
    g.start = rename(&g.start);
    g.rules = g.rules.iter().map(|(a, r)| (map[a], rename(r))).collect();
    for inst in &mut trace.instances {
        if let Some(&b) = map.get(&inst.nonterminal) {
            inst.nonterminal = b;
        }
    }
}
