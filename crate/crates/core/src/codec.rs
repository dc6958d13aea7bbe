//! Binary container for grammars: k²-trees for the start graph, Elias-δ
//! edge lists for the rules.
//!
//! Layout after the 4-byte magic `GRG1` and a version byte, as one
//! MSB-first bit stream (counts that may be zero are stored as `δ(x+1)`):
//!
//! ```text
//! header      δ(|V_S|+1) δ(#names+1) δ(#rules+1) δ(#perms+1)
//! names       per name: δ(len+1) then UTF-8 bytes
//! ext of S    δ(|ext|+1) δ(v)…
//! sections    δ(#sections+1); per label present in S, adjacency sections
//!             first, then incidence, labels ascending within each:
//!             kind(1) nonterminal(1) δ(id+1) [δ(rows+1) if incidence]
//!             δ(|T|+1) δ(|L|+1) T L
//! perms       per permutation: δ(len) δ(p+1)…;
//!             then one ⌈log₂ #perms⌉-bit index per incidence row
//! rules       per rule, ascending: δ(id) δ(|V|+1) δ(rank+1)
//!             explicit(1) [δ(v)… if explicit] empty(1) [edge list]
//! mapping     present(1) [names(1) δ(n+1) (δ(id+1) | string)…]
//! ```
//!
//! A rule's edge list is `δ(#edges)`, then per edge a nonterminal bit,
//! `δ(rank)`, per attached node an external bit and `δ(id)`, and `δ(label)`.
//! External nodes are read back in id order unless the header lists them.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grammar::Grammar;
use crate::hypergraph::{Edge, Hypergraph, Label, LabelDictionary, NodeId};

pub const MAGIC: &[u8; 4] = b"GRG1";
pub const VERSION: u8 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("not a grammar container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {found} (expected {expected})")]
    Version { found: u8, expected: u8 },
    #[error("container is truncated")]
    Truncated,
    #[error("malformed container: {0}")]
    Malformed(String),
    #[error("cannot encode: {0}")]
    Unsupported(String),
    #[error("index ({0}, {1}) outside the matrix")]
    OutOfRange(u64, u64),
}

/// A growable bit sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (63 - self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.push(value >> i & 1 == 1);
        }
    }

    pub fn extend(&mut self, other: &BitVec) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range");
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Packs into bytes, zero-padding the last one.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len.div_ceil(8));
        for i in 0..self.len.div_ceil(8) {
            out.push((self.words[i / 8] >> (56 - 8 * (i % 8))) as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut b = BitVec::new();
        for &byte in bytes {
            b.push_bits(byte as u64, 8);
        }
        b
    }
}

impl std::fmt::Display for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitVec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut b = BitVec::new();
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => return Err(format!("not a bit: {c:?}")),
            }
        }
        Ok(b)
    }
}

pub struct BitReader<'a> {
    bits: &'a BitVec,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitVec) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn bit(&mut self) -> Result<bool, CodecError> {
        if self.pos >= self.bits.len() {
            return Err(CodecError::Truncated);
        }
        self.pos += 1;
        Ok(self.bits.get(self.pos - 1))
    }

    pub fn bits(&mut self, width: u32) -> Result<u64, CodecError> {
        let mut v = 0u64;
        for _ in 0..width {
            v = v << 1 | self.bit()? as u64;
        }
        Ok(v)
    }

    pub fn delta(&mut self) -> Result<u64, CodecError> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
            if zeros > 6 {
                return Err(CodecError::Malformed("δ-code too long".into()));
            }
        }
        let len = (1u64 << zeros | self.bits(zeros)?) as u32;
        if len > 64 {
            return Err(CodecError::Malformed("δ-code too long".into()));
        }
        Ok(1u64.checked_shl(len - 1).unwrap_or(0) | self.bits(len - 1)?)
    }

    /// A count stored as `δ(x+1)`.
    pub fn count(&mut self) -> Result<u64, CodecError> {
        Ok(self.delta()? - 1)
    }

    fn vec(&mut self, len: u64) -> Result<BitVec, CodecError> {
        if len > self.remaining() as u64 {
            return Err(CodecError::Truncated);
        }
        let mut b = BitVec::new();
        for _ in 0..len {
            b.push(self.bit()?);
        }
        Ok(b)
    }
}

/// Appends the Elias-δ code of `n ≥ 1`.
pub fn write_delta(out: &mut BitVec, n: u64) {
    assert!(n >= 1, "δ-codes start at 1");
    let len = 64 - n.leading_zeros();
    let len_len = 31 - len.leading_zeros();
    out.push_bits(0, len_len);
    out.push_bits(len as u64, len_len + 1);
    out.push_bits(n, len - 1);
}

pub fn delta_encode(n: u64) -> Result<BitVec, CodecError> {
    if n == 0 {
        return Err(CodecError::Unsupported("δ-code of 0".into()));
    }
    let mut b = BitVec::new();
    write_delta(&mut b, n);
    Ok(b)
}

pub fn delta_decode(bits: &BitVec) -> Result<u64, CodecError> {
    BitReader::new(bits).delta()
}

fn write_count(out: &mut BitVec, x: usize) {
    write_delta(out, x as u64 + 1);
}

/// A k²-tree with k = 2 over a `rows × cols` 0/1 matrix padded to a square
/// power-of-two side. `t` holds the internal levels top-down (the root
/// itself is implicit), `l` the cell level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K2Tree {
    pub rows: u64,
    pub cols: u64,
    pub side: u64,
    pub t: BitVec,
    pub l: BitVec,
    ranks: Vec<u32>,
}

impl K2Tree {
    /// Builds the tree of the matrix with the given one-cells.
    pub fn from_cells(rows: u64, cols: u64, cells: &[(u64, u64)]) -> Self {
        let mut side = 2;
        while side < rows.max(cols) {
            side *= 2;
        }
        let mut t = BitVec::new();
        let mut l = BitVec::new();
        let mut cells: Vec<(u64, u64)> = cells.to_vec();
        cells.sort_unstable();
        cells.dedup();
        // nodes of the current level: (row offset, col offset, cells inside)
        let mut level = vec![(0u64, 0u64, cells)];
        let mut size = side;
        while size > 1 {
            let half = size / 2;
            let out = if half == 1 { &mut l } else { &mut t };
            let mut next = Vec::new();
            for (r0, c0, cells) in level {
                let mut quads: [Vec<(u64, u64)>; 4] = Default::default();
                for (r, c) in cells {
                    let q = ((r - r0) / half * 2 + (c - c0) / half) as usize;
                    quads[q].push((r, c));
                }
                for (q, qc) in quads.into_iter().enumerate() {
                    out.push(!qc.is_empty());
                    if !qc.is_empty() && half > 1 {
                        next.push((r0 + q as u64 / 2 * half, c0 + q as u64 % 2 * half, qc));
                    }
                }
            }
            level = next;
            size = half;
            if level.is_empty() {
                break;
            }
        }
        Self::from_parts(rows, cols, side, t, l)
    }

    pub fn from_matrix(m: &[Vec<bool>]) -> Self {
        let rows = m.len() as u64;
        let cols = m.first().map_or(0, |r| r.len()) as u64;
        let cells: Vec<(u64, u64)> = m
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, &b)| b).map(move |(j, _)| (i as u64, j as u64)))
            .collect();
        Self::from_cells(rows, cols, &cells)
    }

    fn from_parts(rows: u64, cols: u64, side: u64, t: BitVec, l: BitVec) -> Self {
        let mut ranks = Vec::with_capacity(t.words.len() + 1);
        let mut acc = 0u32;
        ranks.push(0);
        for w in &t.words {
            acc += w.count_ones();
            ranks.push(acc);
        }
        K2Tree { rows, cols, side, t, l, ranks }
    }

    /// Ones in `t[0..=i]`.
    fn rank(&self, i: usize) -> usize {
        let w = i / 64;
        let partial = self.t.words[w] >> (63 - i % 64);
        self.ranks[w] as usize + partial.count_ones() as usize
    }

    fn bit_at(&self, pos: usize) -> Option<bool> {
        if pos < self.t.len() {
            Some(self.t.get(pos))
        } else if pos - self.t.len() < self.l.len() {
            Some(self.l.get(pos - self.t.len()))
        } else {
            None
        }
    }

    pub fn cell(&self, row: u64, col: u64) -> Result<bool, CodecError> {
        if row >= self.rows || col >= self.cols {
            return Err(CodecError::OutOfRange(row, col));
        }
        let (mut r, mut c, mut size, mut base) = (row, col, self.side, 0usize);
        loop {
            let half = size / 2;
            let pos = base + (r / half * 2 + c / half) as usize;
            let Some(bit) = self.bit_at(pos) else { return Ok(false) };
            if !bit || half == 1 {
                return Ok(bit);
            }
            base = self.rank(pos) * 4;
            r %= half;
            c %= half;
            size = half;
        }
    }

    /// Columns with a one in `row`, ascending.
    pub fn row(&self, row: u64) -> Result<Vec<u64>, CodecError> {
        if row >= self.rows {
            return Err(CodecError::OutOfRange(row, 0));
        }
        let mut out = Vec::new();
        self.collect(0, self.side, row, true, 0, &mut out);
        Ok(out)
    }

    /// Rows with a one in `col`, ascending.
    pub fn col(&self, col: u64) -> Result<Vec<u64>, CodecError> {
        if col >= self.cols {
            return Err(CodecError::OutOfRange(0, col));
        }
        let mut out = Vec::new();
        self.collect(0, self.side, col, false, 0, &mut out);
        Ok(out)
    }

    fn collect(&self, base: usize, size: u64, fixed: u64, by_row: bool, offset: u64, out: &mut Vec<u64>) {
        if self.t.is_empty() && self.l.is_empty() {
            return;
        }
        let half = size / 2;
        for k in 0..2u64 {
            let q = if by_row { fixed / half * 2 + k } else { k * 2 + fixed / half };
            let pos = base + q as usize;
            if self.bit_at(pos) != Some(true) {
                continue;
            }
            let free = offset + k * half;
            if half == 1 {
                out.push(free);
            } else {
                self.collect(self.rank(pos) * 4, half, fixed % half, by_row, free, out);
            }
        }
    }

    /// All one-cells in row-major order, including any in the padding.
    pub fn ones(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, self.side, 0u64, 0u64)];
        while let Some((base, size, r0, c0)) = stack.pop() {
            let half = size / 2;
            for q in (0..4).rev() {
                let pos = base + q;
                if self.bit_at(pos) != Some(true) {
                    continue;
                }
                let (r, c) = (r0 + q as u64 / 2 * half, c0 + q as u64 % 2 * half);
                if half == 1 {
                    out.push((r, c));
                } else {
                    stack.push((self.rank(pos) * 4, half, r, c));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether the level sizes agree with the one-bits above them.
    fn well_formed(&self) -> bool {
        let depth = self.side.trailing_zeros();
        let (mut pos, mut expected) = (0usize, 4usize);
        for _ in 1..depth {
            if pos + expected > self.t.len() {
                return false;
            }
            let ones = (pos..pos + expected).filter(|&i| self.t.get(i)).count();
            pos += expected;
            expected = 4 * ones;
        }
        pos == self.t.len() && self.l.len() == expected
    }

    pub fn bit_len(&self) -> usize {
        self.t.len() + self.l.len()
    }
}

/// The edge list of a right-hand side.
pub fn encode_rule(rhs: &Hypergraph) -> Result<BitVec, CodecError> {
    let mut out = BitVec::new();
    write_rule_edges(&mut out, rhs)?;
    Ok(out)
}

fn write_rule_edges(out: &mut BitVec, rhs: &Hypergraph) -> Result<(), CodecError> {
    write_delta(out, rhs.edges().len() as u64);
    for e in rhs.edges() {
        out.push(e.label.is_nonterminal());
        write_delta(out, e.rank() as u64);
        for &v in &e.att {
            out.push(rhs.is_external(v));
            write_delta(out, v as u64);
        }
        if e.label.id() == 0 {
            return Err(CodecError::Unsupported(format!("label {} in a rule", e.label)));
        }
        write_delta(out, e.label.id() as u64);
    }
    Ok(())
}

/// Inverse of [`encode_rule`]: edges, with the nodes flagged external in id
/// order. `nodes` is the node count if known, else the largest id.
pub fn decode_rule(bits: &BitVec, nodes: Option<u32>) -> Result<Hypergraph, CodecError> {
    let mut r = BitReader::new(bits);
    let (edges, flagged) = read_rule_edges(&mut r)?;
    let max = edges.iter().flat_map(|e| e.att.iter().copied()).max().unwrap_or(0);
    let n = nodes.unwrap_or(max);
    Ok(Hypergraph::new(n, edges, flagged))
}

fn read_rule_edges(r: &mut BitReader) -> Result<(Vec<Edge>, Vec<NodeId>), CodecError> {
    let count = r.delta()?;
    let mut edges = Vec::new();
    let mut flagged = std::collections::BTreeSet::new();
    for _ in 0..count {
        let nonterminal = r.bit()?;
        let rank = r.delta()?;
        if rank > r.remaining() as u64 {
            return Err(CodecError::Truncated);
        }
        let mut att = Vec::with_capacity(rank as usize);
        for _ in 0..rank {
            let ext = r.bit()?;
            let v = node_id(r.delta()?)?;
            if ext {
                flagged.insert(v);
            }
            att.push(v);
        }
        let id = label_id(r.delta()?)?;
        let label = if nonterminal { Label::Nonterminal(id) } else { Label::Terminal(id) };
        edges.push(Edge::new(label, att));
    }
    Ok((edges, flagged.into_iter().collect()))
}

fn node_id(x: u64) -> Result<NodeId, CodecError> {
    u32::try_from(x).map_err(|_| CodecError::Malformed(format!("node id {x}")))
}

fn label_id(x: u64) -> Result<u32, CodecError> {
    u32::try_from(x).map_err(|_| CodecError::Malformed(format!("label {x}")))
}

/// How val node ids map back to the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeMapping {
    Ids(Vec<u64>),
    Names(Vec<String>),
}

impl NodeMapping {
    pub fn len(&self) -> usize {
        match self {
            NodeMapping::Ids(v) => v.len(),
            NodeMapping::Names(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, v: NodeId) -> String {
        match self {
            NodeMapping::Ids(ids) => ids[(v - 1) as usize].to_string(),
            NodeMapping::Names(names) => names[(v - 1) as usize].clone(),
        }
    }

    /// Numeric ids when every name is a canonical decimal integer.
    pub fn from_names(names: Vec<String>) -> Self {
        let ids: Option<Vec<u64>> = names
            .iter()
            .map(|s| s.parse::<u64>().ok().filter(|n| n.to_string() == *s))
            .collect();
        match ids {
            Some(ids) => NodeMapping::Ids(ids),
            None => NodeMapping::Names(names),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub grammar: Grammar,
    pub labels: LabelDictionary,
    pub mapping: Option<NodeMapping>,
}

fn write_string(out: &mut BitVec, s: &str) {
    write_count(out, s.len());
    for b in s.bytes() {
        out.push_bits(b as u64, 8);
    }
}

fn read_string(r: &mut BitReader) -> Result<String, CodecError> {
    let len = r.count()?;
    if len * 8 > r.remaining() as u64 {
        return Err(CodecError::Truncated);
    }
    let bytes: Vec<u8> = (0..len).map(|_| r.bits(8).map(|b| b as u8)).collect::<Result<_, _>>()?;
    String::from_utf8(bytes).map_err(|_| CodecError::Malformed("label is not UTF-8".into()))
}

fn write_label(out: &mut BitVec, l: Label) {
    out.push(l.is_nonterminal());
    write_delta(out, l.id() as u64 + 1);
}

fn read_label(r: &mut BitReader) -> Result<Label, CodecError> {
    let nt = r.bit()?;
    let id = label_id(r.delta()? - 1)?;
    Ok(if nt { Label::Nonterminal(id) } else { Label::Terminal(id) })
}

fn width(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Serialises the grammar. Deterministic: equal inputs give equal bytes.
pub fn write_container(c: &Container) -> Result<Vec<u8>, CodecError> {
    let g = &c.grammar;
    let s = &g.start;
    let n = s.node_count() as u64;
    let mut by_label: BTreeMap<Label, Vec<&Edge>> = BTreeMap::new();
    for e in s.edges() {
        by_label.entry(e.label).or_default().push(e);
    }
    // adjacency when every edge has rank 2 and none repeats
    let mut adjacency = Vec::new();
    let mut incidence = Vec::new();
    for (label, mut edges) in by_label {
        edges.sort();
        let simple = edges.iter().all(|e| e.rank() == 2) && edges.windows(2).all(|w| w[0] != w[1]);
        if simple {
            adjacency.push((label, edges));
        } else {
            incidence.push((label, edges));
        }
    }
    let mut perms: Vec<Vec<u32>> = Vec::new();
    let mut row_perm = Vec::new();
    for (_, edges) in &incidence {
        for e in edges {
            let mut sorted = e.att.clone();
            sorted.sort_unstable();
            let p: Vec<u32> = e.att.iter().map(|v| sorted.binary_search(v).unwrap() as u32).collect();
            let idx = match perms.iter().position(|q| *q == p) {
                Some(i) => i,
                None => {
                    perms.push(p);
                    perms.len() - 1
                }
            };
            row_perm.push(idx);
        }
    }

    let mut out = BitVec::new();
    for &b in MAGIC {
        out.push_bits(b as u64, 8);
    }
    out.push_bits(VERSION as u64, 8);
    write_count(&mut out, n as usize);
    write_count(&mut out, c.labels.len());
    write_count(&mut out, g.rules.len());
    write_count(&mut out, perms.len());
    for name in c.labels.names() {
        write_string(&mut out, name);
    }
    write_count(&mut out, s.ext().len());
    for &v in s.ext() {
        write_delta(&mut out, v as u64);
    }
    write_count(&mut out, adjacency.len() + incidence.len());
    for (label, edges) in &adjacency {
        out.push(false);
        write_label(&mut out, *label);
        let cells: Vec<(u64, u64)> = edges.iter().map(|e| (e.att[0] as u64 - 1, e.att[1] as u64 - 1)).collect();
        write_tree(&mut out, &K2Tree::from_cells(n, n, &cells));
    }
    for (label, edges) in &incidence {
        out.push(true);
        write_label(&mut out, *label);
        write_count(&mut out, edges.len());
        let cells: Vec<(u64, u64)> = edges
            .iter()
            .enumerate()
            .flat_map(|(i, e)| e.att.iter().map(move |&v| (i as u64, v as u64 - 1)))
            .collect();
        write_tree(&mut out, &K2Tree::from_cells(edges.len() as u64, n, &cells));
    }
    for p in &perms {
        write_delta(&mut out, p.len() as u64);
        for &x in p {
            write_delta(&mut out, x as u64 + 1);
        }
    }
    let w = width(perms.len());
    for &i in &row_perm {
        out.push_bits(i as u64, w);
    }
    for (&a, rhs) in &g.rules {
        if a == 0 {
            return Err(CodecError::Unsupported("nonterminal 0".into()));
        }
        write_delta(&mut out, a as u64);
        write_count(&mut out, rhs.node_count() as usize);
        write_count(&mut out, rhs.rank());
        let flagged: Vec<NodeId> = {
            let mut f: Vec<NodeId> = rhs.edges().iter().flat_map(|e| e.att.iter().copied()).filter(|&v| rhs.is_external(v)).collect();
            f.sort_unstable();
            f.dedup();
            f
        };
        let explicit = flagged != rhs.ext();
        out.push(explicit);
        if explicit {
            for &v in rhs.ext() {
                write_delta(&mut out, v as u64);
            }
        }
        out.push(rhs.edges().is_empty());
        if !rhs.edges().is_empty() {
            write_rule_edges(&mut out, rhs)?;
        }
    }
    match &c.mapping {
        None => out.push(false),
        Some(m) => {
            out.push(true);
            out.push(matches!(m, NodeMapping::Names(_)));
            write_count(&mut out, m.len());
            match m {
                NodeMapping::Ids(ids) => ids.iter().for_each(|&x| write_delta(&mut out, x + 1)),
                NodeMapping::Names(names) => names.iter().for_each(|s| write_string(&mut out, s)),
            }
        }
    }
    Ok(out.to_bytes())
}

fn write_tree(out: &mut BitVec, t: &K2Tree) {
    write_count(out, t.t.len());
    write_count(out, t.l.len());
    out.extend(&t.t);
    out.extend(&t.l);
}

fn read_tree(r: &mut BitReader, rows: u64, cols: u64) -> Result<K2Tree, CodecError> {
    let tl = r.count()?;
    let ll = r.count()?;
    let t = r.vec(tl)?;
    let l = r.vec(ll)?;
    let mut side = 2;
    while side < rows.max(cols) {
        side *= 2;
    }
    let tree = K2Tree::from_parts(rows, cols, side, t, l);
    if !tree.well_formed() {
        return Err(CodecError::Malformed("k²-tree levels do not fit together".into()));
    }
    Ok(tree)
}

fn guard(len: u64, r: &BitReader) -> Result<usize, CodecError> {
    // every counted item takes at least one bit
    if len > r.remaining() as u64 {
        return Err(CodecError::Truncated);
    }
    Ok(len as usize)
}

/// Node counts are not bounded by the stream (isolated nodes cost nothing),
/// so implausibly large ones are refused before allocating.
fn plausible_nodes(n: u64, r: &BitReader) -> Result<NodeId, CodecError> {
    let limit = (1u64 << 20).max(64 * r.bits.len() as u64);
    if n > limit {
        return Err(CodecError::Malformed(format!("node count {n}")));
    }
    node_id(n)
}

pub fn read_container(bytes: &[u8]) -> Result<Container, CodecError> {
    if bytes.len() < 4 {
        return if MAGIC.starts_with(bytes) { Err(CodecError::Truncated) } else { Err(CodecError::BadMagic) };
    }
    if &bytes[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    let Some(&version) = bytes.get(4) else { return Err(CodecError::Truncated) };
    if version != VERSION {
        return Err(CodecError::Version { found: version, expected: VERSION });
    }
    let bits = BitVec::from_bytes(&bytes[5..]);
    let mut r = BitReader::new(&bits);
    let n = r.count()?;
    let n32 = plausible_nodes(n, &r)?;
    let names = guard(r.count()?, &r)?;
    let rules = guard(r.count()?, &r)?;
    let nperms = guard(r.count()?, &r)?;
    let mut labels = LabelDictionary::new();
    for _ in 0..names {
        labels.intern(&read_string(&mut r)?);
    }
    if labels.len() != names {
        return Err(CodecError::Malformed("repeated label name".into()));
    }
    let next = guard(r.count()?, &r)?;
    let mut ext = Vec::with_capacity(next);
    for _ in 0..next {
        ext.push(node_id(r.delta()?)?);
    }
    let sections = guard(r.count()?, &r)?;
    let mut edges = Vec::new();
    let mut pending: Vec<(Label, Vec<Vec<NodeId>>)> = Vec::new();
    for _ in 0..sections {
        let inc = r.bit()?;
        let label = read_label(&mut r)?;
        if !inc {
            let t = read_tree(&mut r, n, n)?;
            for (u, v) in t.ones() {
                edges.push(Edge::new(label, vec![u as NodeId + 1, v as NodeId + 1]));
            }
        } else {
            let rows = r.count()?;
            let t = read_tree(&mut r, rows, n)?;
            let sets = (0..rows)
                .map(|i| t.row(i).map(|cs| cs.into_iter().map(|c| c as NodeId + 1).collect()))
                .collect::<Result<Vec<Vec<NodeId>>, _>>()?;
            pending.push((label, sets));
        }
    }
    let mut perms = Vec::with_capacity(nperms);
    for _ in 0..nperms {
        let len = guard(r.delta()?, &r)?;
        let p = (0..len).map(|_| r.count().map(|x| x as usize)).collect::<Result<Vec<_>, _>>()?;
        perms.push(p);
    }
    let w = width(nperms);
    for (label, sets) in pending {
        for set in sets {
            let idx = r.bits(w)? as usize;
            let p = perms.get(idx).ok_or_else(|| CodecError::Malformed("permutation index".into()))?;
            if p.len() != set.len() || p.iter().any(|&x| x >= set.len()) {
                return Err(CodecError::Malformed("permutation does not fit its edge".into()));
            }
            edges.push(Edge::new(label, p.iter().map(|&x| set[x]).collect()));
        }
    }
    let start = Hypergraph::new(n32, edges, ext);
    let mut map = BTreeMap::new();
    for _ in 0..rules {
        let a = label_id(r.delta()?)?;
        let nodes = plausible_nodes(r.count()?, &r)?;
        let rank = guard(r.count()?, &r)?;
        let explicit = r.bit()?;
        let mut ext = Vec::with_capacity(rank);
        if explicit {
            for _ in 0..rank {
                ext.push(node_id(r.delta()?)?);
            }
        }
        let (edges, flagged) = if r.bit()? { (Vec::new(), Vec::new()) } else { read_rule_edges(&mut r)? };
        if !explicit {
            if flagged.len() != rank {
                return Err(CodecError::Malformed(format!("rule {a}: rank does not match flagged nodes")));
            }
            ext = flagged;
        }
        let rhs = Hypergraph::new(nodes, edges, ext);
        if rhs.validate().is_err() {
            return Err(CodecError::Malformed(format!("rule {a} is not a valid graph")));
        }
        map.insert(a, rhs);
    }
    let mapping = if r.bit()? {
        let named = r.bit()?;
        let len = guard(r.count()?, &r)?;
        Some(if named {
            NodeMapping::Names((0..len).map(|_| read_string(&mut r)).collect::<Result<_, _>>()?)
        } else {
            NodeMapping::Ids((0..len).map(|_| r.count()).collect::<Result<_, _>>()?)
        })
    } else {
        None
    };
    if r.remaining() >= 8 || (0..r.remaining()).any(|_| r.bit().unwrap_or(true)) {
        return Err(CodecError::Malformed("trailing data".into()));
    }
    if start.validate().is_err() {
        return Err(CodecError::Malformed("start graph is not valid".into()));
    }
    Ok(Container { grammar: Grammar::new(start, map), labels, mapping })
}
