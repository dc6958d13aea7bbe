//! Small hand-built graphs and grammars used by tests and documentation.
//!
//! Terminal label 1 is `a`, 2 is `b`.

use std::collections::BTreeMap;

use crate::grammar::Grammar;
use crate::hypergraph::Hypergraph;

/// Three parallel `A`-edges, `A` deriving an `a`-edge followed by a `b`-edge.
pub fn intro_grammar() -> Grammar {
    let s = Hypergraph::builder()
        .nodes(2)
        .nonterminal(1, &[1, 2])
        .nonterminal(1, &[1, 2])
        .nonterminal(1, &[1, 2])
        .build();
    let a = Hypergraph::builder().nodes(3).terminal(1, &[1, 2]).terminal(2, &[2, 3]).ext(&[1, 3]).build();
    Grammar::new(s, BTreeMap::from([(1, a)]))
}

/// The uncompressed graph of [`intro_grammar`], before any replacement.
pub fn intro_graph() -> Hypergraph {
    intro_grammar().val()
}

/// A grammar with a rank-3 rule `B` (id 2) using the rank-2 rule `A` (id 1).
pub fn dt_grammar() -> Grammar {
    let s = Hypergraph::builder()
        .nodes(3)
        .nonterminal(2, &[1, 2, 3])
        .nonterminal(1, &[1, 2])
        .nonterminal(1, &[1, 2])
        .nonterminal(1, &[2, 3])
        .build();
    let a = Hypergraph::builder().nodes(3).terminal(1, &[1, 2]).terminal(1, &[2, 3]).ext(&[1, 3]).build();
    let b = Hypergraph::builder()
        .nodes(4)
        .terminal(2, &[1, 2])
        .terminal(2, &[3, 2])
        .nonterminal(1, &[4, 2])
        .ext(&[1, 4, 3])
        .build();
    Grammar::new(s, BTreeMap::from([(1, a), (2, b)]))
}

/// A rank-2 rule referenced four times whose contribution is 3.
pub fn pruning_grammar() -> Grammar {
    let s = Hypergraph::builder()
        .nodes(9)
        .terminal(1, &[1, 2])
        .terminal(1, &[1, 4])
        .terminal(1, &[1, 6])
        .terminal(1, &[1, 8])
        .terminal(1, &[5, 7])
        .terminal(1, &[9, 3])
        .nonterminal(1, &[2, 3])
        .nonterminal(1, &[4, 5])
        .nonterminal(1, &[6, 7])
        .nonterminal(1, &[8, 9])
        .build();
    let a = Hypergraph::builder().nodes(3).terminal(1, &[1, 2]).terminal(1, &[1, 3]).ext(&[1, 2]).build();
    Grammar::new(s, BTreeMap::from([(1, a)]))
}

/// A path of forty `a`-edges, as a start graph `A32 A4 A4` over the rule
/// chain `A32 → A16 A16 → … → A2 → a a`. Nonterminal `i` derives `2^i`
/// edges.
pub fn a40_grammar() -> Grammar {
    let s = Hypergraph::builder()
        .nodes(4)
        .nonterminal(5, &[1, 2])
        .nonterminal(2, &[2, 3])
        .nonterminal(2, &[3, 4])
        .ext(&[1, 4])
        .build();
    let mut rules = BTreeMap::new();
    for i in 1..=5u32 {
        let mut b = Hypergraph::builder().nodes(3).ext(&[1, 3]);
        b = if i == 1 {
            b.terminal(1, &[1, 2]).terminal(1, &[2, 3])
        } else {
            b.nonterminal(i - 1, &[1, 2]).nonterminal(i - 1, &[2, 3])
        };
        rules.insert(i, b.build());
    }
    Grammar::new(s, rules)
}

/// Thirteen nodes around a centre: four arms with two leaves each and two
/// cross edges. The target digram is the directed two-path with all three
/// nodes external. Returns the graph plus two orders: centre first, and
/// the four arm nodes first.
pub fn counting_graph() -> (Hypergraph, Vec<u32>, Vec<u32>) {
    // 1 centre; 2 l, 3 a, 4 r, 5 b; leaves l1 6, l2 7, a1 8, a2 9, r1 10, r2 11, b1 12, b2 13
    let g = Hypergraph::builder()
        .nodes(13)
        .terminal(1, &[2, 1])
        .terminal(1, &[3, 1])
        .terminal(1, &[1, 4])
        .terminal(1, &[1, 5])
        .terminal(1, &[4, 10])
        .terminal(1, &[4, 11])
        .terminal(1, &[9, 3])
        .terminal(1, &[3, 8])
        .terminal(1, &[7, 2])
        .terminal(1, &[2, 6])
        .terminal(1, &[5, 12])
        .terminal(1, &[5, 13])
        .terminal(1, &[9, 10])
        .terminal(1, &[7, 12])
        .build();
    let centre_first: Vec<u32> = (1..=13).collect();
    let arms_first = vec![4, 3, 2, 5, 1, 6, 7, 8, 9, 10, 11, 12, 13];
    (g, centre_first, arms_first)
}
