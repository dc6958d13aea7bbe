//! Graph compression with straight-line hyperedge replacement grammars.
//!
//! [`compressor::compress`] turns a graph into a [`grammar::Grammar`] by
//! repeatedly replacing the most frequent pair of adjacent edges with a
//! nonterminal edge. [`codec`] writes grammars to a compact container and
//! [`queries`] answers neighbourhood, reachability and regular path queries
//! without decompressing.

pub mod codec;
pub mod compressor;
pub mod fixtures;
pub mod generators;
pub mod grammar;
pub mod hypergraph;
pub mod io;
pub mod orders;
pub mod queries;

pub use grammar::Grammar;
pub use hypergraph::{Edge, Hypergraph, Label, LabelDictionary, NodeId};
