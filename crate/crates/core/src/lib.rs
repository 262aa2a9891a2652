//! Exact (p,q)-biclique counting on bipartite graphs.
//!
//! A (p,q)-biclique is a complete bipartite subgraph with p nodes on one
//! side and q on the other. This crate counts them exactly — globally, per
//! node, or for every size in a rectangle at once — with a backtracking
//! search that resolves fully-connected candidates combinatorially instead
//! of enumerating them, plus a per-node cost model that picks between
//! node-anchored and edge-anchored subproblems.
//!
//! ```
//! use biclique_core::{core_order, top_level_count, BipartiteGraph, Strategy};
//!
//! let g = BipartiteGraph::complete(4, 4);
//! let rank = core_order(&g);
//! let (count, _metrics) = top_level_count(&g, &rank, 2, 2, Strategy::Estimator).unwrap();
//! assert_eq!(count, 36u32.into());
//! ```

mod binom;
mod error;
mod estimator;
mod graph;
mod io;
mod modes;
pub mod oracle;
mod search;
mod state;

pub use binom::binomial;
pub use error::{Error, Result};
pub use estimator::{build_cost_index, cost_es, estimate_node, estimate_node_costs, CostIndex, SplitDecision};
pub use graph::{
    core_order, pq_core_reduce, BipartiteGraph, CoreMaps, GraphStats, NodeRank, Rational,
};
pub use io::{load_graph, load_graph_from_path, write_plain_edge_list, EdgeListFormat, LoadedGraph};
pub use modes::{local_count, local_count_with, range_count, range_count_with, LocalCounts, RangeMatrix, SizeRange};
pub use search::{
    count_contribution, top_level_count, top_level_count_with, top_level_count_with_decisions,
    top_level_count_with_index, SearchMetrics, SearchOptions, Strategy,
};

/// Arbitrary-precision non-negative counter used throughout.
pub type BigCount = num_bigint::BigUint;
