//! JSON report shapes. Every count travels as a decimal string so that
//! arbitrary precision survives serialization.

use biclique_core::{BigCount, GraphStats, SearchMetrics};
use serde::Serialize;

#[derive(Serialize)]
pub struct RationalJson {
    pub numer: u64,
    pub denom: u64,
    pub decimal: f64,
}

#[derive(Serialize)]
pub struct StatsJson {
    pub u_count: usize,
    pub v_count: usize,
    pub edge_count: u64,
    pub max_degree_u: usize,
    pub max_degree_v: usize,
    pub avg_degree_u: RationalJson,
    pub avg_degree_v: RationalJson,
}

impl StatsJson {
    pub fn from_stats(s: &GraphStats) -> Self {
        StatsJson {
            u_count: s.u_count,
            v_count: s.v_count,
            edge_count: s.edge_count,
            max_degree_u: s.max_degree_u,
            max_degree_v: s.max_degree_v,
            avg_degree_u: RationalJson {
                numer: s.avg_degree_u.numer,
                denom: s.avg_degree_u.denom,
                decimal: s.avg_degree_u.to_f64(),
            },
            avg_degree_v: RationalJson {
                numer: s.avg_degree_v.numer,
                denom: s.avg_degree_v.denom,
                decimal: s.avg_degree_v.to_f64(),
            },
        }
    }
}

#[derive(Serialize)]
pub struct FractionJson {
    pub numerator: String,
    pub denominator: String,
    pub decimal: Option<f64>,
}

#[derive(Serialize)]
pub struct MetricsJson {
    pub search_calls: u64,
    pub leaf_no_edge: u64,
    pub leaf_hold_limit: u64,
    pub early_cutoffs: u64,
    pub combinatorial: String,
    pub at_hold_limit: String,
    pub combinatorial_fraction: FractionJson,
}

impl MetricsJson {
    pub fn from_metrics(m: &SearchMetrics) -> Self {
        let total = m.total_counted();
        MetricsJson {
            search_calls: m.search_calls,
            leaf_no_edge: m.leaf_no_edge,
            leaf_hold_limit: m.leaf_hold_limit,
            early_cutoffs: m.early_cutoffs,
            combinatorial: m.combinatorial.to_string(),
            at_hold_limit: m.at_hold_limit.to_string(),
            combinatorial_fraction: FractionJson {
                numerator: m.combinatorial.to_string(),
                denominator: total.to_string(),
                decimal: m.combinatorial_fraction(),
            },
        }
    }
}

#[derive(Serialize)]
pub struct CountReport {
    pub command: String,
    pub input: String,
    pub format: String,
    pub graph: StatsJson,
    pub duplicates_dropped: u64,
    pub p: u64,
    pub q: u64,
    pub strategy: String,
    pub threads: usize,
    pub count: String,
    pub metrics: MetricsJson,
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_load_ms: Option<f64>,
}

#[derive(Serialize)]
pub struct NodeCountJson {
    pub id: u64,
    pub count: String,
}

#[derive(Serialize)]
pub struct LocalReport {
    pub command: String,
    pub input: String,
    pub format: String,
    pub graph: StatsJson,
    pub duplicates_dropped: u64,
    pub p: u64,
    pub q: u64,
    pub strategy: String,
    pub threads: usize,
    pub total: String,
    pub sum_u: String,
    pub sum_v: String,
    pub identities_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top: Option<usize>,
    pub u_counts: Vec<NodeCountJson>,
    pub v_counts: Vec<NodeCountJson>,
    pub metrics: MetricsJson,
    pub wall_ms: f64,
}

#[derive(Serialize)]
pub struct RangeReport {
    pub command: String,
    pub input: String,
    pub format: String,
    pub graph: StatsJson,
    pub duplicates_dropped: u64,
    pub p_min: u64,
    pub p_max: u64,
    pub q_min: u64,
    pub q_max: u64,
    pub strategy: String,
    pub threads: usize,
    /// Rows in ascending p, cells in ascending q.
    pub cells: Vec<Vec<String>>,
    pub metrics: MetricsJson,
    pub wall_ms: f64,
}

#[derive(Serialize)]
pub struct IndexReport {
    pub command: String,
    pub input: String,
    pub format: String,
    pub x: u64,
    pub y: u64,
    pub u_count: usize,
    pub node_split_nodes: usize,
    pub edge_split_nodes: usize,
    pub graph_sha256: String,
    pub out: String,
    pub build_ms: f64,
}

#[derive(Serialize)]
pub struct StatsReport {
    pub command: String,
    pub input: String,
    pub format: String,
    pub graph: StatsJson,
    pub duplicates_dropped: u64,
}

#[derive(Serialize)]
pub struct ReduceReport {
    pub command: String,
    pub input: String,
    pub format: String,
    pub p: u64,
    pub q: u64,
    pub original: StatsJson,
    pub reduced: StatsJson,
    pub removed_u: usize,
    pub removed_v: usize,
    pub out: String,
}

/// Exact total from the U-side sum when the identities hold.
pub fn exact_total(sum_u: &BigCount, p: u64) -> BigCount {
    sum_u / BigCount::from(p)
}
