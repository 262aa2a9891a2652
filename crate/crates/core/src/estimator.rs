//! Per-node prediction of whether the node-split or edge-split subproblem
//! layout is cheaper, and a precomputed index of those predictions.
//!
//! The score for a candidate-set pair is `min((e/m)^m, 2^(m/2))` with
//! `m = min(l, r)`, evaluated in the log domain and clamped; a node's
//! edge-split cost is the sum of the per-edge scores, its node-split cost
//! a single score over the merged two-hop structure.

use crate::graph::{BipartiteGraph, NodeRank};
use serde::{Deserialize, Serialize};

const COST_CEILING: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitDecision {
    NodeSplit,
    EdgeSplit,
}

impl std::fmt::Display for SplitDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SplitDecision::NodeSplit => "node-split",
            SplitDecision::EdgeSplit => "edge-split",
        })
    }
}

/// Cost score for a subproblem with `l` and `r` candidates and `e` edges
/// between them, under size guards `x`, `y`. Zero whenever the guard fires
/// or there are no edges; otherwise `min((e/m)^m, 2^(m/2))` with
/// `m = min(l, r)`, clamped to a finite ceiling.
pub fn cost_es(l: u64, r: u64, e: u64, x: u64, y: u64) -> f64 {
    if l < x || r < y {
        return 0.0;
    }
    if e == 0 {
        return 0.0;
    }
    let m = l.min(r) as f64;
    let log_dense = m * (e as f64 / m).ln();
    let log_tree = (m / 2.0) * std::f64::consts::LN_2;
    let log_cost = log_dense.min(log_tree);
    if log_cost > COST_CEILING.ln() {
        COST_CEILING
    } else {
        log_cost.exp()
    }
}

/// Predict the cheaper split for node `u` when counting (p,q)-bicliques
/// with `p >= x` and `q >= y`. Ties go to edge-split.
pub fn estimate_node(
    g: &BipartiteGraph,
    rank: &NodeRank,
    u: u32,
    x: u64,
    y: u64,
) -> SplitDecision {
    let mut scratch = Scratch::new(g.u_count());
    estimate_costs(g, rank, u, x, y, &mut scratch).2
}

/// Both cost figures, mostly for reporting and tests.
pub fn estimate_node_costs(
    g: &BipartiteGraph,
    rank: &NodeRank,
    u: u32,
    x: u64,
    y: u64,
) -> (f64, f64) {
    let mut scratch = Scratch::new(g.u_count());
    let (node, edge, _) = estimate_costs(g, rank, u, x, y, &mut scratch);
    (node, edge)
}

struct Scratch {
    /// Common-neighbor counters over U nodes; every touched entry is driven
    /// back to zero by the final pass, so the buffer is reusable as is.
    cnt: Vec<u64>,
    order: Vec<u32>,
    suffix: Vec<u64>,
}

impl Scratch {
    fn new(u_count: usize) -> Self {
        Scratch {
            cnt: vec![0; u_count],
            order: Vec::new(),
            suffix: Vec::new(),
        }
    }
}

fn estimate_costs(
    g: &BipartiteGraph,
    rank: &NodeRank,
    u: u32,
    x: u64,
    y: u64,
    s: &mut Scratch,
) -> (f64, f64, SplitDecision) {
    debug_assert!(x >= 1 && y >= 1);
    let ru = rank.u_rank[u as usize];

    // Pass 1: count common neighbors with u for every higher-ranked
    // two-hop node w; l = nodes reaching y of them.
    let mut l = 0u64;
    for &v in g.u_neighbors(u) {
        for &w in g.v_neighbors(v) {
            if rank.u_rank[w as usize] > ru {
                s.cnt[w as usize] += 1;
                if s.cnt[w as usize] == y {
                    l += 1;
                }
            }
        }
    }

    // Neighbors of u in ascending rank order.
    s.order.clear();
    s.order.extend_from_slice(g.u_neighbors(u));
    s.order
        .sort_unstable_by_key(|&v| rank.v_rank[v as usize]);
    let degree = s.order.len();

    // Pass 2: e = qualifying (w, v_i) incidences; r = neighbors of u with
    // at least x-1 qualifying two-hop nodes; suffix[i] flags v_i.
    let mut e = 0u64;
    let mut r = 0u64;
    s.suffix.clear();
    s.suffix.resize(degree, 0);
    for i in 0..degree {
        let v = s.order[i];
        let mut qualifying = 0u64;
        for &w in g.v_neighbors(v) {
            if rank.u_rank[w as usize] > ru && s.cnt[w as usize] >= y {
                qualifying += 1;
                e += 1;
            }
        }
        if qualifying >= x - 1 {
            r += 1;
            s.suffix[i] = 1;
        }
    }
    for i in (1..degree).rev() {
        s.suffix[i - 1] += s.suffix[i];
    }

    // Pass 3: per-edge costs. Consuming each occurrence turns cnt into a
    // suffix count, so reading before the decrement gives the number of
    // common neighbors still ranked after v_i; this also returns every
    // touched counter to zero.
    let mut cost_edge = 0.0f64;
    for i in 0..degree {
        let v = s.order[i];
        let mut l_edge = 0u64;
        let mut e_edge = 0u64;
        let r_edge = s.suffix[i];
        for &w in g.v_neighbors(v) {
            if rank.u_rank[w as usize] > ru {
                if s.cnt[w as usize] >= y {
                    l_edge += 1;
                    e_edge += s.cnt[w as usize];
                }
                s.cnt[w as usize] -= 1;
            }
        }
        if l_edge >= x - 1 {
            cost_edge += cost_es(l_edge, r_edge, e_edge, x, y);
        }
    }

    let cost_node = cost_es(l, r, e, x, y);
    let decision = if cost_node < cost_edge {
        SplitDecision::NodeSplit
    } else {
        SplitDecision::EdgeSplit
    };
    (cost_node, cost_edge, decision)
}

/// Precomputed split decisions for every U node at fixed guards (x, y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostIndex {
    pub x: u64,
    pub y: u64,
    pub graph_digest: String,
    edge_split: Vec<bool>,
}

impl CostIndex {
    pub fn len(&self) -> usize {
        self.edge_split.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_split.is_empty()
    }

    pub fn decision(&self, u: u32) -> SplitDecision {
        if self.edge_split[u as usize] {
            SplitDecision::EdgeSplit
        } else {
            SplitDecision::NodeSplit
        }
    }

    pub fn edge_split_bits(&self) -> &[bool] {
        &self.edge_split
    }

    pub fn matches_graph(&self, g: &BipartiteGraph) -> bool {
        self.edge_split.len() == g.u_count() && self.graph_digest == g.digest_hex()
    }

    pub fn to_json(&self) -> String {
        let file = IndexFile {
            format: INDEX_FORMAT.to_string(),
            x: self.x,
            y: self.y,
            graph_sha256: self.graph_digest.clone(),
            u_count: self.edge_split.len(),
            edge_split_hex: pack_bits_hex(&self.edge_split),
        };
        serde_json::to_string_pretty(&file).expect("index serialization cannot fail")
    }

    pub fn from_json(text: &str) -> crate::error::Result<CostIndex> {
        let file: IndexFile = serde_json::from_str(text).map_err(|e| {
            crate::error::Error::InvalidArgument(format!("malformed cost index file: {e}"))
        })?;
        if file.format != INDEX_FORMAT {
            return Err(crate::error::Error::InvalidArgument(format!(
                "unsupported cost index format {:?}",
                file.format
            )));
        }
        let edge_split = unpack_bits_hex(&file.edge_split_hex, file.u_count).ok_or_else(|| {
            crate::error::Error::InvalidArgument("corrupt cost index bit vector".to_string())
        })?;
        Ok(CostIndex {
            x: file.x,
            y: file.y,
            graph_digest: file.graph_sha256,
            edge_split,
        })
    }
}

const INDEX_FORMAT: &str = "biclique-cost-index/v1";

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    x: u64,
    y: u64,
    graph_sha256: String,
    u_count: usize,
    edge_split_hex: String,
}

fn pack_bits_hex(bits: &[bool]) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    let mut out = String::with_capacity(bytes.len() * 2);
    for byte in bytes {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

fn unpack_bits_hex(hex: &str, len: usize) -> Option<Vec<bool>> {
    if hex.len() != len.div_ceil(8) * 2 {
        return None;
    }
    let mut bytes = Vec::with_capacity(hex.len() / 2);
    for i in (0..hex.len()).step_by(2) {
        bytes.push(u8::from_str_radix(&hex[i..i + 2], 16).ok()?);
    }
    Some((0..len).map(|i| bytes[i / 8] & (1 << (i % 8)) != 0).collect())
}

/// Run the estimator for every U node and record the outcomes.
pub fn build_cost_index(g: &BipartiteGraph, rank: &NodeRank, x: u64, y: u64) -> CostIndex {
    let mut scratch = Scratch::new(g.u_count());
    let edge_split = (0..g.u_count() as u32)
        .map(|u| estimate_costs(g, rank, u, x, y, &mut scratch).2 == SplitDecision::EdgeSplit)
        .collect();
    CostIndex {
        x,
        y,
        graph_digest: g.digest_hex(),
        edge_split,
    }
}
