//! Bipartite graph storage, (p,q)-core peeling, and core-value node ordering.
//!
//! Node ids are dense per side: `0..u_count` for one side and `0..v_count`
//! for the other. Adjacency is kept as sorted per-node arrays on both sides,
//! so the same graph can be traversed from either direction.

use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

/// An immutable bipartite graph.
///
/// Invariants, enforced at construction:
/// - adjacency is symmetric (`v ∈ adj(u)` iff `u ∈ adj(v)`),
/// - neighbor arrays are strictly increasing (no parallel edges),
/// - every neighbor id is in range for the opposite side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    u_adj: Vec<Vec<u32>>,
    v_adj: Vec<Vec<u32>>,
    edge_count: u64,
}

impl BipartiteGraph {
    /// Build a graph from an edge list. Duplicate edges are collapsed.
    ///
    /// # Panics
    ///
    /// Panics if an endpoint is out of range; callers that handle untrusted
    /// input validate ids first (see [`crate::io::load_graph`]).
    pub fn from_edges(u_count: usize, v_count: usize, edges: &[(u32, u32)]) -> Self {
        let mut u_adj = vec![Vec::new(); u_count];
        let mut v_adj = vec![Vec::new(); v_count];
        for &(u, v) in edges {
            assert!(
                (u as usize) < u_count && (v as usize) < v_count,
                "edge ({u}, {v}) out of range for {u_count}x{v_count} graph"
            );
            u_adj[u as usize].push(v);
        }
        let mut edge_count = 0u64;
        for (u, nbrs) in u_adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            nbrs.dedup();
            edge_count += nbrs.len() as u64;
            for &v in nbrs.iter() {
                v_adj[v as usize].push(u as u32);
            }
        }
        // v_adj entries were appended in increasing u order, so they are
        // already sorted and duplicate-free.
        BipartiteGraph {
            u_adj,
            v_adj,
            edge_count,
        }
    }

    /// The complete bipartite graph `K_{m,n}`.
    pub fn complete(m: usize, n: usize) -> Self {
        let u_adj = vec![(0..n as u32).collect::<Vec<_>>(); m];
        let v_adj = vec![(0..m as u32).collect::<Vec<_>>(); n];
        BipartiteGraph {
            u_adj,
            v_adj,
            edge_count: (m as u64) * (n as u64),
        }
    }

    pub fn empty() -> Self {
        BipartiteGraph {
            u_adj: Vec::new(),
            v_adj: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn u_count(&self) -> usize {
        self.u_adj.len()
    }

    pub fn v_count(&self) -> usize {
        self.v_adj.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn u_neighbors(&self, u: u32) -> &[u32] {
        &self.u_adj[u as usize]
    }

    pub fn v_neighbors(&self, v: u32) -> &[u32] {
        &self.v_adj[v as usize]
    }

    pub fn u_degree(&self, u: u32) -> usize {
        self.u_adj[u as usize].len()
    }

    pub fn v_degree(&self, v: u32) -> usize {
        self.v_adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.u_adj[u as usize].binary_search(&v).is_ok()
    }

    /// The same graph with the two sides swapped.
    pub fn transposed(&self) -> BipartiteGraph {
        BipartiteGraph {
            u_adj: self.v_adj.clone(),
            v_adj: self.u_adj.clone(),
            edge_count: self.edge_count,
        }
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            u_count: self.u_count(),
            v_count: self.v_count(),
            edge_count: self.edge_count,
            max_degree_u: self.u_adj.iter().map(Vec::len).max().unwrap_or(0),
            max_degree_v: self.v_adj.iter().map(Vec::len).max().unwrap_or(0),
            avg_degree_u: Rational::new(self.edge_count, self.u_count() as u64),
            avg_degree_v: Rational::new(self.edge_count, self.v_count() as u64),
        }
    }

    /// SHA-256 of the canonical adjacency encoding, as lowercase hex.
    /// Used to bind a serialized cost index to the graph it was built for.
    pub fn digest_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"biclique-graph-v1");
        hasher.update((self.u_count() as u64).to_le_bytes());
        hasher.update((self.v_count() as u64).to_le_bytes());
        for nbrs in &self.u_adj {
            hasher.update((nbrs.len() as u64).to_le_bytes());
            for &v in nbrs {
                hasher.update(v.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn check_invariants(&self) {
        let mut from_v = 0u64;
        for (v, nbrs) in self.v_adj.iter().enumerate() {
            assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
            for &u in nbrs {
                assert!(self.has_edge(u, v as u32));
            }
            from_v += nbrs.len() as u64;
        }
        let from_u: u64 = self.u_adj.iter().map(|n| n.len() as u64).sum();
        assert!(self.u_adj.iter().all(|n| n.windows(2).all(|w| w[0] < w[1])));
        assert_eq!(from_u, from_v);
        assert_eq!(from_u, self.edge_count);
    }
}

/// An exact reduced fraction; `denom` is 1 when the value is integral or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub numer: u64,
    pub denom: u64,
}

impl Rational {
    pub fn new(numer: u64, denom: u64) -> Self {
        if denom == 0 || numer == 0 {
            return Rational {
                numer: 0,
                denom: 1,
            };
        }
        let g = gcd(numer, denom);
        Rational {
            numer: numer / g,
            denom: denom / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Aggregate size and degree figures for a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub u_count: usize,
    pub v_count: usize,
    pub edge_count: u64,
    pub max_degree_u: usize,
    pub max_degree_v: usize,
    pub avg_degree_u: Rational,
    pub avg_degree_v: Rational,
}

/// A total order over the union of both node sets.
///
/// Rank values are globally distinct, so comparisons are meaningful both
/// within a side and across sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRank {
    pub u_rank: Vec<u32>,
    pub v_rank: Vec<u32>,
}

impl NodeRank {
    /// The trivial order: all of one side before the other, ascending ids.
    pub fn identity(u_count: usize, v_count: usize) -> Self {
        NodeRank {
            u_rank: (0..u_count as u32).collect(),
            v_rank: (u_count as u32..(u_count + v_count) as u32).collect(),
        }
    }

    pub fn matches(&self, g: &BipartiteGraph) -> bool {
        self.u_rank.len() == g.u_count() && self.v_rank.len() == g.v_count()
    }

    /// Restrict the order to the nodes surviving a core reduction, keeping
    /// their relative positions and compacting ranks to be consecutive.
    pub fn restricted(&self, maps: &CoreMaps) -> NodeRank {
        let mut entries: Vec<(u32, u8, u32)> = Vec::with_capacity(maps.u_map.len() + maps.v_map.len());
        for (new_id, &old_id) in maps.u_map.iter().enumerate() {
            entries.push((self.u_rank[old_id as usize], 0, new_id as u32));
        }
        for (new_id, &old_id) in maps.v_map.iter().enumerate() {
            entries.push((self.v_rank[old_id as usize], 1, new_id as u32));
        }
        entries.sort_unstable();
        let mut u_rank = vec![0u32; maps.u_map.len()];
        let mut v_rank = vec![0u32; maps.v_map.len()];
        for (rank, &(_, side, id)) in entries.iter().enumerate() {
            if side == 0 {
                u_rank[id as usize] = rank as u32;
            } else {
                v_rank[id as usize] = rank as u32;
            }
        }
        NodeRank { u_rank, v_rank }
    }
}

/// Core-value (degeneracy) order over `U ∪ V`: repeatedly remove a node of
/// minimum current degree; the rank is the removal index. Ties are broken
/// by side (U first), then ascending node id, which makes the order
/// reproducible run to run.
pub fn core_order(g: &BipartiteGraph) -> NodeRank {
    let un = g.u_count();
    let vn = g.v_count();
    let mut deg_u: Vec<u32> = (0..un).map(|u| g.u_adj[u].len() as u32).collect();
    let mut deg_v: Vec<u32> = (0..vn).map(|v| g.v_adj[v].len() as u32).collect();

    let mut queue: BTreeSet<(u32, u8, u32)> = BTreeSet::new();
    for (u, &d) in deg_u.iter().enumerate() {
        queue.insert((d, 0, u as u32));
    }
    for (v, &d) in deg_v.iter().enumerate() {
        queue.insert((d, 1, v as u32));
    }

    let mut u_rank = vec![0u32; un];
    let mut v_rank = vec![0u32; vn];
    let mut removed_u = vec![false; un];
    let mut removed_v = vec![false; vn];
    let mut next_rank = 0u32;

    while let Some(&entry) = queue.iter().next() {
        queue.remove(&entry);
        let (_, side, id) = entry;
        if side == 0 {
            let u = id as usize;
            removed_u[u] = true;
            u_rank[u] = next_rank;
            for &v in &g.u_adj[u] {
                let v = v as usize;
                if !removed_v[v] {
                    queue.remove(&(deg_v[v], 1, v as u32));
                    deg_v[v] -= 1;
                    queue.insert((deg_v[v], 1, v as u32));
                }
            }
        } else {
            let v = id as usize;
            removed_v[v] = true;
            v_rank[v] = next_rank;
            for &u in &g.v_adj[v] {
                let u = u as usize;
                if !removed_u[u] {
                    queue.remove(&(deg_u[u], 0, u as u32));
                    deg_u[u] -= 1;
                    queue.insert((deg_u[u], 0, u as u32));
                }
            }
        }
        next_rank += 1;
    }

    NodeRank { u_rank, v_rank }
}

/// Translation from reduced node ids back to the originals, one map per side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMaps {
    pub u_map: Vec<u32>,
    pub v_map: Vec<u32>,
}

/// The maximal subgraph in which every remaining U node keeps degree >= `q`
/// and every remaining V node keeps degree >= `p`, computed by iterative
/// peeling in time linear in the edge count. Removing these nodes cannot
/// change the number of (p,q)-bicliques.
pub fn pq_core_reduce(g: &BipartiteGraph, p: u64, q: u64) -> (BipartiteGraph, CoreMaps) {
    let un = g.u_count();
    let vn = g.v_count();
    let mut deg_u: Vec<u64> = (0..un).map(|u| g.u_adj[u].len() as u64).collect();
    let mut deg_v: Vec<u64> = (0..vn).map(|v| g.v_adj[v].len() as u64).collect();
    let mut dead_u = vec![false; un];
    let mut dead_v = vec![false; vn];

    // Work list of (side, id) pairs whose degree has fallen below threshold.
    let mut work: Vec<(u8, u32)> = Vec::new();
    for u in 0..un {
        if deg_u[u] < q {
            dead_u[u] = true;
            work.push((0, u as u32));
        }
    }
    for v in 0..vn {
        if deg_v[v] < p {
            dead_v[v] = true;
            work.push((1, v as u32));
        }
    }
    while let Some((side, id)) = work.pop() {
        if side == 0 {
            for &v in &g.u_adj[id as usize] {
                let v = v as usize;
                if !dead_v[v] {
                    deg_v[v] -= 1;
                    if deg_v[v] < p {
                        dead_v[v] = true;
                        work.push((1, v as u32));
                    }
                }
            }
        } else {
            for &u in &g.v_adj[id as usize] {
                let u = u as usize;
                if !dead_u[u] {
                    deg_u[u] -= 1;
                    if deg_u[u] < q {
                        dead_u[u] = true;
                        work.push((0, u as u32));
                    }
                }
            }
        }
    }

    let u_map: Vec<u32> = (0..un as u32).filter(|&u| !dead_u[u as usize]).collect();
    let v_map: Vec<u32> = (0..vn as u32).filter(|&v| !dead_v[v as usize]).collect();
    let mut u_new = vec![u32::MAX; un];
    for (new, &old) in u_map.iter().enumerate() {
        u_new[old as usize] = new as u32;
    }
    let mut v_new = vec![u32::MAX; vn];
    for (new, &old) in v_map.iter().enumerate() {
        v_new[old as usize] = new as u32;
    }

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for &old_u in &u_map {
        for &old_v in &g.u_adj[old_u as usize] {
            if !dead_v[old_v as usize] {
                edges.push((u_new[old_u as usize], v_new[old_v as usize]));
            }
        }
    }
    let reduced = BipartiteGraph::from_edges(u_map.len(), v_map.len(), &edges);
    (reduced, CoreMaps { u_map, v_map })
}

/// Validate counting parameters shared by the public entry points.
pub(crate) fn validate_params(g: &BipartiteGraph, rank: &NodeRank, p: u64, q: u64) -> Result<()> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidArgument(format!(
            "p and q must be positive (got p={p}, q={q})"
        )));
    }
    if !rank.matches(g) {
        return Err(Error::InvalidArgument(
            "node rank does not match graph dimensions".to_string(),
        ));
    }
    Ok(())
}
