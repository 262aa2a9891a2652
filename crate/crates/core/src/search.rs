//! The recursive counting engine and its top-level decompositions.
//!
//! A top-level subproblem anchors the search at a node `u` (counting
//! extensions of `{u}` among higher-ranked nodes, "node split") or at an
//! edge `(u, v)` ("edge split"). Within a subproblem the recursion moves
//! fully-connected candidates into pivot sets, picks the branch list with
//! the fewest non-neighbors, and resolves leaves combinatorially: a hold
//! set that must appear, pivot sets that may appear freely.

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::estimator::{self, SplitDecision};
use crate::graph::{pq_core_reduce, validate_params, BipartiteGraph, CoreMaps, NodeRank};
use crate::state::{BranchSide, SearchState};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

/// How top-level subproblems are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Anchor every subproblem at a node.
    NodeSplit,
    /// Anchor every subproblem at an edge.
    EdgeSplit,
    /// Pick per node using the cost estimator.
    Estimator,
    /// Pick per node using a cost index prebuilt for the same parameters.
    EstimatorIndex,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::NodeSplit,
        Strategy::EdgeSplit,
        Strategy::Estimator,
        Strategy::EstimatorIndex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::NodeSplit => "node-split",
            Strategy::EdgeSplit => "edge-split",
            Strategy::Estimator => "estimator",
            Strategy::EstimatorIndex => "estimator-index",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Execution knobs shared by all counting entry points.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Worker threads; results are identical for any value.
    pub threads: usize,
    /// Recursion depth cap; `None` derives a safe bound from the graph.
    pub max_depth: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 1,
            max_depth: None,
        }
    }
}

/// Counters and exact tallies describing one counting run.
///
/// `combinatorial` holds the part of the total attributed at leaves while
/// both hold sets were still below their limits; `at_hold_limit` holds the
/// rest. The two always sum to the returned count (for global counting).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchMetrics {
    pub search_calls: u64,
    pub leaf_no_edge: u64,
    pub leaf_hold_limit: u64,
    pub early_cutoffs: u64,
    pub combinatorial: BigUint,
    pub at_hold_limit: BigUint,
}

impl SearchMetrics {
    pub fn total_counted(&self) -> BigUint {
        &self.combinatorial + &self.at_hold_limit
    }

    pub fn merge(&mut self, other: &SearchMetrics) {
        self.search_calls += other.search_calls;
        self.leaf_no_edge += other.leaf_no_edge;
        self.leaf_hold_limit += other.leaf_hold_limit;
        self.early_cutoffs += other.early_cutoffs;
        self.combinatorial += &other.combinatorial;
        self.at_hold_limit += &other.at_hold_limit;
    }

    /// `combinatorial / (combinatorial + at_hold_limit)` rounded to 1e-6,
    /// or `None` when nothing was counted.
    pub fn combinatorial_fraction(&self) -> Option<f64> {
        let total = self.total_counted();
        if total.is_zero() {
            return None;
        }
        let scaled = &self.combinatorial * BigUint::from(1_000_000u32) / total;
        Some(scaled.to_u64().expect("fraction is at most 1e6") as f64 / 1e6)
    }
}

/// The leaf contribution of a terminated search node: `c0`/`c1` candidates,
/// `p0`/`p1` pivots, `h0`/`h1` held nodes, counting (p,q)-bicliques.
///
/// With candidates left on both sides and no cross edges, families that
/// skip one side or the other are added and the doubly-counted families
/// that skip both are subtracted; otherwise the surviving candidates merge
/// into the pivot pools directly.
#[allow(clippy::too_many_arguments)]
pub fn count_contribution(
    c0: u64,
    c1: u64,
    p0: u64,
    p1: u64,
    h0: u64,
    h1: u64,
    p: u64,
    q: u64,
) -> BigUint {
    let need_u = p as i64 - h0 as i64;
    let need_v = q as i64 - h1 as i64;
    if c0 == 0 || c1 == 0 {
        return binomial(p0 + c0, need_u) * binomial(p1 + c1, need_v);
    }
    let skip_v = binomial(p0 + c0, need_u) * binomial(p1, need_v);
    let skip_u = binomial(p0, need_u) * binomial(p1 + c1, need_v);
    let skip_both = binomial(p0, need_u) * binomial(p1, need_v);
    // skip_v >= skip_both term by term, so this cannot underflow.
    skip_v - skip_both + skip_u
}

/// What a leaf (or a single-candidate shortcut) does with a terminated
/// search node. Implementations accumulate their own output.
pub(crate) trait LeafKernel: Send {
    /// Hold-set limits that terminate the recursion.
    fn caps(&self) -> (u64, u64);
    /// Sizes below which a subtree cannot contribute anything.
    fn floors(&self) -> (u64, u64);
    fn on_leaf(&mut self, st: &SearchState, metrics: &mut SearchMetrics);
    /// Resolve a one-candidate side in closed form; return `true` when the
    /// subtree is fully accounted for. Only global counting implements this.
    fn on_single_candidate(
        &mut self,
        _g: &BipartiteGraph,
        _st: &SearchState,
        _metrics: &mut SearchMetrics,
    ) -> bool {
        false
    }
    /// Whether pivot identities must be tracked for this kernel.
    fn needs_pivot_identities(&self) -> bool {
        false
    }
}

pub(crate) struct GlobalKernel {
    p: u64,
    q: u64,
    pub total: BigUint,
}

impl GlobalKernel {
    pub fn new(p: u64, q: u64) -> Self {
        GlobalKernel {
            p,
            q,
            total: BigUint::zero(),
        }
    }
}

impl LeafKernel for GlobalKernel {
    fn caps(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    fn floors(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    fn on_leaf(&mut self, st: &SearchState, metrics: &mut SearchMetrics) {
        let h0 = st.hold_u_size() as u64;
        let h1 = st.hold_v_size() as u64;
        let add = count_contribution(
            st.cand_u().len() as u64,
            st.cand_v().len() as u64,
            st.pivot_u_size() as u64,
            st.pivot_v_size() as u64,
            h0,
            h1,
            self.p,
            self.q,
        );
        if add.is_zero() {
            return;
        }
        if h0 < self.p && h1 < self.q {
            metrics.combinatorial += &add;
        } else {
            metrics.at_hold_limit += &add;
        }
        self.total += add;
    }

    fn on_single_candidate(
        &mut self,
        _g: &BipartiteGraph,
        st: &SearchState,
        metrics: &mut SearchMetrics,
    ) -> bool {
        let c0 = st.cand_u().len() as u64;
        let c1 = st.cand_v().len() as u64;
        if c0 != 1 && c1 != 1 {
            return false;
        }
        let p0 = st.pivot_u_size() as u64;
        let p1 = st.pivot_v_size() as u64;
        let h0 = st.hold_u_size() as u64;
        let h1 = st.hold_v_size() as u64;
        let add = if c0 == 1 {
            let u = st.cand_u()[0];
            let neighbors = c1 - st.nonnbr_u(u) as u64;
            lone_u_contribution(c1, p0, p1, h0, h1, neighbors, self.p, self.q)
        } else {
            let v = st.cand_v()[0];
            let neighbors = c0 - st.nonnbr_v(v) as u64;
            lone_v_contribution(c0, p0, p1, h0, h1, neighbors, self.p, self.q)
        };
        if !add.is_zero() {
            metrics.combinatorial += &add;
            self.total += add;
        }
        true
    }
}

/// Closed form for a state whose U side holds a single candidate `u` with
/// `neighbors` of the `c1` V candidates adjacent to it: bicliques without
/// `u` (all of C_V joins the pivot pool) plus bicliques holding `u` (only
/// its neighbors join).
#[allow(clippy::too_many_arguments)]
pub(crate) fn lone_u_contribution(
    c1: u64,
    p0: u64,
    p1: u64,
    h0: u64,
    h1: u64,
    neighbors: u64,
    p: u64,
    q: u64,
) -> BigUint {
    let need_u = p as i64 - h0 as i64;
    let need_v = q as i64 - h1 as i64;
    binomial(p0, need_u) * binomial(p1 + c1, need_v)
        + binomial(p0, need_u - 1) * binomial(p1 + neighbors, need_v)
}

/// Mirror image of [`lone_u_contribution`] for a single V candidate.
#[allow(clippy::too_many_arguments)]
pub(crate) fn lone_v_contribution(
    c0: u64,
    p0: u64,
    p1: u64,
    h0: u64,
    h1: u64,
    neighbors: u64,
    p: u64,
    q: u64,
) -> BigUint {
    let need_u = p as i64 - h0 as i64;
    let need_v = q as i64 - h1 as i64;
    binomial(p0 + neighbors, need_u) * binomial(p1, need_v - 1)
        + binomial(p0 + c0, need_u) * binomial(p1, need_v)
}

/// Per-node split choice for the top-level loop, `true` meaning edge split.
#[derive(Debug, Clone)]
pub(crate) enum SplitPlan {
    AllNode,
    AllEdge,
    PerNode(Vec<bool>),
}

impl SplitPlan {
    fn edge_split(&self, u: u32) -> bool {
        match self {
            SplitPlan::AllNode => false,
            SplitPlan::AllEdge => true,
            SplitPlan::PerNode(bits) => bits[u as usize],
        }
    }
}

pub(crate) fn resolve_plan(
    g: &BipartiteGraph,
    rank: &NodeRank,
    strategy: Strategy,
    p: u64,
    q: u64,
) -> SplitPlan {
    match strategy {
        Strategy::NodeSplit => SplitPlan::AllNode,
        Strategy::EdgeSplit => SplitPlan::AllEdge,
        Strategy::Estimator => {
            let xy = p.min(q);
            SplitPlan::PerNode(
                (0..g.u_count() as u32)
                    .map(|u| estimator::estimate_node(g, rank, u, xy, xy) == SplitDecision::EdgeSplit)
                    .collect(),
            )
        }
        Strategy::EstimatorIndex => {
            let xy = p.min(q);
            let index = estimator::build_cost_index(g, rank, xy, xy);
            SplitPlan::PerNode(index.edge_split_bits().to_vec())
        }
    }
}

pub(crate) struct Prepared {
    pub g: BipartiteGraph,
    pub rank: NodeRank,
    pub maps: CoreMaps,
}

/// Validate parameters, strip the (p,q)-core away, and restrict the rank to
/// the survivors. `rp`/`rq` are the reduction thresholds (the lower bounds
/// of the requested size range).
pub(crate) fn prepare(g: &BipartiteGraph, rank: &NodeRank, rp: u64, rq: u64) -> Result<Prepared> {
    validate_params(g, rank, rp, rq)?;
    let (reduced, maps) = pq_core_reduce(g, rp, rq);
    let rank = rank.restricted(&maps);
    Ok(Prepared {
        g: reduced,
        rank,
        maps,
    })
}

struct SearchCtx<'a, K: LeafKernel> {
    g: &'a BipartiteGraph,
    rank: &'a NodeRank,
    state: SearchState,
    metrics: SearchMetrics,
    kernel: K,
    max_depth: usize,
    stamp: Vec<u64>,
    stamp_epoch: u64,
    cu: Vec<u32>,
    cv: Vec<u32>,
}

impl<'a, K: LeafKernel> SearchCtx<'a, K> {
    fn new(g: &'a BipartiteGraph, rank: &'a NodeRank, kernel: K, max_depth: usize) -> Self {
        let mut state = SearchState::new(g);
        state.set_track_pivots(kernel.needs_pivot_identities());
        SearchCtx {
            g,
            rank,
            state,
            metrics: SearchMetrics::default(),
            kernel,
            max_depth,
            stamp: vec![0; g.u_count()],
            stamp_epoch: 0,
            cu: Vec::new(),
            cv: Vec::new(),
        }
    }

    /// Run every subproblem anchored at `u`.
    fn run_source(&mut self, u: u32, edge_split: bool) -> Result<()> {
        let ru = self.rank.u_rank[u as usize];
        if edge_split {
            // One subproblem per edge (u, v): both endpoints held, both
            // candidate sets restricted to higher-ranked nodes.
            for i in 0..self.g.u_degree(u) {
                let v = self.g.u_neighbors(u)[i];
                let rv = self.rank.v_rank[v as usize];
                self.cu.clear();
                self.cu.extend(
                    self.g
                        .v_neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&w| self.rank.u_rank[w as usize] > ru),
                );
                self.cv.clear();
                self.cv.extend(
                    self.g
                        .u_neighbors(u)
                        .iter()
                        .copied()
                        .filter(|&w| self.rank.v_rank[w as usize] > rv),
                );
                self.run_subproblem(&[u], &[v])?;
            }
        } else {
            // One subproblem for u: u held, higher-ranked two-hop
            // neighbors as U candidates, the whole neighborhood as V
            // candidates.
            self.stamp_epoch += 1;
            self.cu.clear();
            for i in 0..self.g.u_degree(u) {
                let v = self.g.u_neighbors(u)[i];
                for &w in self.g.v_neighbors(v) {
                    if self.rank.u_rank[w as usize] > ru
                        && self.stamp[w as usize] != self.stamp_epoch
                    {
                        self.stamp[w as usize] = self.stamp_epoch;
                        self.cu.push(w);
                    }
                }
            }
            self.cv.clear();
            self.cv.extend_from_slice(self.g.u_neighbors(u));
            self.run_subproblem(&[u], &[])?;
        }
        Ok(())
    }

    fn run_subproblem(&mut self, hold_u: &[u32], hold_v: &[u32]) -> Result<()> {
        self.state.begin(self.g, &self.cu, &self.cv, hold_u, hold_v);
        let snap = if cfg!(debug_assertions) {
            Some(self.state.snapshot())
        } else {
            None
        };
        self.recurse(0)?;
        if let Some(snap) = snap {
            assert_eq!(
                snap,
                self.state.snapshot(),
                "backtracking failed to restore the search state"
            );
        }
        Ok(())
    }

    fn recurse(&mut self, depth: usize) -> Result<()> {
        self.metrics.search_calls += 1;
        if depth > self.max_depth {
            return Err(Error::DepthLimitExceeded(self.max_depth));
        }
        debug_assert!(
            self.state.check_consistency(self.g),
            "incrementally maintained non-neighbor or edge counts diverged"
        );
        let (p_cap, q_cap) = self.kernel.caps();
        if self.state.edge_count() == 0
            || self.state.hold_u_size() as u64 >= p_cap
            || self.state.hold_v_size() as u64 >= q_cap
        {
            self.leaf();
            return Ok(());
        }
        let (moved_u, moved_v) = self.state.find_pivots();
        let result = self.recurse_pivoted(depth);
        self.state.undo_pivots(moved_u, moved_v);
        result
    }

    fn recurse_pivoted(&mut self, depth: usize) -> Result<()> {
        // Pivot extraction may have consumed every cross edge; contributing
        // here equals recursing once more into an unchanged state.
        if self.state.edge_count() == 0 {
            self.leaf();
            return Ok(());
        }
        let c0 = self.state.cand_u().len() as u64;
        let c1 = self.state.cand_v().len() as u64;
        let p0 = self.state.pivot_u_size() as u64;
        let p1 = self.state.pivot_v_size() as u64;
        let h0 = self.state.hold_u_size() as u64;
        let h1 = self.state.hold_v_size() as u64;
        let (p_cap, q_cap) = self.kernel.caps();
        let (p_floor, q_floor) = self.kernel.floors();
        // Holds overshot, or not enough nodes left to ever reach the floor.
        if h0 > p_cap || h1 > q_cap || c0 + p0 + h0 < p_floor || c1 + p1 + h1 < q_floor {
            self.metrics.early_cutoffs += 1;
            return Ok(());
        }
        if self
            .kernel
            .on_single_candidate(self.g, &self.state, &mut self.metrics)
        {
            self.metrics.early_cutoffs += 1;
            return Ok(());
        }

        let branch = self.state.choose_branch(self.g, self.rank);
        let mut removed = 0usize;
        let mut result = Ok(());
        for &x in &branch.nodes {
            match branch.side {
                BranchSide::U => {
                    self.state.remove_cand_u(self.g, x);
                    removed += 1;
                    let dropped = self.state.remove_v_nonneighbors_of_u(self.g, x);
                    self.state.push_hold_u(x);
                    result = self.recurse(depth + 1);
                    self.state.pop_hold_u();
                    for _ in 0..dropped {
                        self.state.restore_cand_v(self.g);
                    }
                }
                BranchSide::V => {
                    self.state.remove_cand_v(self.g, x);
                    removed += 1;
                    let dropped = self.state.remove_u_nonneighbors_of_v(self.g, x);
                    self.state.push_hold_v(x);
                    result = self.recurse(depth + 1);
                    self.state.pop_hold_v();
                    for _ in 0..dropped {
                        self.state.restore_cand_u(self.g);
                    }
                }
            }
            if result.is_err() {
                break;
            }
        }
        if result.is_ok() {
            // Bicliques avoiding the branch list entirely.
            result = self.recurse(depth + 1);
        }
        for _ in 0..removed {
            match branch.side {
                BranchSide::U => {
                    self.state.restore_cand_u(self.g);
                }
                BranchSide::V => {
                    self.state.restore_cand_v(self.g);
                }
            }
        }
        result
    }

    fn leaf(&mut self) {
        let (p_cap, q_cap) = self.kernel.caps();
        if (self.state.hold_u_size() as u64) < p_cap && (self.state.hold_v_size() as u64) < q_cap {
            self.metrics.leaf_no_edge += 1;
        } else {
            self.metrics.leaf_hold_limit += 1;
        }
        self.kernel.on_leaf(&self.state, &mut self.metrics);
    }
}

/// Run one kernel instance per worker over all top-level subproblems and
/// return the kernels for the caller to fold, plus merged metrics. Work is
/// handed out per U node through a shared counter; exact arithmetic makes
/// the merged results independent of scheduling.
pub(crate) fn execute<K, F>(
    g: &BipartiteGraph,
    rank: &NodeRank,
    plan: &SplitPlan,
    opts: &SearchOptions,
    make_kernel: F,
) -> Result<(Vec<K>, SearchMetrics)>
where
    K: LeafKernel,
    F: Fn() -> K + Sync,
{
    let n = g.u_count();
    let max_depth = opts
        .max_depth
        .unwrap_or(g.u_count() + g.v_count() + 16);
    let threads = opts.threads.max(1).min(n.max(1));

    if threads == 1 {
        let mut ctx = SearchCtx::new(g, rank, make_kernel(), max_depth);
        for u in 0..n as u32 {
            ctx.run_source(u, plan.edge_split(u))?;
        }
        return Ok((vec![ctx.kernel], ctx.metrics));
    }

    let next = AtomicUsize::new(0);
    let worker_results: Vec<Result<(K, SearchMetrics)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                let next = &next;
                let make_kernel = &make_kernel;
                scope.spawn(move || -> Result<(K, SearchMetrics)> {
                    let mut ctx = SearchCtx::new(g, rank, make_kernel(), max_depth);
                    loop {
                        let u = next.fetch_add(1, Ordering::Relaxed);
                        if u >= n {
                            break;
                        }
                        ctx.run_source(u as u32, plan.edge_split(u as u32))?;
                    }
                    Ok((ctx.kernel, ctx.metrics))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });

    let mut kernels = Vec::with_capacity(threads);
    let mut metrics = SearchMetrics::default();
    for r in worker_results {
        let (k, m) = r?;
        metrics.merge(&m);
        kernels.push(k);
    }
    Ok((kernels, metrics))
}

/// Count (p,q)-bicliques exactly. The graph is reduced to its (p,q)-core
/// first; the result is independent of the strategy.
pub fn top_level_count(
    g: &BipartiteGraph,
    rank: &NodeRank,
    p: u64,
    q: u64,
    strategy: Strategy,
) -> Result<(BigUint, SearchMetrics)> {
    top_level_count_with(g, rank, p, q, strategy, &SearchOptions::default())
}

pub fn top_level_count_with(
    g: &BipartiteGraph,
    rank: &NodeRank,
    p: u64,
    q: u64,
    strategy: Strategy,
    opts: &SearchOptions,
) -> Result<(BigUint, SearchMetrics)> {
    let prep = prepare(g, rank, p, q)?;
    let plan = resolve_plan(&prep.g, &prep.rank, strategy, p, q);
    count_prepared(&prep, &plan, p, q, opts)
}

/// Count with an explicit per-node split choice (`true` = edge split),
/// indexed by the ids of `g`. Any choice vector yields the same count;
/// only the metrics change.
pub fn top_level_count_with_decisions(
    g: &BipartiteGraph,
    rank: &NodeRank,
    p: u64,
    q: u64,
    edge_split: &[bool],
    opts: &SearchOptions,
) -> Result<(BigUint, SearchMetrics)> {
    if edge_split.len() != g.u_count() {
        return Err(Error::InvalidArgument(format!(
            "decision vector has {} entries for {} nodes",
            edge_split.len(),
            g.u_count()
        )));
    }
    let prep = prepare(g, rank, p, q)?;
    let plan = SplitPlan::PerNode(
        prep.maps
            .u_map
            .iter()
            .map(|&orig| edge_split[orig as usize])
            .collect(),
    );
    count_prepared(&prep, &plan, p, q, opts)
}

/// Count using a prebuilt cost index. The index must have been built for
/// this exact graph.
pub fn top_level_count_with_index(
    g: &BipartiteGraph,
    rank: &NodeRank,
    p: u64,
    q: u64,
    index: &estimator::CostIndex,
    opts: &SearchOptions,
) -> Result<(BigUint, SearchMetrics)> {
    if !index.matches_graph(g) {
        return Err(Error::InvalidArgument(
            "cost index was built for a different graph".to_string(),
        ));
    }
    let bits: Vec<bool> = index.edge_split_bits().to_vec();
    top_level_count_with_decisions(g, rank, p, q, &bits, opts)
}

fn count_prepared(
    prep: &Prepared,
    plan: &SplitPlan,
    p: u64,
    q: u64,
    opts: &SearchOptions,
) -> Result<(BigUint, SearchMetrics)> {
    let (kernels, metrics) = execute(&prep.g, &prep.rank, plan, opts, || GlobalKernel::new(p, q))?;
    let mut total = BigUint::zero();
    for k in kernels {
        total += k.total;
    }
    debug_assert_eq!(total, metrics.total_counted());
    Ok((total, metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::core_order;
    use crate::oracle;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn count(g: &BipartiteGraph, p: u64, q: u64, s: Strategy) -> BigUint {
        top_level_count(g, &core_order(g), p, q, s).unwrap().0
    }

    #[test]
    fn contribution_golden_values() {
        assert_eq!(count_contribution(3, 1, 0, 2, 1, 1, 3, 3), big(3));
        assert_eq!(count_contribution(0, 0, 2, 2, 1, 1, 3, 3), big(1));
        // Structure: hold {a}, pivot {b}, two isolated U candidates, three
        // V candidates adjacent to {a, b}; the three (2,2)-bicliques are
        // ({a,b}, every 2 of 3 common neighbors). Verified against the
        // brute-force oracle below.
        assert_eq!(count_contribution(2, 3, 1, 0, 1, 0, 2, 2), big(3));
        let g = BipartiteGraph::from_edges(
            4,
            3,
            &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)],
        );
        let lc = oracle::brute_force_local(&g, 2, 2).unwrap();
        assert_eq!(lc.u[0], big(3));
    }

    #[test]
    fn lone_candidate_closed_forms() {
        // State: hold {a}, pivot {b}, lone candidate u adjacent to both
        // remaining V candidates; hold {z} on the V side. The closed form
        // must count the (2,2)-bicliques containing a and z whose other
        // members come from {b, u} x {v1, v2}.
        let contribution = lone_u_contribution(2, 1, 0, 1, 1, 2, 2, 2);

        // Definition-level enumeration over the concrete graph (a=0, b=1,
        // u=2 / z=0, v1=1, v2=2, fully connected as the state implies).
        let g = BipartiteGraph::from_edges(
            3,
            3,
            &[
                (0, 0),
                (0, 1),
                (0, 2),
                (1, 0),
                (1, 1),
                (1, 2),
                (2, 0),
                (2, 1),
                (2, 2),
            ],
        );
        let mut direct = 0u64;
        for x_mate in 1..=2u32 {
            for y_mate in 1..=2u32 {
                let x = [0u32, x_mate];
                let y = [0u32, y_mate];
                if x.iter().all(|&u| y.iter().all(|&v| g.has_edge(u, v))) {
                    direct += 1;
                }
            }
        }
        assert_eq!(direct, 4);
        assert_eq!(contribution, big(direct));

        // The mirrored form on the transposed state agrees.
        assert_eq!(
            lone_v_contribution(2, 0, 1, 1, 1, 2, 2, 2),
            contribution
        );
    }

    #[test]
    fn contribution_at_hold_limits() {
        // h0 = p: the U side is fixed; only V pivots and candidates vary.
        assert_eq!(count_contribution(2, 3, 1, 1, 2, 0, 2, 2), big(6)); // C(4,2)
        assert_eq!(count_contribution(0, 0, 0, 0, 2, 2, 2, 2), big(1));
    }

    #[test]
    fn figure1_counts_ten_via_every_strategy() {
        let g = oracle::figure1();
        for s in Strategy::ALL {
            assert_eq!(count(&g, 3, 3, s), big(10), "strategy {s}");
        }
    }

    #[test]
    fn complete_graph_closed_form() {
        let g = BipartiteGraph::complete(4, 4);
        for s in Strategy::ALL {
            assert_eq!(count(&g, 2, 2, s), big(36));
        }
        let g = BipartiteGraph::complete(6, 5);
        assert_eq!(
            count(&g, 3, 2, Strategy::Estimator),
            binomial(6, 3) * binomial(5, 2)
        );
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        for seed in 0..6u64 {
            let g = oracle::random_bipartite(8, 8, 0.5, seed);
            let rank = core_order(&g);
            for (p, q) in [(1u64, 1u64), (2, 2), (2, 3), (3, 3), (4, 2)] {
                let expect = oracle::brute_force_count(&g, p, q).unwrap();
                for s in Strategy::ALL {
                    let (got, metrics) = top_level_count(&g, &rank, p, q, s).unwrap();
                    assert_eq!(got, expect, "seed {seed} p {p} q {q} strategy {s}");
                    assert_eq!(metrics.total_counted(), expect);
                }
            }
        }
    }

    #[test]
    fn works_with_identity_rank() {
        // Correctness does not depend on which total order is used.
        let g = oracle::random_bipartite(9, 7, 0.4, 5);
        let rank = NodeRank::identity(9, 7);
        let expect = oracle::brute_force_count(&g, 2, 2).unwrap();
        for s in [Strategy::NodeSplit, Strategy::EdgeSplit] {
            assert_eq!(top_level_count(&g, &rank, 2, 2, s).unwrap().0, expect);
        }
    }

    #[test]
    fn single_parameter_sides() {
        let g = oracle::random_bipartite(7, 9, 0.45, 21);
        let rank = core_order(&g);
        for (p, q) in [(1u64, 1u64), (1, 3), (3, 1)] {
            let expect = oracle::brute_force_count(&g, p, q).unwrap();
            for s in Strategy::ALL {
                assert_eq!(top_level_count(&g, &rank, p, q, s).unwrap().0, expect);
            }
        }
        // (1,1)-bicliques are just edges.
        let (ones, _) =
            top_level_count(&g, &rank, 1, 1, Strategy::NodeSplit).unwrap();
        assert_eq!(ones, big(g.edge_count()));
    }

    #[test]
    fn rejects_zero_parameters() {
        let g = BipartiteGraph::complete(2, 2);
        let rank = core_order(&g);
        assert!(matches!(
            top_level_count(&g, &rank, 0, 2, Strategy::Estimator),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            top_level_count(&g, &rank, 2, 0, Strategy::Estimator),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn depth_cap_reports_resource_error() {
        // A 6-cycle: no pivots, both candidate sets of size two, so the
        // first subproblem is forced to branch past depth zero.
        let g = BipartiteGraph::from_edges(3, 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]);
        let rank = core_order(&g);
        let opts = SearchOptions {
            threads: 1,
            max_depth: Some(0),
        };
        match top_level_count_with(&g, &rank, 2, 2, Strategy::NodeSplit, &opts) {
            Err(Error::DepthLimitExceeded(0)) => {}
            other => panic!("expected depth error, got {other:?}"),
        }
        // The same cap is fine when the search terminates at the top level.
        let k = BipartiteGraph::complete(3, 3);
        let r = core_order(&k);
        assert!(top_level_count_with(&k, &r, 2, 2, Strategy::NodeSplit, &opts).is_ok());
    }

    #[test]
    fn threads_do_not_change_results() {
        let g = oracle::random_bipartite(12, 10, 0.45, 9);
        let rank = core_order(&g);
        let single = top_level_count(&g, &rank, 3, 2, Strategy::Estimator).unwrap();
        for threads in [2usize, 3, 8] {
            let opts = SearchOptions {
                threads,
                max_depth: None,
            };
            let multi =
                top_level_count_with(&g, &rank, 3, 2, Strategy::Estimator, &opts).unwrap();
            assert_eq!(single, multi);
        }
    }

    #[test]
    fn custom_decision_vectors_are_count_neutral() {
        use rand::{Rng, SeedableRng};
        let opts = SearchOptions::default();
        for seed in 30..35u64 {
            let g = oracle::random_bipartite(9, 9, 0.5, seed);
            let rank = core_order(&g);
            let expect = oracle::brute_force_count(&g, 2, 3).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed * 7 + 1);
            for _ in 0..12 {
                let bits: Vec<bool> = (0..9).map(|_| rng.random()).collect();
                let (got, _) =
                    top_level_count_with_decisions(&g, &rank, 2, 3, &bits, &opts).unwrap();
                assert_eq!(got, expect, "seed {seed} bits {bits:?}");
            }
        }
    }

    #[test]
    fn index_and_online_estimates_choose_identically() {
        for seed in [2u64, 19, 44] {
            let g = oracle::random_bipartite(12, 11, 0.45, seed);
            let rank = core_order(&g);
            for (p, q) in [(2u64, 3u64), (4, 4)] {
                let online = resolve_plan(&g, &rank, Strategy::Estimator, p, q);
                let indexed = resolve_plan(&g, &rank, Strategy::EstimatorIndex, p, q);
                match (online, indexed) {
                    (SplitPlan::PerNode(a), SplitPlan::PerNode(b)) => {
                        assert_eq!(a, b, "seed {seed} p {p} q {q}")
                    }
                    _ => panic!("estimator plans must be per-node"),
                }
            }
        }
    }

    #[test]
    fn metrics_split_sums_to_total() {
        for seed in 20..26u64 {
            let g = oracle::random_bipartite(10, 10, 0.6, seed);
            let rank = core_order(&g);
            let (total, m) = top_level_count(&g, &rank, 3, 3, Strategy::Estimator).unwrap();
            assert_eq!(&m.combinatorial + &m.at_hold_limit, total);
        }
    }

    #[test]
    fn counts_past_64_bits_stay_exact() {
        // C(64,16)^2 ~ 2.4e29; pivots resolve the complete graph without
        // branching, so this is fast even though the count is enormous.
        let g = BipartiteGraph::complete(64, 64);
        let rank = core_order(&g);
        let expect = binomial(64, 16) * binomial(64, 16);
        let (got, m) = top_level_count(&g, &rank, 16, 16, Strategy::Estimator).unwrap();
        assert_eq!(got, expect);
        assert!(got > big(u64::MAX));
        assert_eq!(m.total_counted(), expect);
    }

    #[test]
    fn larger_parameters_match_oracle() {
        for seed in [1u64, 8] {
            let g = oracle::random_bipartite(18, 18, 0.62, seed);
            let rank = core_order(&g);
            for (p, q) in [(6u64, 6u64), (7, 5), (8, 8)] {
                let expect = oracle::brute_force_count(&g, p, q).unwrap();
                for s in [Strategy::NodeSplit, Strategy::EdgeSplit, Strategy::Estimator] {
                    let (got, _) = top_level_count(&g, &rank, p, q, s).unwrap();
                    assert_eq!(got, expect, "seed {seed} p {p} q {q} strategy {s}");
                }
            }
        }
    }

    #[test]
    fn empty_and_reduced_away_graphs_count_zero() {
        let g = BipartiteGraph::from_edges(3, 3, &[]);
        let rank = core_order(&g);
        assert_eq!(
            top_level_count(&g, &rank, 2, 2, Strategy::Estimator).unwrap().0,
            big(0)
        );
        // A star collapses entirely under (2,2)-core reduction.
        let star = BipartiteGraph::from_edges(1, 5, &[(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)]);
        let rank = core_order(&star);
        assert_eq!(
            top_level_count(&star, &rank, 2, 2, Strategy::EdgeSplit).unwrap().0,
            big(0)
        );
    }
}
