//! Per-node (local) and size-range counting.
//!
//! Both modes reuse the pivot recursion unchanged and swap only the leaf
//! procedure: local counting attributes each leaf's bicliques to the
//! individual nodes that appear in them, range counting expands each leaf
//! over every (p,q) cell of a rectangle in one pass.

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeRank};
use crate::search::{
    execute, prepare, resolve_plan, LeafKernel, SearchMetrics, SearchOptions, Strategy,
};
use crate::state::SearchState;
use num_bigint::BigUint;
use num_traits::Zero;

/// Per-node biclique participation counts at fixed (p,q), indexed by the
/// node ids of the graph the count was run on. Nodes stripped by core
/// reduction keep an explicit zero entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCounts {
    pub p: u64,
    pub q: u64,
    pub u: Vec<BigUint>,
    pub v: Vec<BigUint>,
}

impl LocalCounts {
    pub fn zeros(p: u64, q: u64, u_count: usize, v_count: usize) -> Self {
        LocalCounts {
            p,
            q,
            u: vec![BigUint::zero(); u_count],
            v: vec![BigUint::zero(); v_count],
        }
    }

    /// Equals `p * total` on every graph: each biclique has p U members.
    pub fn sum_u(&self) -> BigUint {
        self.u.iter().sum()
    }

    /// Equals `q * total`.
    pub fn sum_v(&self) -> BigUint {
        self.v.iter().sum()
    }
}

/// An inclusive rectangle of (p,q) sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub p_min: u64,
    pub p_max: u64,
    pub q_min: u64,
    pub q_max: u64,
}

impl SizeRange {
    pub fn new(p_min: u64, p_max: u64, q_min: u64, q_max: u64) -> Result<Self> {
        if p_min < 1 || q_min < 1 || p_min > p_max || q_min > q_max {
            return Err(Error::InvalidArgument(format!(
                "invalid size range [{p_min},{p_max}]x[{q_min},{q_max}]"
            )));
        }
        Ok(SizeRange {
            p_min,
            p_max,
            q_min,
            q_max,
        })
    }

    pub fn p_width(&self) -> usize {
        (self.p_max - self.p_min + 1) as usize
    }

    pub fn q_width(&self) -> usize {
        (self.q_max - self.q_min + 1) as usize
    }
}

/// Exact counts for every cell of a [`SizeRange`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeMatrix {
    pub range: SizeRange,
    cells: Vec<BigUint>,
}

impl RangeMatrix {
    fn zeros(range: SizeRange) -> Self {
        RangeMatrix {
            cells: vec![BigUint::zero(); range.p_width() * range.q_width()],
            range,
        }
    }

    fn index(&self, p: u64, q: u64) -> usize {
        assert!(
            p >= self.range.p_min && p <= self.range.p_max,
            "p={p} outside range"
        );
        assert!(
            q >= self.range.q_min && q <= self.range.q_max,
            "q={q} outside range"
        );
        (p - self.range.p_min) as usize * self.range.q_width() + (q - self.range.q_min) as usize
    }

    pub fn get(&self, p: u64, q: u64) -> &BigUint {
        &self.cells[self.index(p, q)]
    }

    /// Rows in ascending p, cells in ascending q.
    pub fn rows(&self) -> impl Iterator<Item = (u64, &[BigUint])> {
        let qw = self.range.q_width();
        self.cells
            .chunks(qw)
            .enumerate()
            .map(move |(i, row)| (self.range.p_min + i as u64, row))
    }

    fn absorb(&mut self, other: RangeMatrix) {
        debug_assert_eq!(self.range, other.range);
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            *a += b;
        }
    }
}

struct LocalKernel {
    p: u64,
    q: u64,
    u_local: Vec<BigUint>,
    v_local: Vec<BigUint>,
}

impl LocalKernel {
    fn new(p: u64, q: u64, u_count: usize, v_count: usize) -> Self {
        LocalKernel {
            p,
            q,
            u_local: vec![BigUint::zero(); u_count],
            v_local: vec![BigUint::zero(); v_count],
        }
    }
}

impl LeafKernel for LocalKernel {
    fn caps(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    fn floors(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    fn needs_pivot_identities(&self) -> bool {
        true
    }

    fn on_leaf(&mut self, st: &SearchState, _metrics: &mut SearchMetrics) {
        local_leaf_attribution(
            st.cand_u(),
            st.cand_v(),
            st.pivot_u_nodes(),
            st.pivot_v_nodes(),
            st.hold_u_nodes(),
            st.hold_v_nodes(),
            self.p,
            self.q,
            &mut self.u_local,
            &mut self.v_local,
        );
    }
}

/// Attribute one terminated leaf's bicliques to the individual nodes that
/// appear in them. Flattened form of the recursive leaf procedure: the
/// self-calls with emptied candidate sets become direct loops.
#[allow(clippy::too_many_arguments)]
pub(crate) fn local_leaf_attribution(
    cu: &[u32],
    cv: &[u32],
    pu: &[u32],
    pv: &[u32],
    hu: &[u32],
    hv: &[u32],
    p: u64,
    q: u64,
    u_local: &mut [BigUint],
    v_local: &mut [BigUint],
) {
    let c0 = cu.len() as u64;
    let c1 = cv.len() as u64;
    let p0 = pu.len() as u64;
    let p1 = pv.len() as u64;
    let need_u = p as i64 - hu.len() as i64;
    let need_v = q as i64 - hv.len() as i64;

    if c0 > 0 && c1 > 0 {
        // Families that use no C_V node: C_U joins the U pivot pool.
        let pool_u = p0 + c0;
        let member_u = binomial(pool_u - 1, need_u - 1) * binomial(p1, need_v);
        if !member_u.is_zero() {
            for &u in pu.iter().chain(cu) {
                u_local[u as usize] += &member_u;
            }
        }
        if p1 > 0 {
            let member_v = binomial(pool_u, need_u) * binomial(p1 - 1, need_v - 1);
            if !member_v.is_zero() {
                for &v in pv {
                    v_local[v as usize] += &member_v;
                }
            }
        }
        let member_h = binomial(pool_u, need_u) * binomial(p1, need_v);
        if !member_h.is_zero() {
            for &u in hu {
                u_local[u as usize] += &member_h;
            }
            for &v in hv {
                v_local[v as usize] += &member_h;
            }
        }

        // Families that use at least one C_V node, partitioned by the
        // first one they use (in candidate order): that node is held, the
        // earlier ones are excluded, the later ones stay optional.
        for (i, &vi) in cv.iter().enumerate() {
            let pool_v = p1 + (c1 - 1 - i as u64);
            let nv = need_v - 1;
            if p0 > 0 {
                let member_u = binomial(p0 - 1, need_u - 1) * binomial(pool_v, nv);
                if !member_u.is_zero() {
                    for &u in pu {
                        u_local[u as usize] += &member_u;
                    }
                }
            }
            if pool_v > 0 {
                let member_v = binomial(p0, need_u) * binomial(pool_v - 1, nv - 1);
                if !member_v.is_zero() {
                    for &v in pv.iter().chain(&cv[i + 1..]) {
                        v_local[v as usize] += &member_v;
                    }
                }
            }
            let member_h = binomial(p0, need_u) * binomial(pool_v, nv);
            if !member_h.is_zero() {
                for &u in hu {
                    u_local[u as usize] += &member_h;
                }
                for &v in hv {
                    v_local[v as usize] += &member_h;
                }
                v_local[vi as usize] += &member_h;
            }
        }
    } else {
        // One side has no candidates left: merge the survivors into their
        // pivot pool and attribute directly.
        let pool_u = p0 + c0;
        let pool_v = p1 + c1;
        if pool_u > 0 {
            let member_u = binomial(pool_u - 1, need_u - 1) * binomial(pool_v, need_v);
            if !member_u.is_zero() {
                for &u in pu.iter().chain(cu) {
                    u_local[u as usize] += &member_u;
                }
            }
        }
        if pool_v > 0 {
            let member_v = binomial(pool_u, need_u) * binomial(pool_v - 1, need_v - 1);
            if !member_v.is_zero() {
                for &v in pv.iter().chain(cv) {
                    v_local[v as usize] += &member_v;
                }
            }
        }
        let member_h = binomial(pool_u, need_u) * binomial(pool_v, need_v);
        if !member_h.is_zero() {
            for &u in hu {
                u_local[u as usize] += &member_h;
            }
            for &v in hv {
                v_local[v as usize] += &member_h;
            }
        }
    }
}

struct RangeKernel {
    range: SizeRange,
    matrix: RangeMatrix,
}

impl RangeKernel {
    fn new(range: SizeRange) -> Self {
        RangeKernel {
            range,
            matrix: RangeMatrix::zeros(range),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn sweep(&mut self, pool_u: u64, pool_v: u64, hi_p: u64, hi_q: u64, h0: u64, h1: u64, subtract: bool) {
        let l0 = h0.max(self.range.p_min);
        let l1 = h1.max(self.range.q_min);
        for pp in l0..=hi_p {
            let a = binomial(pool_u, (pp - h0) as i64);
            if a.is_zero() {
                continue;
            }
            for qq in l1..=hi_q {
                let add = &a * binomial(pool_v, (qq - h1) as i64);
                if add.is_zero() {
                    continue;
                }
                let idx = self.matrix.index(pp, qq);
                if subtract {
                    self.matrix.cells[idx] -= add;
                } else {
                    self.matrix.cells[idx] += add;
                }
            }
        }
    }
}

impl LeafKernel for RangeKernel {
    fn caps(&self) -> (u64, u64) {
        (self.range.p_max, self.range.q_max)
    }

    fn floors(&self) -> (u64, u64) {
        (self.range.p_min, self.range.q_min)
    }

    fn on_leaf(&mut self, st: &SearchState, _metrics: &mut SearchMetrics) {
        let c0 = st.cand_u().len() as u64;
        let c1 = st.cand_v().len() as u64;
        let p0 = st.pivot_u_size() as u64;
        let p1 = st.pivot_v_size() as u64;
        let h0 = st.hold_u_size() as u64;
        let h1 = st.hold_v_size() as u64;
        let r = self.range;
        if c0 == 0 || c1 == 0 {
            self.sweep(
                p0 + c0,
                p1 + c1,
                (p0 + c0 + h0).min(r.p_max),
                (p1 + c1 + h1).min(r.q_max),
                h0,
                h1,
                false,
            );
        } else {
            // Same inclusion-exclusion as the single-count leaf, swept over
            // every cell the pools can reach. The subtraction runs last and
            // never takes a cell below this leaf's own first sweep.
            self.sweep(
                p0 + c0,
                p1,
                (p0 + c0 + h0).min(r.p_max),
                (p1 + h1).min(r.q_max),
                h0,
                h1,
                false,
            );
            self.sweep(
                p0,
                p1 + c1,
                (p0 + h0).min(r.p_max),
                (p1 + c1 + h1).min(r.q_max),
                h0,
                h1,
                false,
            );
            self.sweep(
                p0,
                p1,
                (p0 + h0).min(r.p_max),
                (p1 + h1).min(r.q_max),
                h0,
                h1,
                true,
            );
        }
    }
}

/// Exact per-node participation counts for (p,q)-bicliques.
pub fn local_count(
    g: &BipartiteGraph,
    rank: &NodeRank,
    p: u64,
    q: u64,
    strategy: Strategy,
) -> Result<(LocalCounts, SearchMetrics)> {
    local_count_with(g, rank, p, q, strategy, &SearchOptions::default())
}

pub fn local_count_with(
    g: &BipartiteGraph,
    rank: &NodeRank,
    p: u64,
    q: u64,
    strategy: Strategy,
    opts: &SearchOptions,
) -> Result<(LocalCounts, SearchMetrics)> {
    let prep = prepare(g, rank, p, q)?;
    let plan = resolve_plan(&prep.g, &prep.rank, strategy, p, q);
    let (kernels, metrics) = execute(&prep.g, &prep.rank, &plan, opts, || {
        LocalKernel::new(p, q, prep.g.u_count(), prep.g.v_count())
    })?;
    let mut out = LocalCounts::zeros(p, q, g.u_count(), g.v_count());
    for k in kernels {
        for (reduced, count) in k.u_local.into_iter().enumerate() {
            if !count.is_zero() {
                out.u[prep.maps.u_map[reduced] as usize] += count;
            }
        }
        for (reduced, count) in k.v_local.into_iter().enumerate() {
            if !count.is_zero() {
                out.v[prep.maps.v_map[reduced] as usize] += count;
            }
        }
    }
    Ok((out, metrics))
}

/// Exact counts for every (p,q) cell of `range` from a single search pass.
pub fn range_count(
    g: &BipartiteGraph,
    rank: &NodeRank,
    range: SizeRange,
    strategy: Strategy,
) -> Result<(RangeMatrix, SearchMetrics)> {
    range_count_with(g, rank, range, strategy, &SearchOptions::default())
}

pub fn range_count_with(
    g: &BipartiteGraph,
    rank: &NodeRank,
    range: SizeRange,
    strategy: Strategy,
    opts: &SearchOptions,
) -> Result<(RangeMatrix, SearchMetrics)> {
    // Re-validate: the fields are public and the bounds carry the
    // reduction thresholds and termination caps.
    let range = SizeRange::new(range.p_min, range.p_max, range.q_min, range.q_max)?;
    let prep = prepare(g, rank, range.p_min, range.q_min)?;
    let plan = resolve_plan(&prep.g, &prep.rank, strategy, range.p_min, range.q_min);
    let (kernels, metrics) = execute(&prep.g, &prep.rank, &plan, opts, || RangeKernel::new(range))?;
    let mut matrix = RangeMatrix::zeros(range);
    for k in kernels {
        matrix.absorb(k.matrix);
    }
    Ok((matrix, metrics))
}
