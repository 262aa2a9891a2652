//! Mutable state for the candidate/pivot/hold recursion.
//!
//! Each side keeps its candidate set as a prefix of a permutation array with
//! a position index, so removing a node is a swap to the boundary and
//! restoring is a length bump — the last node removed is always the first
//! restored. Non-neighbor counts and the candidate-to-candidate edge count
//! are maintained incrementally: removing a node leaves its neighbors'
//! counts untouched and decrements its non-neighbors' counts by exactly one.

use crate::graph::{BipartiteGraph, NodeRank};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BranchSide {
    U,
    V,
}

#[derive(Debug)]
pub(crate) struct Branch {
    pub side: BranchSide,
    pub nodes: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SideState {
    /// Permutation of all node ids on this side; candidates are `members[..len]`.
    members: Vec<u32>,
    pos: Vec<u32>,
    len: usize,
    /// For candidates: number of non-neighbors in the opposite candidate set.
    nonnbr: Vec<u32>,
    mark: Vec<u64>,
    mark_epoch: u64,
}

impl SideState {
    fn new(n: usize) -> Self {
        SideState {
            members: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            len: 0,
            nonnbr: vec![0; n],
            mark: vec![0; n],
            mark_epoch: 0,
        }
    }

    fn contains(&self, x: u32) -> bool {
        (self.pos[x as usize] as usize) < self.len
    }

    fn candidates(&self) -> &[u32] {
        &self.members[..self.len]
    }

    /// Swap `x` out of the candidate prefix. `x` ends up at index `len`.
    fn swap_out(&mut self, x: u32) {
        let px = self.pos[x as usize] as usize;
        debug_assert!(px < self.len);
        let last = self.len - 1;
        let y = self.members[last];
        self.members[last] = x;
        self.members[px] = y;
        self.pos[x as usize] = last as u32;
        self.pos[y as usize] = px as u32;
        self.len = last;
    }

    /// Bring the most recently removed node back; returns it.
    fn swap_in_last(&mut self) -> u32 {
        let x = self.members[self.len];
        self.len += 1;
        x
    }

    /// Arrange `nodes` (distinct, in range) as the candidate prefix.
    fn set_candidates(&mut self, nodes: &[u32]) {
        for (i, &x) in nodes.iter().enumerate() {
            let px = self.pos[x as usize] as usize;
            debug_assert!(px >= i, "candidate list contains a duplicate");
            let y = self.members[i];
            self.members[i] = x;
            self.members[px] = y;
            self.pos[x as usize] = i as u32;
            self.pos[y as usize] = px as u32;
        }
        self.len = nodes.len();
    }

    fn next_epoch(&mut self) -> u64 {
        self.mark_epoch += 1;
        self.mark_epoch
    }
}

/// The six-set search state: candidates, pivots, and holds for both sides.
#[derive(Debug)]
pub struct SearchState {
    su: SideState,
    sv: SideState,
    edge_count: u64,
    hold_u: Vec<u32>,
    hold_v: Vec<u32>,
    pivot_u_len: usize,
    pivot_v_len: usize,
    /// Pivot identities, maintained only when `track_pivots` is set (local
    /// counting attributes contributions to individual pivots).
    pivot_u: Vec<u32>,
    pivot_v: Vec<u32>,
    track_pivots: bool,
    scratch: Vec<u32>,
}

impl SearchState {
    pub fn new(g: &BipartiteGraph) -> Self {
        SearchState {
            su: SideState::new(g.u_count()),
            sv: SideState::new(g.v_count()),
            edge_count: 0,
            hold_u: Vec::new(),
            hold_v: Vec::new(),
            pivot_u_len: 0,
            pivot_v_len: 0,
            pivot_u: Vec::new(),
            pivot_v: Vec::new(),
            track_pivots: false,
            scratch: Vec::new(),
        }
    }

    pub(crate) fn set_track_pivots(&mut self, on: bool) {
        self.track_pivots = on;
    }

    /// Initialize a top-level subproblem: candidate sets, hold sets, no
    /// pivots. Non-neighbor counts and the cross-edge count are computed
    /// from scratch here and maintained incrementally afterwards.
    pub(crate) fn begin(
        &mut self,
        g: &BipartiteGraph,
        cand_u: &[u32],
        cand_v: &[u32],
        hold_u: &[u32],
        hold_v: &[u32],
    ) {
        self.su.set_candidates(cand_u);
        self.sv.set_candidates(cand_v);
        self.hold_u.clear();
        self.hold_u.extend_from_slice(hold_u);
        self.hold_v.clear();
        self.hold_v.extend_from_slice(hold_v);
        self.pivot_u_len = 0;
        self.pivot_v_len = 0;
        self.pivot_u.clear();
        self.pivot_v.clear();

        let mut edges = 0u64;
        for i in 0..self.su.len {
            let u = self.su.members[i];
            let mut adj = 0u32;
            for &v in g.u_neighbors(u) {
                if self.sv.contains(v) {
                    adj += 1;
                }
            }
            self.su.nonnbr[u as usize] = self.sv.len as u32 - adj;
            edges += adj as u64;
        }
        for j in 0..self.sv.len {
            let v = self.sv.members[j];
            let mut adj = 0u32;
            for &u in g.v_neighbors(v) {
                if self.su.contains(u) {
                    adj += 1;
                }
            }
            self.sv.nonnbr[v as usize] = self.su.len as u32 - adj;
        }
        self.edge_count = edges;
    }

    pub fn cand_u(&self) -> &[u32] {
        self.su.candidates()
    }

    pub fn cand_v(&self) -> &[u32] {
        self.sv.candidates()
    }

    pub fn pivot_u_size(&self) -> usize {
        self.pivot_u_len
    }

    pub fn pivot_v_size(&self) -> usize {
        self.pivot_v_len
    }

    pub fn hold_u_size(&self) -> usize {
        self.hold_u.len()
    }

    pub fn hold_v_size(&self) -> usize {
        self.hold_v.len()
    }

    pub fn hold_u_nodes(&self) -> &[u32] {
        &self.hold_u
    }

    pub fn hold_v_nodes(&self) -> &[u32] {
        &self.hold_v
    }

    /// Pivot identities; meaningful only when pivot tracking is enabled.
    pub fn pivot_u_nodes(&self) -> &[u32] {
        debug_assert!(self.track_pivots);
        &self.pivot_u
    }

    pub fn pivot_v_nodes(&self) -> &[u32] {
        debug_assert!(self.track_pivots);
        &self.pivot_v
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Non-neighbors of candidate `u` in the opposite candidate set.
    pub fn nonnbr_u(&self, u: u32) -> u32 {
        debug_assert!(self.su.contains(u));
        self.su.nonnbr[u as usize]
    }

    pub fn nonnbr_v(&self, v: u32) -> u32 {
        debug_assert!(self.sv.contains(v));
        self.sv.nonnbr[v as usize]
    }

    pub(crate) fn push_hold_u(&mut self, x: u32) {
        self.hold_u.push(x);
    }

    pub(crate) fn pop_hold_u(&mut self) {
        self.hold_u.pop();
    }

    pub(crate) fn push_hold_v(&mut self, x: u32) {
        self.hold_v.push(x);
    }

    pub(crate) fn pop_hold_v(&mut self) {
        self.hold_v.pop();
    }

    /// Remove candidate `x` from the U side, updating the V side's
    /// non-neighbor counts and the cross-edge count.
    pub(crate) fn remove_cand_u(&mut self, g: &BipartiteGraph, x: u32) {
        debug_assert!(self.su.contains(x));
        self.edge_count -= self.sv.len as u64 - self.su.nonnbr[x as usize] as u64;
        let epoch = self.sv.next_epoch();
        for &v in g.u_neighbors(x) {
            if self.sv.contains(v) {
                self.sv.mark[v as usize] = epoch;
            }
        }
        for i in 0..self.sv.len {
            let v = self.sv.members[i];
            if self.sv.mark[v as usize] != epoch {
                self.sv.nonnbr[v as usize] -= 1;
            }
        }
        self.su.swap_out(x);
    }

    pub(crate) fn restore_cand_u(&mut self, g: &BipartiteGraph) -> u32 {
        let x = self.su.members[self.su.len];
        let epoch = self.sv.next_epoch();
        for &v in g.u_neighbors(x) {
            if self.sv.contains(v) {
                self.sv.mark[v as usize] = epoch;
            }
        }
        for i in 0..self.sv.len {
            let v = self.sv.members[i];
            if self.sv.mark[v as usize] != epoch {
                self.sv.nonnbr[v as usize] += 1;
            }
        }
        self.edge_count += self.sv.len as u64 - self.su.nonnbr[x as usize] as u64;
        self.su.swap_in_last();
        x
    }

    pub(crate) fn remove_cand_v(&mut self, g: &BipartiteGraph, x: u32) {
        debug_assert!(self.sv.contains(x));
        self.edge_count -= self.su.len as u64 - self.sv.nonnbr[x as usize] as u64;
        let epoch = self.su.next_epoch();
        for &u in g.v_neighbors(x) {
            if self.su.contains(u) {
                self.su.mark[u as usize] = epoch;
            }
        }
        for i in 0..self.su.len {
            let u = self.su.members[i];
            if self.su.mark[u as usize] != epoch {
                self.su.nonnbr[u as usize] -= 1;
            }
        }
        self.sv.swap_out(x);
    }

    pub(crate) fn restore_cand_v(&mut self, g: &BipartiteGraph) -> u32 {
        let x = self.sv.members[self.sv.len];
        let epoch = self.su.next_epoch();
        for &u in g.v_neighbors(x) {
            if self.su.contains(u) {
                self.su.mark[u as usize] = epoch;
            }
        }
        for i in 0..self.su.len {
            let u = self.su.members[i];
            if self.su.mark[u as usize] != epoch {
                self.su.nonnbr[u as usize] += 1;
            }
        }
        self.edge_count += self.su.len as u64 - self.sv.nonnbr[x as usize] as u64;
        self.sv.swap_in_last();
        x
    }

    /// Drop from C_V every candidate that is not adjacent to U node `x`;
    /// returns how many were removed (for the matching restores).
    pub(crate) fn remove_v_nonneighbors_of_u(&mut self, g: &BipartiteGraph, x: u32) -> usize {
        let epoch = self.sv.next_epoch();
        for &v in g.u_neighbors(x) {
            if self.sv.contains(v) {
                self.sv.mark[v as usize] = epoch;
            }
        }
        let mut doomed = std::mem::take(&mut self.scratch);
        doomed.clear();
        for i in 0..self.sv.len {
            let v = self.sv.members[i];
            if self.sv.mark[v as usize] != epoch {
                doomed.push(v);
            }
        }
        let removed = doomed.len();
        for &v in &doomed {
            self.remove_cand_v(g, v);
        }
        self.scratch = doomed;
        removed
    }

    pub(crate) fn remove_u_nonneighbors_of_v(&mut self, g: &BipartiteGraph, x: u32) -> usize {
        let epoch = self.su.next_epoch();
        for &u in g.v_neighbors(x) {
            if self.su.contains(u) {
                self.su.mark[u as usize] = epoch;
            }
        }
        let mut doomed = std::mem::take(&mut self.scratch);
        doomed.clear();
        for i in 0..self.su.len {
            let u = self.su.members[i];
            if self.su.mark[u as usize] != epoch {
                doomed.push(u);
            }
        }
        let removed = doomed.len();
        for &u in &doomed {
            self.remove_cand_u(g, u);
        }
        self.scratch = doomed;
        removed
    }

    /// Move every candidate with zero non-neighbors into the pivot set,
    /// U side first. A pivot is adjacent to the whole opposite candidate
    /// set, so the move changes no other node's non-neighbor count.
    /// Returns the move counts for [`Self::undo_pivots`].
    pub(crate) fn find_pivots(&mut self) -> (usize, usize) {
        let mut moved_u = 0;
        let mut i = 0;
        while i < self.su.len {
            let x = self.su.members[i];
            if self.su.nonnbr[x as usize] == 0 {
                self.edge_count -= self.sv.len as u64;
                self.su.swap_out(x);
                self.pivot_u_len += 1;
                if self.track_pivots {
                    self.pivot_u.push(x);
                }
                moved_u += 1;
            } else {
                i += 1;
            }
        }
        let mut moved_v = 0;
        let mut j = 0;
        while j < self.sv.len {
            let x = self.sv.members[j];
            if self.sv.nonnbr[x as usize] == 0 {
                self.edge_count -= self.su.len as u64;
                self.sv.swap_out(x);
                self.pivot_v_len += 1;
                if self.track_pivots {
                    self.pivot_v.push(x);
                }
                moved_v += 1;
            } else {
                j += 1;
            }
        }
        (moved_u, moved_v)
    }

    pub(crate) fn undo_pivots(&mut self, moved_u: usize, moved_v: usize) {
        for _ in 0..moved_v {
            self.sv.swap_in_last();
            self.pivot_v_len -= 1;
            if self.track_pivots {
                self.pivot_v.pop();
            }
            self.edge_count += self.su.len as u64;
        }
        for _ in 0..moved_u {
            self.su.swap_in_last();
            self.pivot_u_len -= 1;
            if self.track_pivots {
                self.pivot_u.pop();
            }
            self.edge_count += self.sv.len as u64;
        }
    }

    /// Pick the branch list: the candidate `w` minimizing
    /// `min(|C_U \ N(w)|, |C_V \ N(w)|)` determines which side is
    /// enumerated and which non-neighbors form the list. Ties on the key go
    /// to the smallest global rank, U side first. The returned nodes are in
    /// ascending rank order.
    ///
    /// Requires both candidate sets non-empty, at least one cross edge, and
    /// no remaining zero-non-neighbor candidates.
    pub(crate) fn choose_branch(&mut self, g: &BipartiteGraph, rank: &NodeRank) -> Branch {
        debug_assert!(self.su.len > 0 && self.sv.len > 0 && self.edge_count > 0);
        // key, side tag, rank, node
        let mut best: Option<(u32, u8, u32, u32)> = None;
        for &u in self.su.candidates() {
            let key = (self.su.len as u32).min(self.su.nonnbr[u as usize]);
            let cand = (key, 0u8, rank.u_rank[u as usize], u);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
        for &v in self.sv.candidates() {
            let key = (self.sv.nonnbr[v as usize]).min(self.sv.len as u32);
            let cand = (key, 1u8, rank.v_rank[v as usize], v);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
        let (_, side, _, w) = best.expect("candidate sets are non-empty");

        let (nonnbrs_in_u, nonnbrs_in_v) = if side == 0 {
            (self.su.len as u32, self.su.nonnbr[w as usize])
        } else {
            (self.sv.nonnbr[w as usize], self.sv.len as u32)
        };

        let mut branch = if nonnbrs_in_u <= nonnbrs_in_v {
            // Enumerate U-side non-neighbors of w (all of C_U when w is there).
            let nodes = if side == 0 {
                self.su.candidates().to_vec()
            } else {
                let epoch = self.su.next_epoch();
                for &u in g.v_neighbors(w) {
                    if self.su.contains(u) {
                        self.su.mark[u as usize] = epoch;
                    }
                }
                self.su
                    .candidates()
                    .iter()
                    .copied()
                    .filter(|&u| self.su.mark[u as usize] != epoch)
                    .collect()
            };
            Branch {
                side: BranchSide::U,
                nodes,
            }
        } else {
            let nodes = if side == 1 {
                self.sv.candidates().to_vec()
            } else {
                let epoch = self.sv.next_epoch();
                for &v in g.u_neighbors(w) {
                    if self.sv.contains(v) {
                        self.sv.mark[v as usize] = epoch;
                    }
                }
                self.sv
                    .candidates()
                    .iter()
                    .copied()
                    .filter(|&v| self.sv.mark[v as usize] != epoch)
                    .collect()
            };
            Branch {
                side: BranchSide::V,
                nodes,
            }
        };
        match branch.side {
            BranchSide::U => branch
                .nodes
                .sort_unstable_by_key(|&u| rank.u_rank[u as usize]),
            BranchSide::V => branch
                .nodes
                .sort_unstable_by_key(|&v| rank.v_rank[v as usize]),
        }
        branch
    }

    /// Recompute non-neighbor counts and the edge count from scratch and
    /// compare with the maintained values. Debug-build verification.
    pub(crate) fn check_consistency(&self, g: &BipartiteGraph) -> bool {
        let mut edges_from_u = 0u64;
        for &u in self.su.candidates() {
            let adj = g
                .u_neighbors(u)
                .iter()
                .filter(|&&v| self.sv.contains(v))
                .count() as u32;
            if self.su.nonnbr[u as usize] != self.sv.len as u32 - adj {
                return false;
            }
            edges_from_u += adj as u64;
        }
        let mut edges_from_v = 0u64;
        for &v in self.sv.candidates() {
            let adj = g
                .v_neighbors(v)
                .iter()
                .filter(|&&u| self.su.contains(u))
                .count() as u32;
            if self.sv.nonnbr[v as usize] != self.su.len as u32 - adj {
                return false;
            }
            edges_from_v += adj as u64;
        }
        edges_from_u == self.edge_count && edges_from_v == self.edge_count
    }

    /// Everything a backtracking step must restore, for integrity checks.
    pub(crate) fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            cand_u: {
                let mut c = self.su.candidates().to_vec();
                c.sort_unstable();
                c
            },
            cand_v: {
                let mut c = self.sv.candidates().to_vec();
                c.sort_unstable();
                c
            },
            nonnbr_u: self.su.nonnbr.clone(),
            nonnbr_v: self.sv.nonnbr.clone(),
            edge_count: self.edge_count,
            hold_u: self.hold_u.clone(),
            hold_v: self.hold_v.clone(),
            pivot_u_len: self.pivot_u_len,
            pivot_v_len: self.pivot_v_len,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct StateSnapshot {
    cand_u: Vec<u32>,
    cand_v: Vec<u32>,
    nonnbr_u: Vec<u32>,
    nonnbr_v: Vec<u32>,
    edge_count: u64,
    hold_u: Vec<u32>,
    hold_v: Vec<u32>,
    pivot_u_len: usize,
    pivot_v_len: usize,
}
