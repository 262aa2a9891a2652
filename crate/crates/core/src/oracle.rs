//! Definition-level reference implementations used to validate the search
//! engine, plus fixture and random-graph helpers for tests.
//!
//! The brute-force counters enumerate vertex subsets directly and are
//! intentionally independent of the candidate/pivot machinery: they share
//! nothing with the engine beyond the graph type and `binomial`.

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::modes::LocalCounts;
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default enumeration-step budget for the brute-force counters.
pub const DEFAULT_ORACLE_BUDGET: u64 = 50_000_000;

/// Count (p,q)-bicliques by enumerating subsets of one side and binomially
/// expanding common neighborhoods on the other. Exact, exponentially slow,
/// and guarded by a work budget.
pub fn brute_force_count(g: &BipartiteGraph, p: u64, q: u64) -> Result<BigUint> {
    brute_force_count_with_budget(g, p, q, DEFAULT_ORACLE_BUDGET)
}

pub fn brute_force_count_with_budget(
    g: &BipartiteGraph,
    p: u64,
    q: u64,
    budget: u64,
) -> Result<BigUint> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidArgument(format!(
            "p and q must be positive (got p={p}, q={q})"
        )));
    }
    // Enumerate whichever side has fewer subsets to visit.
    let cost_u = binomial(g.u_count() as u64, p as i64);
    let cost_v = binomial(g.v_count() as u64, q as i64);
    if cost_u <= cost_v {
        Enumerator::new(g, false, p, q, budget).count()
    } else {
        let t = g.transposed();
        Enumerator::new(&t, false, q, p, budget).count()
    }
}

/// Per-node membership tallies over the same enumeration.
pub fn brute_force_local(g: &BipartiteGraph, p: u64, q: u64) -> Result<LocalCounts> {
    brute_force_local_with_budget(g, p, q, DEFAULT_ORACLE_BUDGET)
}

pub fn brute_force_local_with_budget(
    g: &BipartiteGraph,
    p: u64,
    q: u64,
    budget: u64,
) -> Result<LocalCounts> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidArgument(format!(
            "p and q must be positive (got p={p}, q={q})"
        )));
    }
    let cost_u = binomial(g.u_count() as u64, p as i64);
    let cost_v = binomial(g.v_count() as u64, q as i64);
    if cost_u <= cost_v {
        let mut e = Enumerator::new(g, true, p, q, budget);
        e.count()?;
        Ok(LocalCounts {
            p,
            q,
            u: e.local_own,
            v: e.local_other,
        })
    } else {
        let t = g.transposed();
        let mut e = Enumerator::new(&t, true, q, p, budget);
        e.count()?;
        Ok(LocalCounts {
            p,
            q,
            u: e.local_other,
            v: e.local_own,
        })
    }
}

struct Enumerator<'g> {
    g: &'g BipartiteGraph,
    subset_size: u64,
    other_param: u64,
    budget: u64,
    steps: u64,
    tally: bool,
    total: BigUint,
    chosen: Vec<u32>,
    /// Tallies for the enumerated side / the opposite side.
    local_own: Vec<BigUint>,
    local_other: Vec<BigUint>,
}

impl<'g> Enumerator<'g> {
    fn new(g: &'g BipartiteGraph, tally: bool, subset_size: u64, other_param: u64, budget: u64) -> Self {
        Enumerator {
            g,
            subset_size,
            other_param,
            budget,
            steps: 0,
            tally,
            total: BigUint::zero(),
            chosen: Vec::new(),
            local_own: vec![BigUint::zero(); if tally { g.u_count() } else { 0 }],
            local_other: vec![BigUint::zero(); if tally { g.v_count() } else { 0 }],
        }
    }

    fn count(&mut self) -> Result<BigUint> {
        let all: Vec<u32> = (0..self.g.v_count() as u32).collect();
        self.extend(0, &all)?;
        Ok(self.total.clone())
    }

    fn extend(&mut self, start: u32, common: &[u32]) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::OracleBudgetExceeded(self.budget));
        }
        if self.chosen.len() as u64 == self.subset_size {
            let c = common.len() as u64;
            let add = binomial(c, self.other_param as i64);
            if add.is_zero() {
                return Ok(());
            }
            if self.tally {
                for &u in &self.chosen {
                    self.local_own[u as usize] += &add;
                }
                let per_v = binomial(c - 1, self.other_param as i64 - 1);
                for &v in common {
                    self.local_other[v as usize] += &per_v;
                }
            }
            self.total += add;
            return Ok(());
        }
        if (common.len() as u64) < self.other_param {
            return Ok(());
        }
        let remaining = self.subset_size - self.chosen.len() as u64;
        let n = self.g.u_count() as u32;
        for u in start..n {
            if u64::from(n - u) < remaining {
                break;
            }
            let next: Vec<u32> = intersect_sorted(common, self.g.u_neighbors(u));
            if (next.len() as u64) < self.other_param {
                continue;
            }
            self.chosen.push(u);
            self.extend(u + 1, &next)?;
            self.chosen.pop();
        }
        Ok(())
    }
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Seeded Erdős–Rényi-style bipartite graph: each of the `u_count * v_count`
/// possible edges is present independently with `edge_probability`.
pub fn random_bipartite(
    u_count: usize,
    v_count: usize,
    edge_probability: f64,
    seed: u64,
) -> BipartiteGraph {
    assert!(
        (0.0..=1.0).contains(&edge_probability),
        "edge probability must be within [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..u_count as u32 {
        for v in 0..v_count as u32 {
            if rng.random::<f64>() < edge_probability {
                edges.push((u, v));
            }
        }
    }
    BipartiteGraph::from_edges(u_count, v_count, &edges)
}

/// Relabel nodes of both sides through the given permutations
/// (`new_u = u_perm[old_u]`). Used by the label-invariance tests.
pub fn relabel(g: &BipartiteGraph, u_perm: &[u32], v_perm: &[u32]) -> BipartiteGraph {
    assert_eq!(u_perm.len(), g.u_count());
    assert_eq!(v_perm.len(), g.v_count());
    let mut edges = Vec::with_capacity(g.edge_count() as usize);
    for u in 0..g.u_count() as u32 {
        for &v in g.u_neighbors(u) {
            edges.push((u_perm[u as usize], v_perm[v as usize]));
        }
    }
    BipartiteGraph::from_edges(g.u_count(), g.v_count(), &edges)
}

/// How the hand-built example graph was put together.
pub const FIGURE1_PROVENANCE: &str = "synthetic 5x5 fixture with exactly ten (3,3)-bicliques; \
u0-{v0..v3}, u1-{v1,v2,v4}, u2..u4-{v1..v4}; the optional u1-v0 edge is deliberately absent \
(its presence would change no stated count)";

/// A small hand-built graph with exactly ten (3,3)-bicliques, used as the
/// golden fixture across the test suites. See [`FIGURE1_PROVENANCE`].
pub fn figure1() -> BipartiteGraph {
    BipartiteGraph::from_edges(
        5,
        5,
        &[
            (0, 0),
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 1),
            (1, 2),
            (1, 4),
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 4),
            (4, 1),
            (4, 2),
            (4, 3),
            (4, 4),
        ],
    )
}
