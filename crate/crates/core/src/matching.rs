//! Matchings in the violation hypergraph.
//!
//! Hyperedges are the violating chains `x_1 < ... < x_{k+1}` with `f(x_1) = 1` and
//! alternating values. A set of pairwise disjoint hyperedges `M` certifies
//! `|M| <= dist * N`, and when `M` is maximal its points cover every hyperedge, so
//! `dist * N <= (k + 1) |M|`.

use crate::chain::FULL_READ_LIMIT;
use crate::distance::DistanceValue;
use crate::domain::Domain;
use crate::error::{KmtError, Result};
use crate::oracle::BoolFn;

/// Largest domain accepted by [`max_violation_matching_exact`].
pub const EXACT_MATCHING_LIMIT: usize = 12;

/// A greedy matching and the lower bound it certifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyMatching {
    pub chains: Vec<Vec<usize>>,
    pub lower_bound: DistanceValue,
}

impl GreedyMatching {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

/// For every unused point `y`, the length of a longest alternating chain that starts
/// at `y` and climbs through unused points (used points only relay the order).
struct UpChains<'a> {
    dom: &'a Domain,
    vals: Vec<bool>,
    used: Vec<bool>,
    up: Vec<u32>,
    // above[b][y] = max up(z) over unused z >= y with value b.
    above: [Vec<u32>; 2],
}

impl<'a> UpChains<'a> {
    fn new(dom: &'a Domain, vals: Vec<bool>) -> Self {
        let n = dom.size();
        let mut s = UpChains {
            dom,
            vals,
            used: vec![false; n],
            up: vec![0; n],
            above: [vec![0; n], vec![0; n]],
        };
        s.recompute(0, n);
        s
    }

    /// Recomputes indices in `[lo, hi)` from the top down; entries at `hi` and above stay valid.
    fn recompute(&mut self, lo: usize, hi: usize) {
        for y in (lo..hi).rev() {
            let mut a = [0u32; 2];
            for z in self.dom.upper_covers(y) {
                a[0] = a[0].max(self.above[0][z]);
                a[1] = a[1].max(self.above[1][z]);
            }
            let v = self.vals[y] as usize;
            self.up[y] = if self.used[y] { 0 } else { 1 + a[1 - v] };
            self.above[0][y] = a[0];
            self.above[1][y] = a[1];
            if !self.used[y] {
                self.above[v][y] = self.above[v][y].max(self.up[y]);
            }
        }
    }

    /// The lexicographically smallest chain of `len` points starting at `x`, if `up(x)` allows one.
    fn smallest_chain(&self, x: usize, len: usize) -> Option<Vec<usize>> {
        if self.used[x] || (self.up[x] as usize) < len {
            return None;
        }
        let mut chain = vec![x];
        let mut cur = x;
        while chain.len() < len {
            let need = (len - chain.len()) as u32;
            let want = !self.vals[cur];
            let next = (cur + 1..self.dom.size())
                .find(|&z| !self.used[z] && self.vals[z] == want && self.up[z] >= need && self.dom.leq(cur, z))
                .expect("up() promised a continuation");
            chain.push(next);
            cur = next;
        }
        Some(chain)
    }
}

/// Greedy disjoint violating chains: start points are scanned in index order and each
/// takes the lexicographically smallest available chain of length `k + 1`.
pub fn greedy_violation_matching(f: &dyn BoolFn, k: usize) -> Result<GreedyMatching> {
    let dom = f.domain();
    if dom.size() > FULL_READ_LIMIT {
        return Err(KmtError::budget("greedy matching", dom.size(), FULL_READ_LIMIT));
    }
    if k == 0 {
        return Err(KmtError::InvalidParameter("k must be at least 1".into()));
    }
    let vals: Vec<bool> = (0..dom.size()).map(|x| f.value(x)).collect();
    let mut state = UpChains::new(dom, vals);
    let mut chains = Vec::new();
    for x in 0..dom.size() {
        if !state.vals[x] {
            continue;
        }
        if let Some(chain) = state.smallest_chain(x, k + 1) {
            let hi = *chain.last().unwrap();
            for &p in &chain {
                state.used[p] = true;
            }
            state.recompute(x, hi + 1);
            chains.push(chain);
        }
    }
    let lower_bound = DistanceValue::lower_bound(chains.len() as u64, dom.size() as u64, chains.clone());
    Ok(GreedyMatching { chains, lower_bound })
}

/// Every violating `(k + 1)`-chain of a small function, as bitmasks over points.
pub fn violation_hyperedges(f: &dyn BoolFn, k: usize) -> Vec<u32> {
    let dom = f.domain();
    let n = dom.size();
    assert!(n <= 32);
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(dom: &Domain, f: &dyn BoolFn, k: usize, stack: &mut Vec<usize>, out: &mut Vec<u32>) {
        if stack.len() == k + 1 {
            out.push(stack.iter().fold(0u32, |m, &p| m | (1 << p)));
            return;
        }
        let cur = *stack.last().unwrap();
        for z in cur + 1..dom.size() {
            if f.value(z) != f.value(cur) && dom.lt(cur, z) {
                stack.push(z);
                extend(dom, f, k, stack, out);
                stack.pop();
            }
        }
    }
    for x in 0..n {
        if f.value(x) {
            stack.push(x);
            extend(dom, f, k, &mut stack, &mut out);
            stack.pop();
        }
    }
    out
}

/// Size of a maximum set of pairwise disjoint violating chains, by exhaustive search.
pub fn max_violation_matching_exact(f: &dyn BoolFn, k: usize) -> Result<usize> {
    let n = f.domain().size();
    if n > EXACT_MATCHING_LIMIT {
        return Err(KmtError::budget("exact matching", n, EXACT_MATCHING_LIMIT));
    }
    let edges = violation_hyperedges(f, k);
    fn best(edges: &[u32], free: u32) -> usize {
        // Branch on the lowest point that still lies in an available hyperedge.
        let live: Vec<u32> = edges.iter().copied().filter(|e| e & !free == 0).collect();
        let Some(&first) = live.first() else { return 0 };
        let v = first.trailing_zeros();
        let bit = 1u32 << v;
        let mut top = best(&live, free & !bit);
        for &e in live.iter().filter(|e| *e & bit != 0) {
            top = top.max(1 + best(&live, free & !e));
        }
        top
    }
    Ok(best(&edges, (1u32 << n) - 1))
}
