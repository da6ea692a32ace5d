//! Minimum-cost monotone labelings by minimum cut.
//!
//! Choosing a monotone `h` is choosing an up-set `U = {h = 1}`. With costs
//! `cost1[x]` for `x in U` and `cost0[x]` otherwise, the cheapest up-set is a minimum
//! `s`-`t` cut in the network with arcs `s -> x` (capacity `cost0[x]`), `x -> t`
//! (capacity `cost1[x]`) and uncuttable arcs from every point to its upper covers.
//! This gives the exact distance to monotonicity on any grid.

use crate::domain::Domain;
use crate::distance::DistanceValue;
use crate::error::{KmtError, Result};
use crate::oracle::BoolFn;

/// Largest domain accepted by the cut routines.
pub const FLOW_LIMIT: usize = 1 << 22;

const INF: u64 = u64::MAX / 4;

struct Network {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u64>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Network {
    fn new(nodes: usize) -> Self {
        Network { head: vec![NIL; nodes], to: Vec::new(), cap: Vec::new(), next: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, c: u64) {
        for (a, b, cc) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cc);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.head.len()];
        let mut queue = std::collections::VecDeque::new();
        level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
                e = self.next[e];
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    /// Dinic's algorithm with an explicit stack for the blocking-flow search.
    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        while let Some(level) = self.levels(s, t) {
            let mut it = self.head.clone();
            loop {
                // Find one augmenting path in the level graph.
                let mut path: Vec<usize> = Vec::new();
                let mut u = s;
                let found = loop {
                    if u == t {
                        break true;
                    }
                    let mut advanced = false;
                    while it[u] != NIL {
                        let e = it[u];
                        let v = self.to[e];
                        if self.cap[e] > 0 && level[v] == level[u] + 1 {
                            path.push(e);
                            u = v;
                            advanced = true;
                            break;
                        }
                        it[u] = self.next[e];
                    }
                    if !advanced {
                        match path.pop() {
                            None => break false,
                            Some(e) => {
                                // Dead end: retreat and skip the arc that led here.
                                let back = self.to[e ^ 1];
                                it[back] = self.next[it[back]];
                                u = back;
                            }
                        }
                    }
                };
                if !found {
                    break;
                }
                let push = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= push;
                    self.cap[e ^ 1] += push;
                }
                total += push;
            }
        }
        total
    }

    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
                e = self.next[e];
            }
        }
        seen
    }
}

/// Cheapest monotone labeling: returns the total cost and the labeling.
pub fn min_cost_monotone(domain: &Domain, cost0: &[u64], cost1: &[u64]) -> Result<(u64, Vec<bool>)> {
    let n = domain.size();
    assert_eq!(cost0.len(), n);
    assert_eq!(cost1.len(), n);
    if n > FLOW_LIMIT {
        return Err(KmtError::budget("minimum-cut distance", n, FLOW_LIMIT));
    }
    let (s, t) = (n, n + 1);
    let mut net = Network::new(n + 2);
    for x in 0..n {
        if cost0[x] > 0 {
            net.add(s, x, cost0[x]);
        }
        if cost1[x] > 0 {
            net.add(x, t, cost1[x]);
        }
        for y in domain.upper_covers(x) {
            net.add(x, y, INF);
        }
    }
    let cut = net.max_flow(s, t);
    let side = net.source_side(s);
    let labels: Vec<bool> = side[..n].to_vec();
    debug_assert_eq!(
        cut,
        (0..n).map(|x| if labels[x] { cost1[x] } else { cost0[x] }).sum::<u64>()
    );
    Ok((cut, labels))
}

/// Exact distance to monotonicity on any grid.
pub fn distance_to_monotone(f: &dyn BoolFn) -> Result<DistanceValue> {
    let dom = f.domain();
    let n = dom.size();
    let (cost0, cost1): (Vec<u64>, Vec<u64>) = (0..n)
        .map(|x| if f.value(x) { (1, 0) } else { (0, 1) })
        .unzip();
    let (cut, _) = min_cost_monotone(dom, &cost0, &cost1)?;
    Ok(DistanceValue::exact(cut, n as u64))
}
