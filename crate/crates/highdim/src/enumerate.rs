//! Enumeration of the k-monotone functions on a small block domain.
//!
//! On a line the k-monotone functions are the staircases whose longest alternating
//! chain starting with 1 has length at most `k`, generated directly from their cut
//! positions. Off the line every table of `[m]^d` is filtered with a bit-parallel chain
//! program, which limits `m^d` to [`FILTER_LIMIT`]. The least-cost search has one more
//! route: for `k = 1` it is a minimum cut on any block grid.

use kmt_core::distance::line_min_cost;
use kmt_core::flow::min_cost_monotone;
use kmt_core::{Domain, KmtError, Result, TruthTable};

/// Largest block domain handled by filter enumeration.
pub const FILTER_LIMIT: usize = 22;

/// Largest number of staircases the line enumeration hands out.
pub const STAIRCASE_LIMIT: u128 = 1 << 26;

/// Number of k-monotone functions on `[m]`, saturating at `u128::MAX`.
pub fn staircase_count(m: usize, k: usize) -> u128 {
    let choose = |n: usize, r: usize| -> u128 {
        (0..r).try_fold(1u128, |acc, i| Some(acc.checked_mul((n - i) as u128)? / (i + 1) as u128)).unwrap_or(u128::MAX)
    };
    let upto = |c: usize| (0..=c.min(m - 1)).fold(0u128, |s, r| s.saturating_add(choose(m - 1, r)));
    upto(k).saturating_add(if k >= 1 { upto(k - 1) } else { 0 })
}

/// Staircases on `[m]`: a start value and the positions where the value changes.
///
/// A pattern starting at 0 with `c` cuts has a longest alternating chain of length
/// `c`, one starting at 1 has length `c + 1`.
struct Staircases {
    m: usize,
    k: usize,
    start: bool,
    cuts: Vec<usize>,
    done: bool,
}

impl Staircases {
    fn new(m: usize, k: usize) -> Self {
        Staircases { m, k, start: false, cuts: Vec::new(), done: false }
    }

    fn max_cuts(&self) -> usize {
        let c = if self.start { self.k - 1 } else { self.k };
        c.min(self.m - 1)
    }

    fn table(&self) -> TruthTable {
        let mut v = self.start;
        let mut next = 0;
        TruthTable::from_fn(Domain::line(self.m), |i| {
            if next < self.cuts.len() && self.cuts[next] == i {
                v = !v;
                next += 1;
            }
            v
        })
    }

    /// Next cut set of the same size in lexicographic order, then the first one of the
    /// next size, then the other start value.
    fn advance(&mut self) {
        let c = self.cuts.len();
        let top = self.m - 1;
        let mut i = c;
        while i > 0 {
            i -= 1;
            if self.cuts[i] < top - (c - 1 - i) {
                self.cuts[i] += 1;
                for j in i + 1..c {
                    self.cuts[j] = self.cuts[j - 1] + 1;
                }
                return;
            }
        }
        if c < self.max_cuts() {
            self.cuts = (1..=c + 1).collect();
            return;
        }
        if !self.start && self.k >= 1 {
            self.start = true;
            self.cuts.clear();
            return;
        }
        self.done = true;
    }
}

impl Iterator for Staircases {
    type Item = TruthTable;

    fn next(&mut self) -> Option<TruthTable> {
        if self.done {
            return None;
        }
        let t = self.table();
        self.advance();
        Some(t)
    }
}

/// Cover lists and a bit-parallel test of `L(f) <= k` for tables given as masks.
pub(crate) struct MaskFilter {
    covers: Vec<Vec<usize>>,
}

impl MaskFilter {
    pub(crate) fn new(domain: &Domain) -> Self {
        MaskFilter { covers: (0..domain.size()).map(|x| domain.lower_covers(x).collect()).collect() }
    }

    /// Longest alternating chain starting with 1 of the table `mask`.
    ///
    /// Index order is a linear extension, so one pass suffices. `up[x][v]` is the
    /// longest such chain inside the down-set of `x` ending with value `v`.
    pub(crate) fn longest(&self, mask: u64) -> usize {
        let n = self.covers.len();
        let mut up = [[0u8; 2]; 64];
        let mut best = 0u8;
        for x in 0..n {
            let mut below = [0u8; 2];
            for &y in &self.covers[x] {
                below[0] = below[0].max(up[y][0]);
                below[1] = below[1].max(up[y][1]);
            }
            let v = (mask >> x & 1) as usize;
            let end = if v == 1 {
                below[0] + 1
            } else if below[1] > 0 {
                below[1] + 1
            } else {
                0
            };
            up[x] = below;
            up[x][v] = up[x][v].max(end);
            best = best.max(end);
        }
        best as usize
    }
}

/// Iterator over the k-monotone functions on `[m]^d`, each exactly once.
pub fn enumerate_k_monotone_block_functions(
    m: usize,
    d: usize,
    k: usize,
) -> Result<Box<dyn Iterator<Item = TruthTable>>> {
    if m == 0 || d == 0 {
        return Err(KmtError::InvalidParameter("block domain needs m, d >= 1".into()));
    }
    if d == 1 {
        let count = staircase_count(m, k);
        if count > STAIRCASE_LIMIT {
            return Err(KmtError::BudgetExceeded { what: "staircase enumeration", requested: count, limit: STAIRCASE_LIMIT });
        }
        return Ok(Box::new(Staircases::new(m, k)));
    }
    let size = m.checked_pow(d as u32).unwrap_or(usize::MAX);
    if size > FILTER_LIMIT {
        return Err(KmtError::budget("filter enumeration", size, FILTER_LIMIT));
    }
    let domain = Domain::grid(m, d);
    let filter = MaskFilter::new(&domain);
    Ok(Box::new(
        (0..1u64 << size).filter(move |&mask| filter.longest(mask) <= k).map(move |mask| TruthTable::from_mask(domain.clone(), mask)),
    ))
}

/// Least total cost of a k-monotone function on the block domain, and a minimizer.
///
/// `cost0[x]` and `cost1[x]` are the costs of the values 0 and 1 at block `x`. On a
/// line the staircase program finds the optimum and for `k = 1` a minimum cut does.
/// Otherwise every enumerated function is scored.
pub fn min_cost_k_monotone(block_domain: &Domain, cost0: &[u64], cost1: &[u64], k: usize) -> Result<(u64, TruthTable)> {
    if block_domain.is_line() {
        let (cost, values) = line_min_cost(cost0, cost1, k);
        return Ok((cost, TruthTable::from_bools(block_domain.clone(), &values)?));
    }
    if k == 1 {
        let (cost, values) = min_cost_monotone(block_domain, cost0, cost1)?;
        return Ok((cost, TruthTable::from_bools(block_domain.clone(), &values)?));
    }
    let size = block_domain.size();
    if size > FILTER_LIMIT {
        return Err(KmtError::budget("filter enumeration", size, FILTER_LIMIT));
    }
    let filter = MaskFilter::new(block_domain);
    let score = |mask: u64| -> u64 { (0..size).map(|x| if mask >> x & 1 == 1 { cost1[x] } else { cost0[x] }).sum() };
    let (cost, mask) = (0..1u64 << size)
        .filter(|&mask| filter.longest(mask) <= k)
        .map(|mask| (score(mask), mask))
        .min()
        .expect("the zero function is k-monotone");
    Ok((cost, TruthTable::from_mask(block_domain.clone(), mask)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmt_core::is_k_monotone;
    use std::collections::HashSet;

    fn brute(dom: &Domain, k: usize) -> HashSet<u64> {
        (0..1u64 << dom.size())
            .filter(|&mask| is_k_monotone(&TruthTable::from_mask(dom.clone(), mask), k).unwrap())
            .collect()
    }

    fn listed(m: usize, d: usize, k: usize) -> Vec<u64> {
        enumerate_k_monotone_block_functions(m, d, k).unwrap().map(|t| t.to_mask()).collect()
    }

    #[test]
    fn three_point_line_monotone() {
        let mut got = listed(3, 1, 1);
        got.sort();
        assert_eq!(got, vec![0b000, 0b100, 0b110, 0b111]);
    }

    #[test]
    fn matches_brute_force_filter() {
        for (m, d) in [(1, 1), (2, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 4), (4, 2)] {
            let dom = Domain::grid(m, d);
            for k in 1..=4 {
                let got = listed(m, d, k);
                let set: HashSet<u64> = got.iter().copied().collect();
                assert_eq!(set.len(), got.len(), "duplicates for m={m} d={d} k={k}");
                assert_eq!(set, brute(&dom, k), "m={m} d={d} k={k}");
                if d == 1 {
                    assert_eq!(got.len() as u128, staircase_count(m, k));
                }
            }
        }
    }

    #[test]
    fn large_k_gives_everything() {
        for m in 1..=9 {
            for k in m..m + 3 {
                assert_eq!(listed(m, 1, k).len(), 1 << m);
            }
        }
    }

    #[test]
    fn mask_filter_agrees_with_chain_program() {
        for dom in [Domain::grid(3, 2), Domain::cube(4), Domain::rect(vec![2, 5])] {
            let filter = MaskFilter::new(&dom);
            for mask in (0..1u64 << dom.size()).step_by(13) {
                let t = TruthTable::from_mask(dom.clone(), mask);
                assert_eq!(filter.longest(mask), kmt_core::longest_alternating_chain(&t).unwrap());
            }
        }
    }

    #[test]
    fn budgets() {
        assert!(enumerate_k_monotone_block_functions(5, 2, 1).is_err());
        assert!(enumerate_k_monotone_block_functions(200, 1, 2).is_ok());
        assert!(matches!(
            enumerate_k_monotone_block_functions(200, 1, 60),
            Err(KmtError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn min_cost_matches_scan() {
        let cost0 = [3u64, 0, 5, 1, 4, 2, 2];
        let cost1 = [1u64, 4, 0, 2, 0, 3, 1];
        for k in 1..=3 {
            let (best, h) = min_cost_k_monotone(&Domain::line(7), &cost0, &cost1, k).unwrap();
            let scan = listed(7, 1, k)
                .into_iter()
                .map(|mask| (0..7).map(|x| if mask >> x & 1 == 1 { cost1[x] } else { cost0[x] }).sum::<u64>())
                .min()
                .unwrap();
            assert_eq!(best, scan);
            assert!(is_k_monotone(&h, k).unwrap());
        }
        let dom = Domain::grid(3, 2);
        let c0: Vec<u64> = (0..9).map(|x| (x * 7 % 5) as u64).collect();
        let c1: Vec<u64> = (0..9).map(|x| (x * 3 % 4) as u64).collect();
        for k in 1..=3 {
            let (best, h) = min_cost_k_monotone(&dom, &c0, &c1, k).unwrap();
            let score = |mask: u64| (0..9).map(|x| if mask >> x & 1 == 1 { c1[x] } else { c0[x] }).sum::<u64>();
            assert_eq!(best, score(h.to_mask()));
            assert!(is_k_monotone(&h, k).unwrap());
            assert_eq!(best, brute(&dom, k).into_iter().map(score).min().unwrap(), "k = {k}");
        }
    }

    #[test]
    fn cut_route_handles_large_block_grids() {
        let dom = Domain::rect(vec![30, 7]);
        let c0: Vec<u64> = (0..dom.size()).map(|x| (x * 11 % 7) as u64).collect();
        let c1: Vec<u64> = (0..dom.size()).map(|x| (x * 5 % 9) as u64).collect();
        let (best, h) = min_cost_k_monotone(&dom, &c0, &c1, 1).unwrap();
        assert!(is_k_monotone(&h, 1).unwrap());
        let score = (0..dom.size()).map(|x| if h.get(x) { c1[x] } else { c0[x] }).sum::<u64>();
        assert_eq!(best, score);
        assert!(min_cost_k_monotone(&dom, &c0, &c1, 2).is_err());
    }
}
