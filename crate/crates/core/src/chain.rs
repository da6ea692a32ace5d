//! Longest alternating chains and exact k-monotonicity checks.
//!
//! For a point `x` let `L(x)` be the length of a longest chain `x_1 < ... < x_l = x`
//! whose values start at 1 and alternate. Then `f` is k-monotone exactly when
//! `max_x L(x) <= k`. `L` is computed in one pass over index order by carrying, for
//! each value `b`, the best `L` among points below `x` with value `b` along the
//! Hasse edges. The same pass works for partial assignments where unassigned points
//! only relay comparability.

use crate::domain::Domain;
use crate::error::{KmtError, Result};
use crate::oracle::BoolFn;

/// Largest domain handled by full-read routines.
pub const FULL_READ_LIMIT: usize = 1 << 24;

const NONE: u32 = u32::MAX;

/// Result of a chain search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSearch {
    /// Length of a longest alternating chain starting with value 1.
    pub longest: usize,
    /// One such chain, bottom to top, when requested.
    pub chain: Option<Vec<usize>>,
}

fn chain_dp(domain: &Domain, value: impl Fn(usize) -> Option<bool>, want_chain: bool) -> ChainSearch {
    let n = domain.size();
    let mut best = [vec![0u32; n], vec![0u32; n]];
    let (mut arg, mut parent) = if want_chain {
        ([vec![NONE; n], vec![NONE; n]], vec![NONE; n])
    } else {
        ([Vec::new(), Vec::new()], Vec::new())
    };
    let mut top = (0u32, NONE);
    for x in 0..n {
        let mut below = [0u32; 2];
        let mut below_arg = [NONE; 2];
        for c in domain.lower_covers(x) {
            for b in 0..2 {
                if best[b][c] > below[b] {
                    below[b] = best[b][c];
                    if want_chain {
                        below_arg[b] = arg[b][c];
                    }
                }
            }
        }
        let own = value(x).map(|v| {
            let v = v as usize;
            let prev = below[1 - v];
            if v == 1 {
                (v, 1 + prev, below_arg[0])
            } else if prev > 0 {
                (v, 1 + prev, below_arg[1])
            } else {
                (v, 0, NONE)
            }
        });
        for b in 0..2 {
            best[b][x] = below[b];
            if want_chain {
                arg[b][x] = below_arg[b];
            }
        }
        if let Some((v, l, p)) = own {
            if l > 0 && l > best[v][x] {
                best[v][x] = l;
                if want_chain {
                    arg[v][x] = x as u32;
                }
            }
            if want_chain && l > 0 {
                parent[x] = p;
            }
            if l > top.0 {
                top = (l, x as u32);
            }
        }
    }
    let chain = if want_chain && top.0 > 0 {
        let mut c = Vec::with_capacity(top.0 as usize);
        let mut cur = top.1;
        while cur != NONE {
            c.push(cur as usize);
            cur = parent[cur as usize];
        }
        c.reverse();
        debug_assert_eq!(c.len(), top.0 as usize);
        Some(c)
    } else if want_chain {
        Some(Vec::new())
    } else {
        None
    };
    ChainSearch { longest: top.0 as usize, chain }
}

fn guard(domain: &Domain) -> Result<()> {
    if domain.size() > FULL_READ_LIMIT {
        return Err(KmtError::budget("full read", domain.size(), FULL_READ_LIMIT));
    }
    Ok(())
}

/// Length of a longest chain whose values alternate and start with 1 (0 if `f` is identically 0).
pub fn longest_alternating_chain(f: &dyn BoolFn) -> Result<usize> {
    guard(f.domain())?;
    Ok(chain_dp(f.domain(), |x| Some(f.value(x)), false).longest)
}

/// Whether `f` is k-monotone, i.e. no chain of length `k + 1` starts at 1 and alternates.
pub fn is_k_monotone(f: &dyn BoolFn, k: usize) -> Result<bool> {
    Ok(longest_alternating_chain(f)? <= k)
}

/// A violating chain of length `k + 1`, if one exists.
pub fn find_violation(f: &dyn BoolFn, k: usize) -> Result<Option<Vec<usize>>> {
    guard(f.domain())?;
    let found = chain_dp(f.domain(), |x| Some(f.value(x)), true);
    Ok(truncate(found, k))
}

fn truncate(found: ChainSearch, k: usize) -> Option<Vec<usize>> {
    if found.longest > k {
        let mut chain = found.chain.expect("chain requested");
        chain.truncate(k + 1);
        Some(chain)
    } else {
        None
    }
}

/// Chain search over a partial assignment: points mapped to `None` carry no value
/// but still relay the order between assigned points.
pub struct PartialChainSearch;

impl PartialChainSearch {
    /// Longest alternating chain among assigned points, with one witness chain.
    pub fn longest(domain: &Domain, values: &[Option<bool>]) -> ChainSearch {
        assert_eq!(values.len(), domain.size());
        chain_dp(domain, |x| values[x], true)
    }

    /// Longest alternating chain length among assigned points.
    pub fn longest_len(domain: &Domain, values: &[Option<bool>]) -> usize {
        assert_eq!(values.len(), domain.size());
        chain_dp(domain, |x| values[x], false).longest
    }

    /// Whether the assignment restricted to its assigned points is k-monotone.
    pub fn is_k_monotone(domain: &Domain, values: &[Option<bool>], k: usize) -> bool {
        Self::longest_len(domain, values) <= k
    }

    /// A violating `(k + 1)`-chain among assigned points, if any.
    pub fn find_violation(domain: &Domain, values: &[Option<bool>], k: usize) -> Option<Vec<usize>> {
        truncate(Self::longest(domain, values), k)
    }
}

/// Checks that `chain` is a strict chain of `k + 1` points whose values start at 1 and alternate.
pub fn is_violation_chain(domain: &Domain, value: impl Fn(usize) -> bool, chain: &[usize], k: usize) -> bool {
    if chain.len() != k + 1 || chain.iter().any(|&x| x >= domain.size()) {
        return false;
    }
    if !value(chain[0]) {
        return false;
    }
    chain.windows(2).all(|w| domain.lt(w[0], w[1]) && value(w[0]) != value(w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TruthTable;

    fn line(bits: &[u8]) -> TruthTable {
        TruthTable::line_from_bits(bits)
    }

    #[test]
    fn constants_and_small_lines() {
        assert_eq!(longest_alternating_chain(&line(&[0; 5])).unwrap(), 0);
        assert!(is_k_monotone(&line(&[0; 5]), 1).unwrap());
        assert_eq!(longest_alternating_chain(&line(&[1; 7])).unwrap(), 1);
        assert_eq!(longest_alternating_chain(&line(&[0, 1, 0])).unwrap(), 2);
        let f = line(&[1, 0, 1, 0]);
        assert!(!is_k_monotone(&f, 3).unwrap());
        assert!(is_k_monotone(&f, 4).unwrap());
    }

    /// Enumerates every chain of a small poset directly.
    fn brute_longest(f: &TruthTable) -> usize {
        let dom = f.domain();
        let n = dom.size();
        // best[x] = longest alternating chain starting at 1 ending at x, over all chains (not just covers).
        let mut best = vec![0usize; n];
        let mut top = 0;
        for x in 0..n {
            let mut l = if f.get(x) { 1 } else { 0 };
            for y in 0..x {
                if dom.lt(y, x) && best[y] > 0 && f.get(y) != f.get(x) {
                    l = l.max(best[y] + 1);
                }
            }
            best[x] = l;
            top = top.max(l);
        }
        top
    }

    #[test]
    fn anti_parity_on_square() {
        let dom = Domain::cube(2);
        let f = TruthTable::from_fn(dom, |i| (i & 1) ^ (i >> 1) == 0);
        // 00 < 01 < 11 carries 1, 0, 1.
        assert_eq!(brute_longest(&f), 3);
        assert!(!is_k_monotone(&f, 1).unwrap());
        assert!(!is_k_monotone(&f, 2).unwrap());
        assert!(is_k_monotone(&f, 3).unwrap());
    }

    #[test]
    fn matches_all_chain_enumeration_on_small_grids() {
        for dom in [Domain::cube(3), Domain::grid(3, 2), Domain::rect(vec![2, 3])] {
            for mask in 0..(1u64 << dom.size()) {
                let f = TruthTable::from_mask(dom.clone(), mask);
                assert_eq!(longest_alternating_chain(&f).unwrap(), brute_longest(&f));
            }
        }
    }

    #[test]
    fn witnesses_are_violations() {
        let dom = Domain::cube(3);
        for mask in 0..256u64 {
            let f = TruthTable::from_mask(dom.clone(), mask);
            for k in 1..4 {
                match find_violation(&f, k).unwrap() {
                    Some(c) => {
                        assert!(is_violation_chain(&dom, |x| f.get(x), &c, k));
                        assert!(!is_k_monotone(&f, k).unwrap());
                    }
                    None => assert!(is_k_monotone(&f, k).unwrap()),
                }
            }
        }
    }

    #[test]
    fn partial_assignments_relay_order() {
        // 1 at the bottom corner, 0 at the top corner, nothing in between.
        let dom = Domain::grid(3, 2);
        let mut vals = vec![None; 9];
        vals[0] = Some(true);
        vals[8] = Some(false);
        assert_eq!(PartialChainSearch::longest_len(&dom, &vals), 2);
        assert_eq!(PartialChainSearch::find_violation(&dom, &vals, 1), Some(vec![0, 8]));
        // Incomparable points never chain.
        let mut vals = vec![None; 9];
        vals[2] = Some(true);
        vals[6] = Some(false);
        assert_eq!(PartialChainSearch::longest_len(&dom, &vals), 1);
    }

    proptest::proptest! {
        #[test]
        fn checker_is_monotone_in_k(bits in proptest::collection::vec(0u8..2, 1..40), k in 1usize..6) {
            let f = line(&bits);
            if is_k_monotone(&f, k).unwrap() {
                proptest::prop_assert!(is_k_monotone(&f, k + 1).unwrap());
            }
        }

        #[test]
        fn line_chain_counts_runs(bits in proptest::collection::vec(0u8..2, 1..60)) {
            // On a line the longest chain is one plus the number of value changes after the first 1.
            let f = line(&bits);
            let expect = match bits.iter().position(|&b| b == 1) {
                None => 0,
                Some(p) => 1 + bits[p..].windows(2).filter(|w| w[0] != w[1]).count(),
            };
            proptest::prop_assert_eq!(longest_alternating_chain(&f).unwrap(), expect);
        }
    }
}
