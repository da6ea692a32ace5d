//! Lower bounds from chain partitions.
//!
//! A k-monotone function restricted to any chain is a k-monotone function on a line.
//! So if `C_1, ..., C_r` are pairwise disjoint chains, the distance of `f` to the
//! k-monotone class is at least the sum of the exact line distances of the
//! restrictions `f|C_i`, divided by `N`. Unlike a matching of violations, this bound
//! is not capped at `N / (k + 1)`.

use crate::chain::FULL_READ_LIMIT;
use crate::distance::{line_min_cost, DistanceValue};
use crate::domain::{Domain, DomainKind};
use crate::error::{KmtError, Result};
use crate::oracle::BoolFn;

/// Symmetric chain decomposition of `{0,1}^d` by parenthesis matching.
///
/// Reading the bits of `x` from position 0 upward, a 0 opens and a 1 closes. The
/// unmatched positions of every `x` look like `1...10...0`; a chain collects the points
/// sharing the matched pairs, ordered by how many unmatched positions are 1. Each chain
/// is saturated and symmetric around weight `d/2`, and there are `C(d, floor(d/2))` of them.
pub fn symmetric_chain_decomposition(d: usize) -> Vec<Vec<usize>> {
    let n = 1usize << d;
    let mut chains = Vec::new();
    let mut open = Vec::with_capacity(d);
    let mut free = Vec::with_capacity(d);
    for x in 0..n {
        open.clear();
        free.clear();
        let mut has_free_one = false;
        for i in 0..d {
            if x >> i & 1 == 0 {
                open.push(i);
            } else if open.pop().is_none() {
                has_free_one = true;
                break;
            }
        }
        if has_free_one {
            continue;
        }
        free.extend_from_slice(&open);
        let mut chain = Vec::with_capacity(free.len() + 1);
        let mut y = x;
        chain.push(y);
        for &p in &free {
            y |= 1 << p;
            chain.push(y);
        }
        chains.push(chain);
    }
    chains
}

/// Partition of a grid into the lines parallel to coordinate 0.
pub fn axis_line_partition(domain: &Domain) -> Vec<Vec<usize>> {
    let side = domain.dims()[0];
    let lines = domain.size() / side;
    (0..lines).map(|r| (0..side).map(|i| r * side + i).collect()).collect()
}

/// The default chain partition of a domain: symmetric chains on a cube, axis lines otherwise.
pub fn default_chain_partition(domain: &Domain) -> Vec<Vec<usize>> {
    if domain.kind() == DomainKind::Cube {
        symmetric_chain_decomposition(domain.d())
    } else {
        axis_line_partition(domain)
    }
}

/// Exact distance of the restriction of `f` to `chain` to k-monotone, in flips.
pub fn chain_restriction_cost(f: &dyn BoolFn, chain: &[usize], k: usize) -> u64 {
    let (cost0, cost1): (Vec<u64>, Vec<u64>) = chain
        .iter()
        .map(|&x| if f.value(x) { (1, 0) } else { (0, 1) })
        .unzip();
    line_min_cost(&cost0, &cost1, k).0
}

/// Certified lower bound from the given pairwise disjoint chains.
pub fn chain_partition_bound(f: &dyn BoolFn, k: usize, chains: &[Vec<usize>]) -> Result<DistanceValue> {
    if k == 0 {
        return Err(KmtError::InvalidParameter("k must be at least 1".into()));
    }
    let dom = f.domain();
    if dom.size() > FULL_READ_LIMIT {
        return Err(KmtError::budget("chain partition", dom.size(), FULL_READ_LIMIT));
    }
    let mut seen = vec![false; dom.size()];
    for chain in chains {
        for (i, &x) in chain.iter().enumerate() {
            if x >= dom.size() || seen[x] {
                return Err(KmtError::PreconditionViolated(format!("point {x} is repeated or out of range")));
            }
            seen[x] = true;
            if i > 0 && !dom.lt(chain[i - 1], x) {
                return Err(KmtError::PreconditionViolated(format!("{} < {x} fails in a chain", chain[i - 1])));
            }
        }
    }
    let flips: u64 = chains.iter().map(|c| chain_restriction_cost(f, c, k)).sum();
    Ok(DistanceValue::partition_bound(flips, dom.size() as u64))
}

/// [`chain_partition_bound`] over [`default_chain_partition`].
pub fn default_partition_bound(f: &dyn BoolFn, k: usize) -> Result<DistanceValue> {
    chain_partition_bound(f, k, &default_chain_partition(f.domain()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::exact_distance_bruteforce;
    use crate::table::TruthTable;

    fn binomial(n: usize, r: usize) -> usize {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn decomposition_is_a_symmetric_partition() {
        for d in 1..=10 {
            let chains = symmetric_chain_decomposition(d);
            assert_eq!(chains.len(), binomial(d, d / 2));
            let mut seen = vec![false; 1 << d];
            for c in &chains {
                let lo = c[0].count_ones() as usize;
                let hi = c[c.len() - 1].count_ones() as usize;
                assert_eq!(lo + hi, d, "chain is not symmetric");
                for w in c.windows(2) {
                    assert_eq!(w[0] & w[1], w[0]);
                    assert_eq!(w[1].count_ones(), w[0].count_ones() + 1);
                }
                for &x in c {
                    assert!(!seen[x]);
                    seen[x] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn three_cube_chains() {
        let mut chains = symmetric_chain_decomposition(3);
        chains.sort();
        assert_eq!(chains, vec![vec![0, 1, 3, 7], vec![2, 6], vec![4, 5]]);
    }

    #[test]
    fn bound_never_exceeds_exact_distance() {
        for dom in [Domain::cube(3), Domain::grid(3, 2), Domain::cube(4)] {
            let total = 1u64 << dom.size().min(16);
            let step = (total / 4000).max(1);
            let mut mask = 0;
            while mask < total {
                let f = TruthTable::from_mask(dom.clone(), mask);
                for k in 1..=3 {
                    let lb = default_partition_bound(&f, k).unwrap();
                    let exact = exact_distance_bruteforce(&f, k).unwrap();
                    assert!(lb.ratio() <= exact.ratio(), "{lb} > {exact} for mask {mask:#x}, k = {k}");
                }
                mask += step;
            }
        }
    }

    #[test]
    fn rejects_non_chains() {
        let f = TruthTable::zeros(Domain::cube(2));
        assert!(chain_partition_bound(&f, 1, &[vec![1, 2]]).is_err());
        assert!(chain_partition_bound(&f, 1, &[vec![0, 1], vec![1, 3]]).is_err());
        assert_eq!(chain_partition_bound(&f, 1, &[vec![0, 1, 3]]).unwrap().num, 0);
    }

    #[test]
    fn parity_is_far_along_chains() {
        // Along any saturated chain parity alternates, so each chain of length l costs
        // its line distance to k-monotone.
        let f = TruthTable::from_fn(Domain::cube(8), |x| x.count_ones() % 2 == 1);
        let lb = default_partition_bound(&f, 2).unwrap();
        assert!(lb.as_f64() > 0.25);
    }
}
