//! Exact and certified distances to the class of k-monotone functions.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{KmtError, Result};
use crate::flow;
use crate::oracle::BoolFn;
use crate::table::TruthTable;

/// Largest domain accepted by [`exact_distance_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Whether a distance is exact or only a certified lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Exact,
    LowerBound,
}

/// A normalized Hamming distance `num / den` with `den = |domain|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceValue {
    pub num: u64,
    pub den: u64,
    pub kind: DistanceKind,
    /// Disjoint violating chains justifying a matching lower bound. Partition bounds carry none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<Vec<usize>>>,
}

impl DistanceValue {
    pub fn exact(num: u64, den: u64) -> Self {
        assert!(num <= den && den > 0);
        DistanceValue { num, den, kind: DistanceKind::Exact, certificate: None }
    }

    pub fn lower_bound(num: u64, den: u64, certificate: Vec<Vec<usize>>) -> Self {
        assert!(num <= den && den > 0);
        DistanceValue { num, den, kind: DistanceKind::LowerBound, certificate: Some(certificate) }
    }

    /// Lower bound certified by a chain partition (see [`crate::partition`]).
    pub fn partition_bound(num: u64, den: u64) -> Self {
        assert!(num <= den && den > 0);
        DistanceValue { num, den, kind: DistanceKind::LowerBound, certificate: None }
    }

    /// The value as a reduced rational.
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.num, self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_exact(&self) -> bool {
        self.kind == DistanceKind::Exact
    }
}

impl std::fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.ratio();
        match self.kind {
            DistanceKind::Exact => write!(f, "{}/{}", r.numer(), r.denom()),
            DistanceKind::LowerBound => write!(f, ">= {}/{}", r.numer(), r.denom()),
        }
    }
}

/// Minimum total cost of a sequence with at most `k` alternations after its first 1,
/// where placing value `b` at position `i` costs `cost[b][i]`. Returns the cost and one
/// optimal sequence.
///
/// States: `0` means no 1 has appeared yet; `j >= 1` means the sequence so far has a
/// longest alternating chain of length `j` and currently holds value `j mod 2`.
pub fn line_min_cost(cost0: &[u64], cost1: &[u64], k: usize) -> (u64, Vec<bool>) {
    assert_eq!(cost0.len(), cost1.len());
    let n = cost0.len();
    let states = k + 1;
    const INF: u64 = u64::MAX / 4;
    let mut cur = vec![INF; states];
    cur[0] = 0;
    // back[i * states + s] = predecessor state of state s after position i.
    let mut back = vec![u32::MAX; n * states];
    for i in 0..n {
        let mut next = vec![INF; states];
        for (s, &c) in cur.iter().enumerate() {
            if c >= INF {
                continue;
            }
            for v in [false, true] {
                let t = match (s, v) {
                    (0, false) => 0,
                    (0, true) => 1,
                    (s, v) if v == (s % 2 == 1) => s,
                    (s, _) => s + 1,
                };
                if t > k {
                    continue;
                }
                let nc = c + if v { cost1[i] } else { cost0[i] };
                if nc < next[t] {
                    next[t] = nc;
                    back[i * states + t] = s as u32;
                }
            }
        }
        cur = next;
    }
    let (mut s, &best) = cur.iter().enumerate().min_by_key(|&(_, c)| *c).expect("k + 1 >= 1 states");
    let mut seq = vec![false; n];
    for i in (0..n).rev() {
        seq[i] = s % 2 == 1;
        s = back[i * states + s] as usize;
    }
    (best, seq)
}

/// Exact distance of a function on a line to the k-monotone class, in `O(n k)` time.
pub fn exact_distance_line_dp(f: &dyn BoolFn, k: usize) -> Result<DistanceValue> {
    let (flips, _) = closest_k_monotone_line(f, k)?;
    Ok(DistanceValue::exact(flips as u64, f.domain().size() as u64))
}

/// A closest k-monotone function on a line and the number of flips to reach it.
pub fn closest_k_monotone_line(f: &dyn BoolFn, k: usize) -> Result<(usize, TruthTable)> {
    let dom = f.domain();
    if !dom.is_line() {
        return Err(KmtError::PreconditionViolated(format!("line DP needs a line domain, got {dom}")));
    }
    check_k(k)?;
    let n = dom.size();
    let (cost0, cost1): (Vec<u64>, Vec<u64>) = (0..n)
        .map(|i| if f.value(i) { (1, 0) } else { (0, 1) })
        .unzip();
    let (flips, seq) = line_min_cost(&cost0, &cost1, k);
    Ok((flips as usize, TruthTable::from_fn(dom.clone(), |i| seq[i])))
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(KmtError::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// Precomputed cover relation of a small domain for mask-based checks.
struct SmallPoset {
    n: usize,
    covers: Vec<Vec<usize>>,
}

impl SmallPoset {
    fn new(dom: &Domain) -> Self {
        let covers = (0..dom.size()).map(|x| dom.lower_covers(x).collect()).collect();
        SmallPoset { n: dom.size(), covers }
    }

    /// Longest alternating chain of the function encoded by `mask`, stopping early past `cap`.
    fn longest(&self, mask: u32, cap: usize) -> usize {
        let mut best = [[0u8; BRUTE_FORCE_LIMIT]; 2];
        let mut top = 0u8;
        for x in 0..self.n {
            let mut below = [0u8; 2];
            for &c in &self.covers[x] {
                below[0] = below[0].max(best[0][c]);
                below[1] = below[1].max(best[1][c]);
            }
            let v = ((mask >> x) & 1) as usize;
            let l = if v == 1 {
                1 + below[0]
            } else if below[1] > 0 {
                1 + below[1]
            } else {
                0
            };
            best[0][x] = below[0];
            best[1][x] = below[1];
            best[v][x] = best[v][x].max(l);
            top = top.max(l);
            if top as usize > cap {
                return top as usize;
            }
        }
        top as usize
    }
}

/// Exact distance by enumerating flip sets in order of increasing size.
///
/// The first size admitting a k-monotone result is the minimum vertex cover of the
/// violation hypergraph.
pub fn exact_distance_bruteforce(f: &dyn BoolFn, k: usize) -> Result<DistanceValue> {
    let (flips, _) = closest_k_monotone_bruteforce(f, k)?;
    Ok(DistanceValue::exact(flips as u64, f.domain().size() as u64))
}

/// A minimum flip set found by exhaustive search (mask of flipped points).
pub fn closest_k_monotone_bruteforce(f: &dyn BoolFn, k: usize) -> Result<(usize, u32)> {
    let dom = f.domain();
    check_k(k)?;
    let n = dom.size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(KmtError::budget("brute-force distance", n, BRUTE_FORCE_LIMIT));
    }
    let poset = SmallPoset::new(dom);
    let base: u32 = (0..n).filter(|&i| f.value(i)).fold(0, |m, i| m | (1 << i));
    let full: u64 = (1u64 << n) - 1;
    for r in 0..=n {
        if r == 0 {
            if poset.longest(base, k) <= k {
                return Ok((0, 0));
            }
            continue;
        }
        // Gosper's hack over r-subsets of n bits.
        let mut s: u64 = (1u64 << r) - 1;
        while s <= full {
            if poset.longest(base ^ s as u32, k) <= k {
                return Ok((r, s as u32));
            }
            let c = s & s.wrapping_neg();
            let rr = s + c;
            s = (((rr ^ s) >> 2) / c) | rr;
        }
    }
    unreachable!("flipping every 1 to 0 always yields a k-monotone function")
}

/// Exact distance with the cheapest applicable engine: the line DP, the minimum
/// cut for `k = 1`, or brute force on tiny domains.
pub fn exact_distance(f: &dyn BoolFn, k: usize) -> Result<DistanceValue> {
    check_k(k)?;
    let dom = f.domain();
    if dom.is_line() {
        exact_distance_line_dp(f, k)
    } else if k == 1 {
        flow::distance_to_monotone(f)
    } else {
        exact_distance_bruteforce(f, k)
    }
}
