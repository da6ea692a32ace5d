//! Block partitions of grids and the coarsened functions built on them.
//!
//! Along an axis of length `n` split into `m` blocks, coordinate `y` lies in block
//! `floor(y * m / n)`. Block `b` is the interval `[ceil(b n / m), ceil((b + 1) n / m))`,
//! so block sizes differ by at most one and every block is nonempty when `m <= n`.

use std::ops::Range;

use rand::Rng;

use crate::chain::is_k_monotone;
use crate::domain::Domain;
use crate::error::{KmtError, Result};
use crate::oracle::{BoolFn, Oracle};
use crate::table::TruthTable;

/// Partition of a grid into a product of per-axis intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    domain: Domain,
    blocks: Domain,
}

impl BlockMap {
    /// `m` blocks along every axis.
    pub fn new(domain: &Domain, m: usize) -> Result<Self> {
        Self::with_axes(domain, vec![m; domain.d()])
    }

    /// `m[i]` blocks along axis `i`.
    pub fn with_axes(domain: &Domain, m: Vec<usize>) -> Result<Self> {
        if m.len() != domain.d() {
            return Err(KmtError::InvalidParameter("one block count per axis".into()));
        }
        for (axis, (&mi, &ni)) in m.iter().zip(domain.dims()).enumerate() {
            if mi == 0 || mi > ni {
                return Err(KmtError::InvalidParameter(format!(
                    "axis {axis}: {mi} blocks do not fit into length {ni}"
                )));
            }
        }
        Ok(BlockMap { domain: domain.clone(), blocks: Domain::rect(m) })
    }

    /// The fine domain.
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// The domain of block indices, `[m_1] x ... x [m_d]`.
    pub fn block_domain(&self) -> &Domain {
        &self.blocks
    }

    /// Number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.size()
    }

    /// Block of coordinate `y` along `axis`.
    #[inline]
    pub fn axis_block(&self, axis: usize, y: usize) -> usize {
        y * self.blocks.dims()[axis] / self.domain.dims()[axis]
    }

    /// Coordinates covered by block `b` along `axis`.
    pub fn axis_range(&self, axis: usize, b: usize) -> Range<usize> {
        let n = self.domain.dims()[axis];
        let m = self.blocks.dims()[axis];
        (b * n).div_ceil(m)..((b + 1) * n).div_ceil(m)
    }

    /// Block index of a fine point index.
    pub fn block_of(&self, idx: usize) -> usize {
        let mut out = 0;
        for axis in 0..self.domain.d() {
            out += self.axis_block(axis, self.domain.coord(idx, axis)) * self.blocks.strides()[axis];
        }
        out
    }

    /// Number of fine points in block `b`.
    pub fn block_size(&self, b: usize) -> usize {
        (0..self.domain.d())
            .map(|axis| self.axis_range(axis, self.blocks.coord(b, axis)).len())
            .product()
    }

    /// Fine point indices of block `b` in index order.
    pub fn block_points(&self, b: usize) -> Vec<usize> {
        let ranges: Vec<Range<usize>> = (0..self.domain.d())
            .map(|axis| self.axis_range(axis, self.blocks.coord(b, axis)))
            .collect();
        let mut out = vec![0usize];
        for (axis, r) in ranges.iter().enumerate() {
            let stride = self.domain.strides()[axis];
            out = out
                .iter()
                .flat_map(|&base| r.clone().map(move |c| base + c * stride))
                .collect();
        }
        out.sort_unstable();
        out
    }

    /// The lowest fine point of block `b`.
    pub fn block_min(&self, b: usize) -> usize {
        (0..self.domain.d())
            .map(|axis| self.axis_range(axis, self.blocks.coord(b, axis)).start * self.domain.strides()[axis])
            .sum()
    }

    /// A uniform fine point of block `b`.
    pub fn sample_in_block<R: Rng + ?Sized>(&self, b: usize, rng: &mut R) -> usize {
        (0..self.domain.d())
            .map(|axis| {
                let r = self.axis_range(axis, self.blocks.coord(b, axis));
                rng.random_range(r) * self.domain.strides()[axis]
            })
            .sum()
    }

    /// Inflates a table on the block domain to the fine domain.
    pub fn inflate(&self, coarse: &TruthTable) -> TruthTable {
        assert_eq!(coarse.domain(), &self.blocks);
        TruthTable::from_fn(self.domain.clone(), |x| coarse.get(self.block_of(x)))
    }
}

/// Blockwise majority of `f` as a table on the block domain; ties go to 0.
pub fn coarsen_majority(f: &dyn BoolFn, bm: &BlockMap) -> TruthTable {
    assert_eq!(f.domain(), bm.domain());
    let mut ones = vec![0usize; bm.num_blocks()];
    for x in 0..f.domain().size() {
        if f.value(x) {
            ones[bm.block_of(x)] += 1;
        }
    }
    TruthTable::from_fn(bm.block_domain().clone(), |b| 2 * ones[b] > bm.block_size(b))
}

/// Value of a block under the endpoint rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    One,
    /// Endpoints disagree: the block contains a value change.
    Star,
}

impl Cell {
    /// The cell with `Star` read as 0.
    pub fn star_to_zero(self) -> bool {
        self == Cell::One
    }
}

/// Endpoint coarsening of a line function into `K` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointCoarsening {
    pub blocks: BlockMap,
    pub cells: Vec<Cell>,
    /// Queried endpoint values `(index, value)` in query order.
    pub endpoints: Vec<(usize, bool)>,
}

impl EndpointCoarsening {
    /// The companion function over `[K]` with every `Star` replaced by 0.
    pub fn tilde(&self) -> TruthTable {
        TruthTable::from_fn(self.blocks.block_domain().clone(), |b| self.cells[b].star_to_zero())
    }

    /// Number of `Star` blocks.
    pub fn stars(&self) -> usize {
        self.cells.iter().filter(|&&c| c == Cell::Star).count()
    }
}

/// Reads both endpoints of each of `K` blocks (one read for single-point blocks).
pub fn coarsen_endpoint_line(oracle: &Oracle<'_>, k_blocks: usize) -> Result<EndpointCoarsening> {
    let dom = oracle.domain().clone();
    if !dom.is_line() {
        return Err(KmtError::PreconditionViolated("endpoint coarsening needs a line".into()));
    }
    let blocks = BlockMap::new(&dom, k_blocks)?;
    let mut cells = Vec::with_capacity(k_blocks);
    let mut endpoints = Vec::with_capacity(2 * k_blocks);
    for b in 0..k_blocks {
        let r = blocks.axis_range(0, b);
        let lo = oracle.query(r.start);
        endpoints.push((r.start, lo));
        let hi = if r.len() == 1 {
            lo
        } else {
            let v = oracle.query(r.end - 1);
            endpoints.push((r.end - 1, v));
            v
        };
        cells.push(match (lo, hi) {
            (false, false) => Cell::Zero,
            (true, true) => Cell::One,
            _ => Cell::Star,
        });
    }
    Ok(EndpointCoarsening { blocks, cells, endpoints })
}

/// Exact number of blocks whose minority value covers at least a `threshold` fraction.
pub fn count_variable_blocks(f: &dyn BoolFn, bm: &BlockMap, threshold: f64) -> usize {
    let mut ones = vec![0usize; bm.num_blocks()];
    for x in 0..f.domain().size() {
        if f.value(x) {
            ones[bm.block_of(x)] += 1;
        }
    }
    (0..bm.num_blocks())
        .filter(|&b| {
            let size = bm.block_size(b);
            let minority = ones[b].min(size - ones[b]);
            minority > 0 && minority as f64 >= threshold * size as f64
        })
        .count()
}

/// Exact number of blocks on which `f` is not constant.
pub fn count_nonconstant_blocks(f: &dyn BoolFn, bm: &BlockMap) -> usize {
    (0..bm.num_blocks())
        .filter(|&b| {
            let pts = bm.block_points(b);
            let v = f.value(pts[0]);
            pts.iter().any(|&p| f.value(p) != v)
        })
        .count()
}

/// Outcome of the variable-block fraction test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableBlocks {
    /// Consistent with at most `k` variable blocks.
    AtMostK,
    /// More than `5k/4` variable blocks.
    Many,
}

/// Sampling plan of the variable-block test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableBlockPlan {
    /// Blocks drawn uniformly with replacement.
    pub blocks: usize,
    /// Uniform in-block reads per drawn block (stops early once both values appear).
    pub per_block: usize,
    /// Flag more than this many sampled blocks to answer [`VariableBlocks::Many`].
    pub threshold: f64,
}

impl VariableBlockPlan {
    /// Plan for `m = 4k/eps` blocks: `ceil(c_blocks / eps)` sampled blocks, per-block
    /// miss probability `1 / (20 q)` for blocks whose minority is an `eps/100` fraction,
    /// and the threshold halfway between the `eps/4` and `5 eps/16` flagged fractions.
    pub fn new(eps: f64, c_blocks: f64) -> Self {
        let blocks = (c_blocks / eps).ceil() as usize;
        let miss = 1.0 / (20.0 * blocks as f64);
        let per_block = ((100.0 / eps) * (1.0 / miss).ln()).ceil() as usize;
        VariableBlockPlan { blocks, per_block, threshold: blocks as f64 * 9.0 * eps / 32.0 }
    }
}

/// Distinguishes "at most k nonconstant blocks" from "more than 5k/4 variable blocks"
/// by sampling blocks and flagging those in which both values are seen.
pub fn variable_block_fraction_test<R: Rng + ?Sized>(
    oracle: &Oracle<'_>,
    bm: &BlockMap,
    plan: &VariableBlockPlan,
    rng: &mut R,
) -> (VariableBlocks, usize) {
    let mut flagged = 0usize;
    for _ in 0..plan.blocks {
        let b = rng.random_range(0..bm.num_blocks());
        let first = oracle.query(bm.sample_in_block(b, rng));
        for _ in 1..plan.per_block {
            if oracle.query(bm.sample_in_block(b, rng)) != first {
                flagged += 1;
                break;
            }
        }
    }
    let verdict = if flagged as f64 > plan.threshold { VariableBlocks::Many } else { VariableBlocks::AtMostK };
    (verdict, flagged)
}

/// Checks `dist(f, majority coarsening) < k d / m` for a k-monotone `f`.
pub fn check_coarsening_lemma(f: &dyn BoolFn, k: usize, m: usize) -> Result<bool> {
    if !is_k_monotone(f, k)? {
        return Err(KmtError::PreconditionViolated(format!("input is not {k}-monotone")));
    }
    let bm = BlockMap::new(f.domain(), m)?;
    let coarse = coarsen_majority(f, &bm);
    let fm = bm.inflate(&coarse);
    let t = TruthTable::tabulate(f);
    let d = f.domain().d();
    // dist < kd/m  <=>  flips * m < k * d * N
    Ok(fm.hamming(&t) * m < k * d * f.domain().size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn balanced_blocks_partition() {
        for (n, m) in [(10, 4), (9, 4), (16, 4), (7, 7), (5, 1)] {
            let bm = BlockMap::new(&Domain::line(n), m).unwrap();
            let mut covered = vec![0; n];
            for b in 0..m {
                let r = bm.axis_range(0, b);
                assert!(!r.is_empty());
                for y in r {
                    assert_eq!(bm.axis_block(0, y), b);
                    covered[y] += 1;
                }
            }
            assert!(covered.iter().all(|&c| c == 1));
        }
        let bm = BlockMap::new(&Domain::grid(6, 2), 3).unwrap();
        let total: usize = (0..9).map(|b| bm.block_size(b)).sum();
        assert_eq!(total, 36);
        for b in 0..9 {
            let pts = bm.block_points(b);
            assert_eq!(pts.len(), 4);
            assert!(pts.iter().all(|&p| bm.block_of(p) == b));
            assert_eq!(bm.block_min(b), pts[0]);
        }
    }

    #[test]
    fn majority_examples() {
        let f = TruthTable::line_from_bits(&[1, 1, 1, 0, 0, 0, 0, 1]);
        let bm = BlockMap::new(f.domain(), 2).unwrap();
        assert_eq!(coarsen_majority(&f, &bm).to_bools(), vec![true, false]);
        let tie = TruthTable::line_from_bits(&[1, 0, 0, 1]);
        let bm = BlockMap::new(tie.domain(), 2).unwrap();
        assert_eq!(coarsen_majority(&tie, &bm).to_bools(), vec![false, false]);
    }

    #[test]
    fn majority_is_the_best_block_function() {
        let dom = Domain::grid(4, 2);
        let bm = BlockMap::new(&dom, 2).unwrap();
        let mut rng = seeded(3);
        for _ in 0..50 {
            let f = TruthTable::from_fn(dom.clone(), |_| rng.random_bool(0.5));
            let best = bm.inflate(&coarsen_majority(&f, &bm)).hamming(&f);
            for mask in 0..16u64 {
                let h = bm.inflate(&TruthTable::from_mask(bm.block_domain().clone(), mask));
                assert!(best <= h.hamming(&f));
            }
        }
    }

    #[test]
    fn endpoint_examples() {
        let f = TruthTable::line_from_bits(&[1, 1, 0, 0]);
        let o = Oracle::new(&f);
        let c = coarsen_endpoint_line(&o, 2).unwrap();
        assert_eq!(c.cells, vec![Cell::One, Cell::Zero]);
        assert_eq!(o.queries(), 4);
        let f = TruthTable::line_from_bits(&[1, 0, 1, 1]);
        let o = Oracle::new(&f);
        let c = coarsen_endpoint_line(&o, 2).unwrap();
        assert_eq!(c.cells, vec![Cell::Star, Cell::One]);
        assert_eq!(c.tilde().to_bools(), vec![false, true]);
    }

    #[test]
    fn coarsening_lemma_small_cases() {
        let f = TruthTable::from_fn(Domain::line(16), |i| i >= 5);
        assert!(check_coarsening_lemma(&f, 1, 4).unwrap());
        let bad = TruthTable::line_from_bits(&[1, 0]);
        assert!(check_coarsening_lemma(&bad, 1, 1).is_err());
    }

    #[test]
    fn variable_blocks_counting() {
        let f = TruthTable::line_from_bits(&[0, 0, 0, 1, 1, 1, 1, 0]);
        let bm = BlockMap::new(f.domain(), 2).unwrap();
        assert_eq!(count_nonconstant_blocks(&f, &bm), 2);
        assert_eq!(count_variable_blocks(&f, &bm, 0.3), 0);
        assert_eq!(count_variable_blocks(&f, &bm, 0.25), 2);
    }

    #[test]
    fn constant_blocks_never_flag() {
        let f = TruthTable::from_fn(Domain::line(1000), |i| (i / 100) % 2 == 0);
        let bm = BlockMap::new(f.domain(), 10).unwrap();
        let plan = VariableBlockPlan { blocks: 200, per_block: 20, threshold: 0.0 };
        let o = Oracle::new(&f);
        let (v, flagged) = variable_block_fraction_test(&o, &bm, &plan, &mut seeded(1));
        assert_eq!((v, flagged), (VariableBlocks::AtMostK, 0));
        assert_eq!(o.queries(), 200 * 20);
    }
}
