//! Fully tolerant tester on `[n]^d` through block label estimates.
//!
//! With `alpha = eps2 - eps1`, the grid is cut into `m = ceil(5kd / alpha)` blocks per
//! axis (fewer on an axis shorter than `m`, which then has one block per point) and `t = ceil(25 ln(6 m^d) / (2 alpha^2))` uniform points are read in every
//! block, with replacement. The tester accepts iff some k-monotone function of the
//! blocks disagrees with the sampled labels on at most `eps1 + alpha/2` of the
//! induced distribution over `[n]^d x {0,1}`.

use kmt_core::coarsen::BlockMap;
use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::rng::seeded;
use kmt_core::{Domain, KmtError, Result, TruthTable, Verdict};
use serde::{Deserialize, Serialize};

use crate::enumerate::{min_cost_k_monotone, FILTER_LIMIT};

/// `ceil(x)` that ignores floating-point dust just above an integer.
pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Block partition with `min(m, side)` blocks on every axis.
///
/// Rectangular grids `[n_1] x ... x [n_d]` are accepted, which the L1 reduction needs
/// for its extra threshold axis.
pub(crate) fn clamped_blocks(dom: &Domain, m: usize) -> Result<BlockMap> {
    BlockMap::with_axes(dom, dom.dims().iter().map(|&n| m.min(n)).collect())
}

pub(crate) fn check_eps(k: usize, eps1: f64, eps2: f64) -> Result<()> {
    if k == 0 {
        return Err(KmtError::InvalidParameter("k must be at least 1".into()));
    }
    if !(0.0 <= eps1 && eps1 < eps2 && eps2 <= 1.0) {
        return Err(KmtError::InvalidParameter(format!("need 0 <= eps1 < eps2 <= 1, got {eps1}, {eps2}")));
    }
    Ok(())
}

/// Parameters of [`tolerant_test_full`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullParams {
    pub k: usize,
    pub eps1: f64,
    pub eps2: f64,
}

impl FullParams {
    pub fn new(k: usize, eps1: f64, eps2: f64) -> Self {
        FullParams { k, eps1, eps2 }
    }

    pub fn alpha(&self) -> f64 {
        self.eps2 - self.eps1
    }

    /// Blocks per axis before clamping to the side length.
    pub fn blocks(&self, d: usize) -> usize {
        ceil_tol(5.0 * (self.k * d) as f64 / self.alpha())
    }

    /// Points read per block for `blocks` blocks in total.
    pub fn samples_per_block(&self, blocks: usize) -> usize {
        let a = self.alpha();
        ceil_tol(25.0 * (6.0 * blocks as f64).ln() / (2.0 * a * a))
    }

    /// Acceptance threshold `eps1 + alpha/2`.
    pub fn threshold(&self) -> f64 {
        self.eps1 + self.alpha() / 2.0
    }
}

/// Sampled label frequencies per block.
///
/// `D(x, b)` is the fraction of the `t` reads in block `x` that returned `b`, divided
/// by the number of blocks. The induced distribution on `[n]^d x {0,1}` spreads the
/// mass of block `x` over its points and scales it by the block's share of the grid,
/// which is `1 / m^d` exactly when `m` divides `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockLabelDistribution {
    pub block_domain: Domain,
    /// Reads per block.
    pub t: usize,
    /// Reads that returned 1, per block.
    pub ones: Vec<u64>,
    /// Points of the fine grid in each block.
    pub block_sizes: Vec<u64>,
}

impl BlockLabelDistribution {
    /// Reads `t` uniform points of every block.
    pub fn sample(oracle: &Oracle<'_>, bm: &BlockMap, t: usize, seed: u64) -> Self {
        let mut rng = seeded(seed);
        let blocks = bm.num_blocks();
        let ones = (0..blocks)
            .map(|b| (0..t).filter(|_| oracle.query(bm.sample_in_block(b, &mut rng))).count() as u64)
            .collect();
        let block_sizes = (0..blocks).map(|b| bm.block_size(b) as u64).collect();
        BlockLabelDistribution { block_domain: bm.block_domain().clone(), t, ones, block_sizes }
    }

    /// `D(x, b)`.
    pub fn d(&self, x: usize, b: bool) -> f64 {
        let c = if b { self.ones[x] } else { self.t as u64 - self.ones[x] };
        c as f64 / self.t as f64 / self.ones.len() as f64
    }

    /// Costs of the values 0 and 1 per block, as numerators over [`Self::denominator`].
    pub fn costs(&self) -> (Vec<u64>, Vec<u64>) {
        let t = self.t as u64;
        let cost0 = self.ones.iter().zip(&self.block_sizes).map(|(&o, &w)| w * o).collect();
        let cost1 = self.ones.iter().zip(&self.block_sizes).map(|(&o, &w)| w * (t - o)).collect();
        (cost0, cost1)
    }

    /// `t` times the size of the fine grid.
    pub fn denominator(&self) -> u64 {
        self.t as u64 * self.block_sizes.iter().sum::<u64>()
    }

    /// Mass of the induced distribution on which the block function `h` is wrong.
    pub fn error_of(&self, h: &TruthTable) -> f64 {
        let (c0, c1) = self.costs();
        let num: u64 = (0..self.ones.len()).map(|x| if h.get(x) { c1[x] } else { c0[x] }).sum();
        num as f64 / self.denominator() as f64
    }
}

/// Outcome of [`run_full`] with the quantities behind the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRun {
    pub verdict: Verdict,
    /// Blocks on each axis after clamping to the side lengths.
    pub blocks_per_axis: Vec<usize>,
    pub samples_per_block: usize,
    pub distribution: BlockLabelDistribution,
    /// The best k-monotone block function and its error under the induced distribution.
    pub best: TruthTable,
    pub best_error: f64,
    pub threshold: f64,
}

/// Runs the block-estimation tester and keeps the intermediate results.
pub fn run_full(f: &dyn BoolFn, params: &FullParams, seed: u64) -> Result<FullRun> {
    check_eps(params.k, params.eps1, params.eps2)?;
    let dom = f.domain();
    let bm = clamped_blocks(dom, params.blocks(dom.d()))?;
    let blocks_per_axis = bm.block_domain().dims().to_vec();
    if params.k > 1 && blocks_per_axis.len() > 1 && bm.num_blocks() > FILTER_LIMIT {
        return Err(KmtError::budget("block function enumeration", bm.num_blocks(), FILTER_LIMIT));
    }
    let t = params.samples_per_block(bm.num_blocks());
    let oracle = Oracle::new(f);
    let dist = BlockLabelDistribution::sample(&oracle, &bm, t, seed);
    let (cost0, cost1) = dist.costs();
    let (cost, best) = min_cost_k_monotone(bm.block_domain(), &cost0, &cost1, params.k)?;
    let best_error = cost as f64 / dist.denominator() as f64;
    let threshold = params.threshold();
    let reason = format!("block-error={best_error:.4}");
    let verdict = if best_error <= threshold {
        Verdict::accept(oracle.queries(), seed)
    } else {
        Verdict::reject(oracle.queries(), seed)
    }
    .with_reason(reason);
    Ok(FullRun { verdict, blocks_per_axis, samples_per_block: t, distribution: dist, best, best_error, threshold })
}

/// Tolerant tester for k-monotonicity on a grid whose query count is `m^d t`.
pub fn tolerant_test_full(f: &dyn BoolFn, k: usize, eps1: f64, eps2: f64, seed: u64) -> Result<Verdict> {
    Ok(run_full(f, &FullParams::new(k, eps1, eps2), seed)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_derivation() {
        let p = FullParams::new(1, 0.0, 0.5);
        assert_eq!(p.alpha(), 0.5);
        assert_eq!(p.blocks(1), 10);
        assert_eq!(p.samples_per_block(10), 205);
        assert_eq!((25.0 * 60f64.ln() / 0.5).ceil() as usize, 205);
        let f = TruthTable::zeros(Domain::line(100));
        let v = tolerant_test_full(&f, 1, 0.0, 0.5, 3).unwrap();
        assert_eq!(v.queries, 2050);
        assert!(v.accepted());
    }

    #[test]
    fn line_parameters_at_two_tenths_tolerance() {
        let p = FullParams::new(2, 0.05, 0.45);
        assert_eq!(p.blocks(1), 25);
        let t = (25.0 * 150f64.ln() / (2.0 * 0.4 * 0.4)).ceil() as usize;
        assert_eq!(p.samples_per_block(25), t);
    }

    #[test]
    fn distribution_masses() {
        let f = TruthTable::from_fn(Domain::line(30), |i| i % 3 == 0);
        let bm = BlockMap::new(f.domain(), 4).unwrap();
        let o = Oracle::new(&f);
        let dist = BlockLabelDistribution::sample(&o, &bm, 50, 1);
        assert_eq!(o.queries(), 200);
        for x in 0..4 {
            assert!((dist.d(x, false) + dist.d(x, true) - 0.25).abs() < 1e-15);
        }
        let total: f64 = (0..4).map(|x| dist.d(x, false) + dist.d(x, true)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let zero = TruthTable::zeros(Domain::line(4));
        let one = TruthTable::constant(Domain::line(4), true);
        assert!((dist.error_of(&zero) + dist.error_of(&one) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_budget_off_the_line() {
        let f = TruthTable::zeros(Domain::grid(40, 2));
        assert!(matches!(tolerant_test_full(&f, 2, 0.0, 0.9, 0), Err(KmtError::BudgetExceeded { .. })));
        assert!(tolerant_test_full(&f, 1, 0.0, 0.9, 0).unwrap().accepted());
        assert!(tolerant_test_full(&f, 1, 0.4, 0.3, 0).is_err());
    }

    #[test]
    fn small_grid_uses_every_point() {
        // 5kd/alpha = 20 blocks per axis exceed the side 4, so each point is a block.
        let f = TruthTable::from_fn(Domain::grid(4, 2), |x| x % 4 >= 2);
        let run = run_full(&f, &FullParams::new(1, 0.0, 0.5), 0).unwrap();
        assert_eq!(run.blocks_per_axis, vec![4, 4]);
        assert_eq!(run.best_error, 0.0);
        assert!(run.verdict.accepted());
    }

    #[test]
    fn rectangles_clamp_each_axis() {
        // 5 * 2 / 0.5 = 20 blocks per axis; the short axis keeps one block per point.
        let dom = Domain::rect(vec![60, 3]);
        let f = TruthTable::from_fn(dom.clone(), |x| dom.coord(x, 0) + 20 * dom.coord(x, 1) >= 40);
        let run = run_full(&f, &FullParams::new(1, 0.0, 0.5), 1).unwrap();
        assert_eq!(run.blocks_per_axis, vec![20, 3]);
        assert_eq!(run.verdict.queries as usize, 60 * run.samples_per_block);
        assert!(run.verdict.accepted());
    }
}
