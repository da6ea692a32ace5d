//! Two-sided tester on the line whose query count does not grow with `k`.
//!
//! Pipeline, for `m = ceil(4k/eps)` blocks:
//!
//! 1. Sample blocks and look for variable ones (minority fraction at least
//!    `eps/100`). Too many of them means `f` is far from its block majority and
//!    cannot be k-monotone: reject.
//! 2. Simulate `g: [m] -> {0,1}`, the block majority of `f`, one value at a time
//!    by a majority vote over uniform reads inside the block.
//! 3. Estimate the number of constant intervals of `g` with the capped inverse-mass
//!    estimator and accept iff the estimate is at most `k + 1 + eps*k/8`.
//!
//! Values of `g` are memoized, but every interval evaluation is charged as if the
//! reads were simulated afresh: `reads * r_g` queries, where `r_g` is the number of
//! reads behind one simulated value. The count charged therefore matches the
//! non-memoized algorithm and depends on `eps` only.

use kmt_core::coarsen::{variable_block_fraction_test, BlockMap, VariableBlockPlan, VariableBlocks};
use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::rng::{seeded, split};
use kmt_core::{KmtError, Result, Verdict};
use serde::{Deserialize, Serialize};

use crate::dual::{CachedDual, DualAccess};
use crate::one_sided::{test_line_one_sided, OneSidedParams};
use crate::support::support_size_estimate;

/// Parameters of [`test_line_two_sided`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedParams {
    pub k: usize,
    pub eps: f64,
    /// Hand small `k` (at most `20/eps`) to the one-sided tester.
    pub delegate: bool,
    /// Sampled blocks in the variable-block stage are `ceil(c_blocks / eps)`.
    pub c_blocks: f64,
    /// Estimator samples; `None` means `ceil(1.5 / eps'^2)` with `eps' = eps^2 / 80`.
    pub samples: Option<usize>,
}

impl TwoSidedParams {
    pub fn new(k: usize, eps: f64) -> Self {
        TwoSidedParams { k, eps, delegate: true, c_blocks: 850.0, samples: None }
    }

    /// Same parameters with delegation turned off.
    pub fn without_delegation(mut self) -> Self {
        self.delegate = false;
        self
    }

    /// Number of blocks `m`, at most `n`.
    pub fn blocks(&self, n: usize) -> usize {
        ((4.0 * self.k as f64 / self.eps).ceil() as usize).clamp(1, n)
    }

    /// Capped-evaluation window `20C/eps` with `C = 4/eps`.
    pub fn cap(&self) -> usize {
        (80.0 / (self.eps * self.eps)).ceil() as usize
    }

    /// Estimator accuracy `eps' = eps / (20C)`, giving additive error `eps*k/20`.
    pub fn eps_prime(&self) -> f64 {
        self.eps * self.eps / 80.0
    }

    /// Estimator sample count.
    pub fn estimator_samples(&self) -> usize {
        self.samples.unwrap_or_else(|| crate::support::estimator_samples(self.eps_prime()))
    }

    /// Reads behind one simulated value of `g`: `ceil((4/eps) ln(10 q))` with `q` the
    /// largest number of `g` values the estimator can request.
    pub fn reads_per_value(&self) -> usize {
        let q = self.estimator_samples() as f64 * (2 * self.cap() + 1) as f64;
        ((4.0 / self.eps) * (10.0 * q).ln()).ceil() as usize
    }

    /// Acceptance threshold on the support estimate.
    pub fn threshold(&self) -> f64 {
        self.k as f64 + 1.0 + self.eps * self.k as f64 / 8.0
    }

    fn delegates(&self) -> bool {
        self.delegate && (self.k as f64) <= 20.0 / self.eps
    }
}

/// Runs the two-sided tester on a line function.
pub fn test_line_two_sided(f: &dyn BoolFn, params: &TwoSidedParams, seed: u64) -> Result<Verdict> {
    OneSidedParams::new(params.k, params.eps).validate()?;
    let dom = f.domain();
    if !dom.is_line() {
        return Err(KmtError::PreconditionViolated(format!("line tester got domain {dom}")));
    }
    if params.delegates() {
        let v = test_line_one_sided(f, &OneSidedParams::new(params.k, params.eps), seed)?;
        let reason = v.reason.clone().map_or("delegated".to_string(), |r| format!("delegated:{r}"));
        return Ok(v.with_reason(reason));
    }
    let n = dom.size();
    let m = params.blocks(n);
    let oracle = Oracle::new(f);
    let bm = BlockMap::new(dom, m)?;

    if m < n {
        let plan = VariableBlockPlan::new(params.eps, params.c_blocks);
        let mut rng = seeded(split(seed, 1));
        let (verdict, _) = variable_block_fraction_test(&oracle, &bm, &plan, &mut rng);
        if verdict == VariableBlocks::Many {
            return Ok(Verdict::reject(oracle.queries(), seed).with_reason("variable-blocks"));
        }
    }

    let stage1 = oracle.queries();
    let r_g = if m < n { params.reads_per_value() } else { 1 };
    let mut g_rng = seeded(split(seed, 2));
    let mut est_rng = seeded(split(seed, 3));
    let mut majority = |b: usize| {
        if r_g == 1 {
            return oracle.query(bm.block_min(b));
        }
        let mut ones = 0usize;
        for _ in 0..r_g {
            ones += oracle.query(bm.sample_in_block(b, &mut g_rng)) as usize;
        }
        2 * ones > r_g
    };
    let mut dual = CachedDual::new(m, r_g as u64, &mut majority);
    let est = support_size_estimate(&mut dual, params.eps_prime(), Some(params.cap()), params.samples, &mut est_rng);
    let queries = stage1 + dual.queries();
    let reason = format!("support-estimate={:.3}", est.estimate);
    Ok(if est.estimate <= params.threshold() {
        Verdict::accept(queries, seed).with_reason(reason)
    } else {
        Verdict::reject(queries, seed).with_reason(reason)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmt_core::table::TruthTable;
    use kmt_core::{exact_distance_line_dp, is_k_monotone, Domain};

    fn evenly_cut(n: usize, pieces: usize) -> TruthTable {
        TruthTable::from_fn(Domain::line(n), |i| (i * pieces / n) % 2 == 1)
    }

    #[test]
    fn parameter_arithmetic() {
        let p = TwoSidedParams::new(40, 0.2);
        assert_eq!(p.blocks(20_000), 800);
        assert_eq!(p.cap(), 2000);
        assert_eq!(p.estimator_samples(), 6_000_000);
        assert!((p.threshold() - 42.0).abs() < 1e-12);
        assert!(p.delegates());
        assert!(!TwoSidedParams::new(101, 0.2).delegates());
        assert!(!TwoSidedParams::new(10, 0.2).without_delegation().delegates());
    }

    #[test]
    fn accepts_staircases() {
        let f = evenly_cut(20_000, 41);
        assert!(is_k_monotone(&f, 40).unwrap());
        let p = TwoSidedParams { samples: Some(200_000), ..TwoSidedParams::new(40, 0.2).without_delegation() };
        for seed in 0..5 {
            let v = test_line_two_sided(&f, &p, seed).unwrap();
            assert!(v.accepted(), "{v:?}");
        }
    }

    #[test]
    fn rejects_far_functions() {
        let f = evenly_cut(20_000, 80);
        let d = exact_distance_line_dp(&f, 40).unwrap();
        assert!(d.as_f64() >= 0.2);
        let p = TwoSidedParams { samples: Some(200_000), ..TwoSidedParams::new(40, 0.2).without_delegation() };
        for seed in 0..5 {
            assert!(test_line_two_sided(&f, &p, seed).unwrap().rejected());
        }
    }

    #[test]
    fn charged_queries_do_not_track_k() {
        let count = |k: usize| {
            let f = evenly_cut(20_000, k + 1);
            let p = TwoSidedParams { samples: Some(100_000), ..TwoSidedParams::new(k, 0.2).without_delegation() };
            test_line_two_sided(&f, &p, 9).unwrap().queries as f64
        };
        let (a, b) = (count(10), count(40));
        assert!((a - b).abs() / b < 0.1, "{a} vs {b}");
    }

    #[test]
    fn small_k_delegates() {
        let f = evenly_cut(5000, 3);
        let v = test_line_two_sided(&f, &TwoSidedParams::new(2, 0.2), 0).unwrap();
        assert!(v.accepted());
        assert!(v.reason.unwrap().starts_with("delegated"));
    }
}
