//! One-sided non-adaptive tester on the line.
//!
//! The line is cut into `K = ceil(50k/eps)` blocks and both endpoints of every block
//! are read. A block whose endpoints agree gets that value, any other block is a
//! changepoint block and is read as 0; call the result `g~`. If `g~` already has a
//! violation the tester rejects. Otherwise it reads a Poisson number of uniform
//! samples and rejects once samples disagreeing with `g~` turn up in `k + 1`
//! different blocks, which a k-monotone `f` (at most `k` value changes) cannot do.
//!
//! Every rejection comes with a violating chain among the points that were read.

use kmt_core::chain::PartialChainSearch;
use kmt_core::coarsen::{coarsen_endpoint_line, Cell};
use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::rng::seeded;
use kmt_core::table::TruthTable;
use kmt_core::{find_violation, is_k_monotone, KmtError, Result, Verdict};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

/// Parameters of [`test_line_one_sided`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSidedParams {
    pub k: usize,
    pub eps: f64,
    /// Block multiplier: `K = ceil(block_mult * k / eps)`.
    pub block_mult: f64,
    /// Sample multiplier: the Poisson mean is `sample_mult * k / eps`.
    pub sample_mult: f64,
    /// Read `f` entirely when `eps <= full_read_mult * k / n`.
    pub full_read_mult: f64,
}

impl OneSidedParams {
    pub fn new(k: usize, eps: f64) -> Self {
        OneSidedParams { k, eps, block_mult: 50.0, sample_mult: 30.0, full_read_mult: 100.0 }
    }

    /// Number of endpoint blocks.
    pub fn blocks(&self) -> usize {
        (self.block_mult * self.k as f64 / self.eps).ceil() as usize
    }

    /// Poisson mean of the sample count.
    pub fn mean_samples(&self) -> f64 {
        self.sample_mult * self.k as f64 / self.eps
    }

    /// Worst-case query count on a line of length `n`.
    pub fn max_queries(&self, n: usize) -> u64 {
        if self.reads_everything(n) {
            n as u64
        } else {
            2 * self.blocks() as u64 + (2.0 * self.mean_samples()).floor() as u64
        }
    }

    fn reads_everything(&self, n: usize) -> bool {
        self.eps <= self.full_read_mult * self.k as f64 / n as f64
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(KmtError::InvalidParameter("k must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(KmtError::InvalidParameter(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        Ok(())
    }
}

/// Runs the one-sided tester on a line function.
///
/// k-monotone inputs are always accepted. Rejections carry a violating chain.
pub fn test_line_one_sided(f: &dyn BoolFn, params: &OneSidedParams, seed: u64) -> Result<Verdict> {
    params.validate()?;
    let dom = f.domain();
    if !dom.is_line() {
        return Err(KmtError::PreconditionViolated(format!("line tester got domain {dom}")));
    }
    let n = dom.size();
    let k = params.k;
    let oracle = Oracle::new(f);

    if params.reads_everything(n) {
        let table = TruthTable::from_fn(dom.clone(), |i| oracle.query(i));
        let verdict = match find_violation(&table, k)? {
            Some(chain) => Verdict::reject(oracle.queries(), seed).with_reason("full-read").with_witness(chain),
            None => Verdict::accept(oracle.queries(), seed).with_reason("full-read"),
        };
        return Ok(verdict);
    }

    let coarse = coarsen_endpoint_line(&oracle, params.blocks())?;
    let mut seen: Vec<Option<bool>> = vec![None; n];
    for &(i, v) in &coarse.endpoints {
        seen[i] = Some(v);
    }
    let tilde = coarse.tilde();
    if !is_k_monotone(&tilde, k)? {
        return Ok(reject_with_witness(&oracle, &seen, k, seed, "coarse-violation"));
    }

    let mut rng = seeded(seed);
    let mean = params.mean_samples();
    let draw = Poisson::new(mean).expect("positive Poisson mean").sample(&mut rng);
    if draw > 2.0 * mean {
        return Ok(Verdict::accept(oracle.queries(), seed).with_reason("poisson-overflow"));
    }
    let mut giveaway_block = vec![false; coarse.cells.len()];
    let mut giveaway_blocks = 0usize;
    for _ in 0..draw as u64 {
        let s = rng.random_range(0..n);
        let v = oracle.query(s);
        seen[s] = Some(v);
        let b = coarse.blocks.block_of(s);
        let expected = coarse.cells[b] == Cell::One;
        if v != expected && !giveaway_block[b] {
            giveaway_block[b] = true;
            giveaway_blocks += 1;
        }
    }
    if giveaway_blocks > k {
        return Ok(reject_with_witness(&oracle, &seen, k, seed, "giveaways"));
    }
    Ok(Verdict::accept(oracle.queries(), seed))
}

fn reject_with_witness(oracle: &Oracle<'_>, seen: &[Option<bool>], k: usize, seed: u64, reason: &str) -> Verdict {
    let chain = PartialChainSearch::find_violation(oracle.domain(), seen, k)
        .expect("both rejection rules imply a violation among the points read");
    Verdict::reject(oracle.queries(), seed).with_reason(reason).with_witness(chain)
}
