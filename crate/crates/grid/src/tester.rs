//! The two-sided adaptive tester for 2-monotonicity on `[n]^2`.
//!
//! 1. Initialize [`RingG`] (anchor columns of `g~`).
//! 2. Sample columns and test both resolved changepoint sequences of `g~`, divided by
//!    `n + 2`, for being non-increasing in L1 distance with parameter `eps / 64`.
//! 3. Sample points and compare `f` with `g~`: accept iff the mismatch count stays at
//!    most `floor(3 eps t / 16)` out of `t` samples, where `t` is the smallest count
//!    separating mismatch rates `eps / 8` and `eps / 4` with error at most `1/6`
//!    on each side (exact binomial tails).
//!
//! All reads of `f` are memoized and capped at `ceil(c0 / eps)`; hitting the cap
//! rejects. Grids with `n < 16 / eps` are read in full and decided exactly.

use kmt_core::isotonic::Direction;
use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::rng::{seeded, split};
use kmt_core::{is_k_monotone, DomainKind, KmtError, Result, TruthTable, Verdict};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::changepoints::grid_shape;
use crate::l1::{sampled_l1_distance, L1SubtesterParams};
use crate::ring::RingG;

/// Parameters of [`test_grid2_2monotone`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2Params {
    pub eps: f64,
    /// Sample constant of the L1 stage.
    pub c1: f64,
    /// Failure probability allotted to each stage.
    pub delta: f64,
    /// Query cap constant: at most `ceil(c0 / eps)` reads of `f`.
    pub c0: f64,
}

impl Grid2Params {
    pub fn new(eps: f64) -> Self {
        Grid2Params { eps, c1: 4.0, delta: 1.0 / 6.0, c0: 50_000.0 }
    }

    /// Parameters of the L1 stage, at `eps / 64`.
    pub fn l1(&self) -> L1SubtesterParams {
        L1SubtesterParams { eps: self.eps / 64.0, delta: self.delta, c1: self.c1 }
    }

    /// Samples `t` and mismatch threshold of the distance stage.
    pub fn distance_plan(&self) -> (usize, usize) {
        let (p_close, p_far) = (self.eps / 8.0, self.eps / 4.0);
        let mut t = 1usize;
        loop {
            let tau = (3.0 * self.eps * t as f64 / 16.0).floor() as usize;
            let above_close = 1.0 - binomial_cdf(t, p_close, tau);
            let at_most_far = binomial_cdf(t, p_far, tau);
            if above_close <= self.delta && at_most_far <= self.delta {
                return (t, tau);
            }
            t += 1;
        }
    }

    pub fn cap(&self) -> u64 {
        (self.c0 / self.eps).ceil() as u64
    }

    fn validate(&self) -> Result<()> {
        self.l1().validate()?;
        if !(self.c0 > 0.0) {
            return Err(KmtError::InvalidParameter(format!("c0 must be positive, got {}", self.c0)));
        }
        Ok(())
    }
}

/// `P[Bin(t, p) <= x]`.
fn binomial_cdf(t: usize, p: f64, x: usize) -> f64 {
    let mut pmf = (1.0 - p).powi(t as i32);
    let mut cdf = pmf;
    for i in 0..x.min(t) {
        pmf *= (t - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
        cdf += pmf;
    }
    cdf.min(1.0)
}

/// A run of the grid tester with its query transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid2Run {
    pub verdict: Verdict,
    /// Points of `f` in the order they were first read.
    pub transcript: Vec<usize>,
}

/// Runs the tester and returns the verdict.
pub fn test_grid2_2monotone(f: &dyn BoolFn, params: &Grid2Params, seed: u64) -> Result<Verdict> {
    Ok(run_grid2(f, params, seed)?.verdict)
}

/// Runs the tester and keeps the transcript.
pub fn run_grid2(f: &dyn BoolFn, params: &Grid2Params, seed: u64) -> Result<Grid2Run> {
    params.validate()?;
    let dom = f.domain();
    let (n, cols) = grid_shape(dom)?;
    if dom.kind() != DomainKind::Grid || n != cols {
        return Err(KmtError::PreconditionViolated(format!("grid tester needs [n]^2, got {dom}")));
    }
    if (n as f64) < 16.0 / params.eps {
        let oracle = Oracle::new(f);
        let table = TruthTable::from_fn(dom.clone(), |p| oracle.query(p));
        let ok = is_k_monotone(&table, 2)?;
        let v = if ok { Verdict::accept(oracle.queries(), seed) } else { Verdict::reject(oracle.queries(), seed) };
        return Ok(Grid2Run { verdict: v.with_reason("full-read"), transcript: (0..dom.size()).collect() });
    }

    let mut ring = match RingG::new(f, params.eps, params.cap()) {
        Ok(r) => r,
        Err(KmtError::QueryBudgetExceeded { used, .. }) => {
            return Ok(Grid2Run { verdict: Verdict::reject(used, seed).with_reason("query-cap"), transcript: Vec::new() });
        }
        Err(e) => return Err(e),
    };
    let outcome = stages(&mut ring, n, params, seed);
    let verdict = match outcome {
        Ok((accept, reason)) => {
            let v = if accept { Verdict::accept(ring.queries(), seed) } else { Verdict::reject(ring.queries(), seed) };
            v.with_reason(reason)
        }
        Err(KmtError::QueryBudgetExceeded { .. }) => Verdict::reject(ring.queries(), seed).with_reason("query-cap"),
        Err(e) => return Err(e),
    };
    Ok(Grid2Run { verdict, transcript: ring.transcript().to_vec() })
}

fn stages(ring: &mut RingG<'_>, n: usize, params: &Grid2Params, seed: u64) -> Result<(bool, String)> {
    let l1 = params.l1();
    let mut rng = seeded(split(seed, 1));
    let mut lows = Vec::with_capacity(l1.samples());
    let mut highs = Vec::with_capacity(l1.samples());
    for _ in 0..l1.samples() {
        let j = rng.random_range(0..n);
        let (l, h) = ring.normalized_changepoints(j)?;
        lows.push((j, l));
        highs.push((j, h));
    }
    for (name, samples) in [("lseq", &mut lows), ("hseq", &mut highs)] {
        let d = sampled_l1_distance(samples, Direction::NonIncreasing);
        let d = *d.numer() as f64 / *d.denom() as f64;
        if d > l1.eps / 2.0 {
            return Ok((false, format!("l1-{name}={d:.5}")));
        }
    }

    let (t, tau) = params.distance_plan();
    let mut rng = seeded(split(seed, 2));
    let mut mismatches = 0usize;
    for _ in 0..t {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if ring.read_f(i, j)? != ring.value(i, j)? {
            mismatches += 1;
        }
    }
    Ok((mismatches <= tau, format!("mismatches={mismatches}/{t}")))
}
