//! Sample-based testing of monotonicity in L1 distance for `[0,1]`-valued sequences.
//!
//! The tester draws `s` positions uniformly with replacement, reads the sequence
//! there, and computes the exact L1 distance of the sampled subsequence (in position
//! order) to the monotone cone. It rejects iff that distance exceeds `eps / 2`. A
//! subsequence of a monotone sequence is monotone, so monotone inputs are never
//! rejected.

use kmt_core::isotonic::{l1_isotonic_exact, Direction};
use kmt_core::rng::seeded;
use kmt_core::{KmtError, Result, Verdict};
use num_rational::Rational64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Parameters of [`l1_monotone_subtester`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1SubtesterParams {
    /// Distance parameter `eps'`.
    pub eps: f64,
    /// Allowed failure probability on far inputs.
    pub delta: f64,
    /// Sample constant: `s = ceil(c1 * ln(1/delta) / eps)`.
    pub c1: f64,
}

impl L1SubtesterParams {
    pub fn new(eps: f64, delta: f64) -> Self {
        L1SubtesterParams { eps, delta, c1: 4.0 }
    }

    pub fn samples(&self) -> usize {
        (self.c1 * (1.0 / self.delta).ln() / self.eps).ceil().max(2.0) as usize
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(KmtError::InvalidParameter(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(KmtError::InvalidParameter(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.c1 > 0.0) {
            return Err(KmtError::InvalidParameter(format!("c1 must be positive, got {}", self.c1)));
        }
        Ok(())
    }
}

/// L1 distance to `direction` of the values in `samples` sorted by position.
///
/// Ties in position keep their relative order, which is harmless since equal
/// positions carry equal values.
pub fn sampled_l1_distance(samples: &mut [(usize, Rational64)], direction: Direction) -> Rational64 {
    samples.sort_by_key(|&(p, _)| p);
    let values: Vec<Rational64> = samples.iter().map(|&(_, v)| v).collect();
    l1_isotonic_exact(&values, direction).distance
}

/// Tests whether the sequence `seq` of length `len` is monotone in `direction`.
///
/// The verdict counts one query per sampled position.
pub fn l1_monotone_subtester(
    len: usize,
    seq: &mut dyn FnMut(usize) -> Result<Rational64>,
    direction: Direction,
    params: &L1SubtesterParams,
    seed: u64,
) -> Result<Verdict> {
    params.validate()?;
    if len == 0 {
        return Err(KmtError::InvalidParameter("empty sequence".into()));
    }
    let mut rng = seeded(seed);
    let s = params.samples();
    let mut samples = Vec::with_capacity(s);
    for _ in 0..s {
        let p = rng.random_range(0..len);
        samples.push((p, seq(p)?));
    }
    let d = sampled_l1_distance(&mut samples, direction);
    let d = *d.numer() as f64 / *d.denom() as f64;
    let reason = format!("sampled-l1={d:.5}");
    Ok(if d > params.eps / 2.0 { Verdict::reject(s as u64, seed) } else { Verdict::accept(s as u64, seed) }.with_reason(reason))
}
