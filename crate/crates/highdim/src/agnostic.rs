//! Tolerant tester on `[n]^d` through agnostic learning of the block function.
//!
//! With `alpha = eps2 - 3 eps1` and `m = ceil(6kd / alpha)` blocks per axis, labelled
//! samples `(x, f(y))` are drawn with `x` a uniform block and `y` uniform in it. A
//! regression hypothesis `h` with excess error target `alpha/12` is learned from them,
//! its error is estimated to within `alpha/7` on fresh samples, and the tester
//! rejects if the estimate exceeds `eps1 + 5 alpha/12`. Otherwise it accepts iff `h`
//! is within `2 eps1 + 5 alpha/12` of a k-monotone block function, computed exactly.
//!
//! The regression degree is `min(ceil(k sqrt(d) (12/alpha)^2), d)`: beyond `d` the
//! features already span every block function. The learner draws
//! `ceil((F + ln 10) / tau^2)` samples, `F` being the feature count and `tau = alpha/12`.

use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::rng::{seeded, split};
use kmt_core::{exact_distance, KmtError, Result, TruthTable, Verdict};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::full::{ceil_tol, check_eps, clamped_blocks};
use crate::regression::{agnostic_learn_kkms, feature_count, RegressionMethod};

/// Parameters of [`tolerant_test_agnostic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgnosticParams {
    pub k: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub method: RegressionMethod,
}

impl AgnosticParams {
    pub fn new(k: usize, eps1: f64, eps2: f64) -> Self {
        AgnosticParams { k, eps1, eps2, method: RegressionMethod::L1 }
    }

    pub fn alpha(&self) -> f64 {
        self.eps2 - 3.0 * self.eps1
    }

    /// Blocks per axis before clamping, `ceil(6kd / alpha)`.
    pub fn blocks(&self, d: usize) -> usize {
        ceil_tol(6.0 * (self.k * d) as f64 / self.alpha())
    }

    /// `ceil(3d(k+1)/alpha ln m + ln 100)`. Reported only; no step consumes it.
    pub fn t_param(&self, d: usize, m: usize) -> usize {
        ceil_tol(3.0 * (d * (self.k + 1)) as f64 / self.alpha() * (m as f64).ln() + 100f64.ln())
    }

    /// Regression degree.
    pub fn degree(&self, d: usize) -> usize {
        let a = 12.0 / self.alpha();
        ceil_tol(self.k as f64 * (d as f64).sqrt() * a * a).min(d)
    }

    /// Excess error handed to the learner.
    pub fn tau(&self) -> f64 {
        self.alpha() / 12.0
    }

    /// Learner sample count for `features` features.
    pub fn learner_samples(&self, features: u128) -> usize {
        let tau = self.tau();
        ((features as f64 + 10f64.ln()) / (tau * tau)).ceil() as usize
    }

    /// Samples for estimating the error to within `alpha/7` with failure `1/10`.
    pub fn estimation_samples(&self) -> usize {
        let w = self.alpha() / 7.0;
        (20f64.ln() / (2.0 * w * w)).ceil() as usize
    }

    /// Rejection threshold on the estimated error.
    pub fn error_threshold(&self) -> f64 {
        self.eps1 + 5.0 * self.alpha() / 12.0
    }

    /// Acceptance threshold on the distance from `h` to the class.
    pub fn distance_threshold(&self) -> f64 {
        2.0 * self.eps1 + 5.0 * self.alpha() / 12.0
    }
}

/// Outcome of [`run_agnostic`] with the quantities behind the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct AgnosticRun {
    pub verdict: Verdict,
    /// Blocks on each axis after clamping to the side lengths.
    pub blocks_per_axis: Vec<usize>,
    pub degree: usize,
    pub learner_samples: usize,
    pub hypothesis: TruthTable,
    pub estimated_error: f64,
    /// Distance from `h` to the k-monotone block functions, if it was computed.
    pub hypothesis_distance: Option<f64>,
}

/// Runs the learning-based tester and keeps the intermediate results.
pub fn run_agnostic(f: &dyn BoolFn, params: &AgnosticParams, seed: u64) -> Result<AgnosticRun> {
    check_eps(params.k, params.eps1, params.eps2)?;
    if params.alpha() <= 0.0 {
        return Err(KmtError::PreconditionViolated(format!(
            "need eps2 > 3 eps1, got eps1 = {}, eps2 = {}",
            params.eps1, params.eps2
        )));
    }
    let dom = f.domain();
    let d = dom.d();
    let bm = clamped_blocks(dom, params.blocks(d))?;
    let blocks = bm.block_domain().clone();
    let degree = params.degree(d);
    let samples = params.learner_samples(feature_count(blocks.dims(), degree));

    let oracle = Oracle::new(f);
    let mut rng = seeded(split(seed, 1));
    let mut draw = || {
        let x = rng.random_range(0..bm.num_blocks());
        (x, oracle.query(bm.sample_in_block(x, &mut rng)))
    };
    let learned = agnostic_learn_kkms(&blocks, &mut draw, degree, samples, params.method)?;
    let h = learned.to_table();

    let mut rng = seeded(split(seed, 2));
    let est_n = params.estimation_samples();
    let wrong = (0..est_n)
        .filter(|_| {
            let x = rng.random_range(0..bm.num_blocks());
            oracle.query(bm.sample_in_block(x, &mut rng)) != h.get(x)
        })
        .count();
    let estimated_error = wrong as f64 / est_n as f64;

    let tag = params.method.label();
    let mut run = AgnosticRun {
        verdict: Verdict::reject(oracle.queries(), seed),
        blocks_per_axis: blocks.dims().to_vec(),
        degree: learned.degree,
        learner_samples: samples,
        hypothesis: h,
        estimated_error,
        hypothesis_distance: None,
    };
    if estimated_error > params.error_threshold() {
        run.verdict = run.verdict.with_reason(format!("estimated-error={estimated_error:.4};{tag}"));
        return Ok(run);
    }
    let dist = exact_distance(&run.hypothesis, params.k)?.as_f64();
    run.hypothesis_distance = Some(dist);
    let reason = format!("hypothesis-distance={dist:.4};{tag}");
    run.verdict = if dist <= params.distance_threshold() {
        Verdict::accept(oracle.queries(), seed)
    } else {
        Verdict::reject(oracle.queries(), seed)
    }
    .with_reason(reason);
    Ok(run)
}

/// Tolerant tester for k-monotonicity on a grid for `eps2 > 3 eps1`.
pub fn tolerant_test_agnostic(f: &dyn BoolFn, k: usize, eps1: f64, eps2: f64, seed: u64) -> Result<Verdict> {
    Ok(run_agnostic(f, &AgnosticParams::new(k, eps1, eps2), seed)?.verdict)
}
