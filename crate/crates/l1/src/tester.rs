//! Tolerant L1 tester for monotonicity of `f: [n]^d -> [0,1]`.
//!
//! With `m = ceil(4 / (eps2 - eps1))`, rounding moves the L1 distance by at most
//! `1/m`, so the lift of the rounded function is within `eps1 + 1/m` of monotone when
//! `f` is `eps1`-close and at least `eps2 - 1/m` away when `f` is `eps2`-far. One of
//! the tolerant Boolean testers with `k = 1` on `[n]^d x [m]` separates the two cases,
//! whose gap is at least `(eps2 - eps1) / 2`.

use kmt_core::{KmtError, Result, Verdict};
use kmt_highdim::{run_agnostic, run_full, AgnosticParams, FullParams};
use serde::{Deserialize, Serialize};

use crate::lift::ThresholdLift;
use crate::real::RealFunction;

/// The Boolean tester run on the lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Block label estimates, any `eps1 < eps2`.
    Full,
    /// Agnostic learning, `eps2 > 3 eps1` on the lift.
    Agnostic,
}

/// `ceil(4 / (eps2 - eps1))`.
pub fn rounding_parameter(eps1: f64, eps2: f64) -> usize {
    (4.0 / (eps2 - eps1) - 1e-9).ceil() as usize
}

/// Outcome of [`run_l1`].
#[derive(Debug, Clone, PartialEq)]
pub struct L1Run {
    pub verdict: Verdict,
    /// Rounding parameter, also the length of the threshold axis.
    pub m: usize,
    /// Thresholds handed to the Boolean tester, `eps1 + 1/m` and `eps2 - 1/m`.
    pub lifted_eps: (f64, f64),
    pub blocks_per_axis: Vec<usize>,
}

/// Runs the reduction and keeps the derived parameters.
pub fn run_l1(f: &RealFunction, eps1: f64, eps2: f64, seed: u64, engine: Engine) -> Result<L1Run> {
    if !(0.0 <= eps1 && eps1 < eps2 && eps2 <= 1.0) {
        return Err(KmtError::InvalidParameter(format!("need 0 <= eps1 < eps2 <= 1, got {eps1}, {eps2}")));
    }
    if engine == Engine::Agnostic && 3.0 * eps1 >= eps2 {
        return Err(KmtError::PreconditionViolated(format!("the agnostic engine needs eps2 > 3 eps1, got {eps1}, {eps2}")));
    }
    let m = rounding_parameter(eps1, eps2);
    let lifted_eps = (eps1 + 1.0 / m as f64, eps2 - 1.0 / m as f64);
    let lift = ThresholdLift::new(f, m)?;
    let (verdict, blocks_per_axis) = match engine {
        Engine::Full => {
            let run = run_full(&lift, &FullParams::new(1, lifted_eps.0, lifted_eps.1), seed)?;
            (run.verdict, run.blocks_per_axis)
        }
        Engine::Agnostic => {
            let run = run_agnostic(&lift, &AgnosticParams::new(1, lifted_eps.0, lifted_eps.1), seed)?;
            (run.verdict, run.blocks_per_axis)
        }
    };
    let reason = format!("m={m};{}", verdict.reason.as_deref().unwrap_or(""));
    Ok(L1Run { verdict: verdict.with_reason(reason), m, lifted_eps, blocks_per_axis })
}

/// Tolerant L1 tester: accepts `eps1`-close and rejects `eps2`-far functions, each
/// with probability at least 2/3. Queries count reads of `f`.
pub fn tolerant_l1_test_monotone(f: &RealFunction, eps1: f64, eps2: f64, seed: u64, engine: Engine) -> Result<Verdict> {
    Ok(run_l1(f, eps1, eps2, seed, engine)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmt_core::Domain;
    use num_rational::Rational64;

    #[test]
    fn rounding_parameter_values() {
        assert_eq!(rounding_parameter(0.1, 0.5), 10);
        assert_eq!(rounding_parameter(0.0, 1.0), 4);
        assert_eq!(rounding_parameter(0.05, 0.4), 12);
    }

    #[test]
    fn gap_is_at_least_half() {
        for (e1, e2) in [(0.0, 0.1), (0.1, 0.5), (0.05, 0.4), (0.3, 0.31), (0.0, 1.0)] {
            let m = rounding_parameter(e1, e2) as f64;
            assert!((e2 - 1.0 / m) - (e1 + 1.0 / m) >= (e2 - e1) / 2.0 - 1e-12);
        }
    }

    #[test]
    fn constant_function_is_accepted() {
        let f = RealFunction::from_fn(Domain::line(50), |_| Rational64::new(1, 3)).unwrap();
        let run = run_l1(&f, 0.1, 0.5, 7, Engine::Full).unwrap();
        assert_eq!(run.m, 10);
        assert_eq!(run.blocks_per_axis, vec![50, 10]);
        assert!(run.verdict.accepted());
        assert!(run.verdict.reason.as_deref().unwrap().starts_with("m=10;block-error="));
    }

    #[test]
    fn parameter_checks() {
        let f = RealFunction::from_fn(Domain::line(4), |_| Rational64::new(1, 2)).unwrap();
        assert!(matches!(run_l1(&f, 0.5, 0.4, 0, Engine::Full), Err(KmtError::InvalidParameter(_))));
        assert!(matches!(run_l1(&f, 0.2, 0.5, 0, Engine::Agnostic), Err(KmtError::PreconditionViolated(_))));
    }
}
