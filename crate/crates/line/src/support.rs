//! Support-size estimation for interval-length distributions.
//!
//! For `x ~ D` the variable `1 / D(x)` has expectation `|supp D|`. Capped evaluations
//! that fail contribute 0, which can only bias the estimate downward.

use num_rational::Ratio;
use rand::Rng;

use crate::dual::{exploration_cost, Capped, DualAccess};

/// Output of [`support_size_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportEstimate {
    pub estimate: f64,
    pub samples: usize,
    /// Samples whose evaluation hit the cap.
    pub capped: usize,
}

/// Hoeffding sample count for additive error `eps_prime * N` at confidence 9/10:
/// `ceil(ln(20) / (2 eps'^2))`, which is `ceil(1.5 / eps'^2)` to two digits.
pub fn estimator_samples(eps_prime: f64) -> usize {
    (1.5 / (eps_prime * eps_prime)).ceil() as usize
}

/// Estimates `|supp D|` from `samples` draws (default [`estimator_samples`]).
pub fn support_size_estimate<D: DualAccess + ?Sized, R: Rng + ?Sized>(
    dual: &mut D,
    eps_prime: f64,
    cap: Option<usize>,
    samples: Option<usize>,
    rng: &mut R,
) -> SupportEstimate {
    let n = dual.positions();
    let s = samples.unwrap_or_else(|| estimator_samples(eps_prime));
    let mut total = 0.0f64;
    let mut capped = 0usize;
    for _ in 0..s {
        let pos = rng.random_range(0..n);
        match dual.eval(pos, cap) {
            Capped::Mass { start, end } => total += n as f64 / (end - start + 1) as f64,
            Capped::ExceedsCap => capped += 1,
        }
    }
    SupportEstimate { estimate: total / s as f64, samples: s, capped }
}

/// Exact expectation of one estimator term for a line whose intervals have the given
/// lengths, with an optional cap: `sum over positions p of [found(p)] / |I(p)|`.
pub fn exact_expectation(lengths: &[usize], cap: Option<usize>) -> Ratio<u64> {
    let n: usize = lengths.iter().sum();
    let mut total = Ratio::from_integer(0u64);
    let mut start = 0;
    for &len in lengths {
        let end = start + len - 1;
        let found = (start..=end)
            .filter(|&p| exploration_cost(n, p, start, end, cap).0 != Capped::ExceedsCap)
            .count();
        total += Ratio::new(found as u64, len as u64);
        start += len;
    }
    total
}
