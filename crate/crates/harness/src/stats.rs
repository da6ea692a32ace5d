//! Acceptance rates with Wilson score intervals.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// A count of successes with its rate and 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Rate {
    pub fn new(successes: usize, trials: usize) -> Self {
        let (lower, upper) = wilson_interval(successes, trials, Z95);
        let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Rate { successes, trials, rate, lower, upper }
    }

    /// Whether the point estimate reaches `target`.
    pub fn at_least(&self, target: f64) -> bool {
        self.rate >= target
    }
}

impl std::fmt::Display for Rate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{} (95% CI [{:.3}, {:.3}])", self.successes, self.trials, self.lower, self.upper)
    }
}
