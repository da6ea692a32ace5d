//! Middle-level windows with exact binomial masses.

use kmt_core::{KmtError, Result};
use serde::{Deserialize, Serialize};

/// `C(n, r)` in exact arithmetic.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A band of weights `[lo, hi]` of `{0,1}^d` with its exact point counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleWindow {
    pub d: usize,
    pub lo: usize,
    pub hi: usize,
    /// Points with weight in `[lo, hi]`.
    pub inside: u128,
    /// Points with weight outside `[lo, hi]`.
    pub outside: u128,
}

impl MiddleWindow {
    /// The window `[lo, hi]` with masses computed from scratch.
    pub fn new(d: usize, lo: usize, hi: usize) -> Result<Self> {
        if lo > hi || hi > d {
            return Err(KmtError::InvalidParameter(format!("window [{lo}, {hi}] does not fit a {d}-cube")));
        }
        let inside: u128 = (lo..=hi).map(|w| binomial(d, w)).sum();
        Ok(MiddleWindow { d, lo, hi, inside, outside: (1u128 << d) - inside })
    }

    pub fn contains(&self, weight: usize) -> bool {
        self.lo <= weight && weight <= self.hi
    }

    /// Number of levels covered.
    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Whether the complement has at most `eps * 2^(d-1)` points.
    pub fn complement_within(&self, eps: f64) -> bool {
        self.outside as f64 <= eps * 2f64.powi(self.d as i32 - 1)
    }
}

/// The narrowest window symmetric about `d/2` whose complement has at most
/// `eps * 2^(d-1)` points.
///
/// For even `d` the candidates are `[d/2 - r, d/2 + r]`, for odd `d` they are
/// `[(d-1)/2 - r, (d+1)/2 + r]`, tried for `r = 0, 1, ...`.
pub fn middle_window(d: usize, eps: f64) -> Result<MiddleWindow> {
    if d == 0 || d > 120 {
        return Err(KmtError::InvalidParameter(format!("cube dimension must lie in [1, 120], got {d}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(KmtError::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    let (lo0, hi0) = (d / 2, d.div_ceil(2));
    for r in 0..=lo0 {
        let w = MiddleWindow::new(d, lo0 - r, hi0 + r)?;
        if w.complement_within(eps) {
            return Ok(w);
        }
    }
    unreachable!("the full window has empty complement")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!((0..=12).map(|w| binomial(12, w)).sum::<u128>(), 4096);
    }

    #[test]
    fn twelve_cube_at_three_tenths() {
        // Levels 5..=7 hold 2508 points and leave 1588 > 614.4; levels 4..=8 hold
        // 3498 and leave 598.
        let w = middle_window(12, 0.3).unwrap();
        assert_eq!((w.lo, w.hi), (4, 8));
        assert_eq!(w.inside, 3498);
        assert_eq!(w.outside, 598);
        assert!(w.complement_within(0.3));
        assert!(!MiddleWindow::new(12, 5, 7).unwrap().complement_within(0.3));
    }

    #[test]
    fn eps_one_needs_at_most_half_the_cube() {
        assert_eq!(middle_window(3, 1.0).unwrap().width(), 2);
        for d in 1..=20 {
            let w = middle_window(d, 1.0).unwrap();
            assert!(2 * w.outside <= 1u128 << d);
        }
    }

    #[test]
    fn narrowest_symmetric_choice() {
        for d in 1..=16 {
            for eps in [0.05, 0.1, 0.3, 0.7] {
                let w = middle_window(d, eps).unwrap();
                assert!(w.complement_within(eps));
                assert_eq!(w.lo + w.hi, d, "window is symmetric");
                if w.lo < d / 2 {
                    let inner = MiddleWindow::new(d, w.lo + 1, w.hi - 1).unwrap();
                    assert!(!inner.complement_within(eps));
                }
            }
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(middle_window(0, 0.5).is_err());
        assert!(middle_window(8, 0.0).is_err());
        assert!(middle_window(8, 1.5).is_err());
        assert!(MiddleWindow::new(4, 3, 2).is_err());
    }
}
