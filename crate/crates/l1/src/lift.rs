//! Threshold lifts of real functions and the exact L1 / Hamming correspondence.
//!
//! The threshold function of `f` is `T(x, t) = 1{f(x) >= 1 - t}` for `t` in `(0, 1]`,
//! and `f(x)` is its integral over `t`. The discrete lift used by the testers lives on
//! `[n]^d x [m]` with the threshold as the last axis: level `j` stands for the cell
//! `t in (j/m, (j+1)/m]`. For a function with values in multiples of `1/m`, `T(x, .)`
//! is constant on the interior of every cell, and the lift takes that value:
//! `1{m f(x) + j + 1 > m}`. With this choice `(1/m) sum_j lift(x, j) = f(x)` holds
//! exactly, and the L1 distance of `f` to monotonicity equals the Hamming distance of
//! the lift.
//!
//! A [`ThresholdLift`] rounds on the fly, so it is the lift of `ceil(m f) / m`. Each of
//! its evaluations reads `f` once.

use kmt_core::distance::{exact_distance_bruteforce, BRUTE_FORCE_LIMIT};
use kmt_core::isotonic::{l1_isotonic_exact, Direction};
use kmt_core::{BoolFn, Domain, KmtError, Result};
use num_rational::Rational64;

use crate::real::RealFunction;

/// `1{f(x) >= 1 - t}` for `t` in `(0, 1]`.
pub fn threshold_lift(f: &RealFunction, x: usize, t: Rational64) -> bool {
    debug_assert!(t > Rational64::from_integer(0) && t <= Rational64::from_integer(1));
    f.value(x) >= Rational64::from_integer(1) - t
}

/// The lift of the `m`-rounding of `f`, a Boolean function on `[n]^d x [m]`.
#[derive(Debug, Clone)]
pub struct ThresholdLift<'a> {
    f: &'a RealFunction,
    m: usize,
    domain: Domain,
}

impl<'a> ThresholdLift<'a> {
    pub fn new(f: &'a RealFunction, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(KmtError::InvalidParameter("the lift needs m >= 1".into()));
        }
        let mut dims = f.domain().dims().to_vec();
        dims.push(m);
        Ok(ThresholdLift { f, m, domain: Domain::rect(dims) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Index of `(x, j)` in the lifted domain.
    pub fn point(&self, x: usize, j: usize) -> usize {
        x + j * self.f.domain().size()
    }

    /// Right end `(j+1)/m` of the threshold cell of level `j`.
    pub fn level_threshold(&self, j: usize) -> Rational64 {
        Rational64::new(j as i64 + 1, self.m as i64)
    }
}

impl BoolFn for ThresholdLift<'_> {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn value(&self, idx: usize) -> bool {
        let n = self.f.domain().size();
        let (x, j) = (idx % n, idx / n);
        self.f.rounded_numerator(x, self.m) + j as i64 + 1 > self.m as i64
    }
}

/// Least `sum |a(x) - b(x)|` over monotone integer `b` with values in `0..=m`,
/// by depth-first search over the points in index order.
fn monotone_fit_enumerated(domain: &Domain, a: &[i64], m: i64) -> i64 {
    fn go(domain: &Domain, a: &[i64], m: i64, x: usize, b: &mut Vec<i64>, cost: i64, best: &mut i64) {
        if cost >= *best {
            return;
        }
        if x == a.len() {
            *best = cost;
            return;
        }
        let low = domain.lower_covers(x).map(|y| b[y]).max().unwrap_or(0);
        for v in low..=m {
            b.push(v);
            go(domain, a, m, x + 1, b, cost + (a[x] - v).abs(), best);
            b.pop();
        }
    }
    let mut best = i64::MAX;
    go(domain, a, m, 0, &mut Vec::with_capacity(a.len()), 0, &mut best);
    best
}

/// Both sides of the L1 / Hamming identity for an `f` with values in multiples of
/// `1/m`: the L1 distance to monotone functions, and the Hamming distance of the lift
/// to monotone Boolean functions on `[n]^d x [m]`.
///
/// The real side uses isotonic median regression on a line and a search over
/// monotone targets with values in multiples of `1/m` elsewhere. The Boolean side
/// scores every Boolean function of the lifted domain.
pub fn l1_hamming_sides(f: &RealFunction, m: usize) -> Result<(Rational64, Rational64)> {
    if m == 0 || !f.is_on_grid(m) {
        return Err(KmtError::PreconditionViolated(format!("values must be multiples of 1/{m}")));
    }
    let n = f.domain().size();
    if n * m > BRUTE_FORCE_LIMIT {
        return Err(KmtError::budget("L1 / Hamming check", n * m, BRUTE_FORCE_LIMIT));
    }
    let real = if f.domain().is_line() {
        l1_isotonic_exact(f.values(), Direction::NonDecreasing).distance
    } else {
        let a: Vec<i64> = (0..n).map(|x| f.rounded_numerator(x, m)).collect();
        Rational64::new(monotone_fit_enumerated(f.domain(), &a, m as i64), (n * m) as i64)
    };
    let hamming = exact_distance_bruteforce(&ThresholdLift::new(f, m)?, 1)?;
    Ok((real, Rational64::new(hamming.num as i64, hamming.den as i64)))
}

/// Whether the L1 distance of `f` equals the Hamming distance of its lift.
pub fn l1_equals_hamming_check(f: &RealFunction, m: usize) -> Result<bool> {
    let (real, hamming) = l1_hamming_sides(f, m)?;
    Ok(real == hamming)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmt_core::is_k_monotone;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn threshold_examples() {
        let f = RealFunction::new(Domain::line(2), vec![r(7, 10), r(1, 1)]).unwrap();
        assert!(!threshold_lift(&f, 0, r(1, 5)));
        assert!(threshold_lift(&f, 0, r(2, 5)));
        for t in 1..=10 {
            assert!(threshold_lift(&f, 1, r(t, 10)));
        }
    }

    #[test]
    fn lift_layout() {
        let f = RealFunction::new(Domain::line(3), vec![r(1, 3), r(2, 3), r(1, 1)]).unwrap();
        let lift = ThresholdLift::new(&f, 3).unwrap();
        assert_eq!(lift.domain().dims(), &[3, 3]);
        assert_eq!(lift.domain().coord(lift.point(2, 1), 0), 2);
        assert_eq!(lift.domain().coord(lift.point(2, 1), 1), 1);
        // f(x) = a/3 is 1 on the top a levels.
        let rows: Vec<Vec<bool>> = (0..3).map(|x| (0..3).map(|j| lift.value(lift.point(x, j))).collect()).collect();
        assert_eq!(rows, vec![vec![false, false, true], vec![false, true, true], vec![true, true, true]]);
        assert_eq!(lift.level_threshold(2), r(1, 1));
    }

    #[test]
    fn descending_pair_at_one_level() {
        let f = RealFunction::new(Domain::line(2), vec![r(1, 1), r(0, 1)]).unwrap();
        assert_eq!(l1_hamming_sides(&f, 1).unwrap(), (r(1, 2), r(1, 2)));
    }

    #[test]
    fn monotone_inputs_give_zero_on_both_sides() {
        let f = RealFunction::from_fn(Domain::grid(2, 2), |x| r(x.count_ones() as i64 + 1, 3)).unwrap();
        assert!(f.is_monotone());
        assert_eq!(l1_hamming_sides(&f, 3).unwrap(), (r(0, 1), r(0, 1)));
        assert!(is_k_monotone(&ThresholdLift::new(&f, 3).unwrap(), 1).unwrap());
    }

    #[test]
    fn check_preconditions() {
        let f = RealFunction::new(Domain::line(2), vec![r(1, 3), r(1, 1)]).unwrap();
        assert!(matches!(l1_hamming_sides(&f, 2), Err(KmtError::PreconditionViolated(_))));
        let big = RealFunction::from_fn(Domain::line(13), |_| r(1, 2)).unwrap();
        assert!(matches!(l1_hamming_sides(&big, 2), Err(KmtError::BudgetExceeded { .. })));
    }
}
