//! Exact isotonic regression in the L1 norm over rationals.

use num_rational::Rational64;

/// Target cone of the regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    NonDecreasing,
    NonIncreasing,
}

/// An exact L1 fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotonicFit {
    /// `(1/n) * sum |y_i - fit_i|`.
    pub distance: Rational64,
    /// A closest sequence in the cone.
    pub fit: Vec<Rational64>,
}

fn abs(x: Rational64) -> Rational64 {
    if x < Rational64::from_integer(0) {
        -x
    } else {
        x
    }
}

fn lower_median(sorted: &[Rational64]) -> Rational64 {
    sorted[(sorted.len() - 1) / 2]
}

fn merge_sorted(a: &[Rational64], b: &[Rational64]) -> Vec<Rational64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn pava_increasing(y: &[Rational64]) -> Vec<Rational64> {
    // Each block keeps its values sorted; its level is the lower median.
    let mut blocks: Vec<(usize, Vec<Rational64>)> = Vec::new();
    for &v in y {
        blocks.push((1, vec![v]));
        while blocks.len() >= 2 {
            let last = blocks.len() - 1;
            if lower_median(&blocks[last - 1].1) <= lower_median(&blocks[last].1) {
                break;
            }
            let (c2, v2) = blocks.pop().unwrap();
            let (c1, v1) = blocks.pop().unwrap();
            blocks.push((c1 + c2, merge_sorted(&v1, &v2)));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(c, vals)| std::iter::repeat_n(lower_median(&vals), c))
        .collect()
}

/// Exact L1 distance from `y` to the chosen monotone cone, by pooling adjacent
/// violators at medians. The distance is normalized by the length of `y`.
pub fn l1_isotonic_exact(y: &[Rational64], direction: Direction) -> IsotonicFit {
    if y.is_empty() {
        return IsotonicFit { distance: Rational64::from_integer(0), fit: Vec::new() };
    }
    let fit = match direction {
        Direction::NonDecreasing => pava_increasing(y),
        Direction::NonIncreasing => {
            let rev: Vec<Rational64> = y.iter().rev().copied().collect();
            let mut f = pava_increasing(&rev);
            f.reverse();
            f
        }
    };
    let total: Rational64 = y.iter().zip(&fit).map(|(a, b)| abs(a - b)).sum();
    IsotonicFit { distance: total / Rational64::from_integer(y.len() as i64), fit }
}

/// Reference L1 isotonic regression by dynamic programming over the data values
/// (an optimal fit always takes values among the data). Quadratic time.
pub fn l1_isotonic_dp(y: &[Rational64], direction: Direction) -> Rational64 {
    if y.is_empty() {
        return Rational64::from_integer(0);
    }
    let mut levels: Vec<Rational64> = y.to_vec();
    levels.sort();
    levels.dedup();
    if direction == Direction::NonIncreasing {
        levels.reverse();
    }
    // best[j] = min cost of the prefix with last level at index <= j (in cone order).
    let mut best: Vec<Rational64> = vec![Rational64::from_integer(0); levels.len()];
    for &v in y {
        let mut run = None::<Rational64>;
        for (j, &l) in levels.iter().enumerate() {
            let here = best[j] + abs(v - l);
            let m = match run {
                Some(r) if r < here => r,
                _ => here,
            };
            run = Some(m);
            best[j] = m;
        }
    }
    let total = *best.iter().min().unwrap();
    total / Rational64::from_integer(y.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn small_examples() {
        let one = r(1, 1);
        let zero = r(0, 1);
        assert_eq!(l1_isotonic_exact(&[one, zero], Direction::NonIncreasing).distance, zero);
        assert_eq!(l1_isotonic_exact(&[zero, one], Direction::NonIncreasing).distance, r(1, 2));
        let fit = l1_isotonic_exact(&[one, r(1, 2), r(3, 4)], Direction::NonIncreasing);
        assert_eq!(fit.distance, r(1, 12));
    }

    #[test]
    fn fits_are_in_the_cone() {
        let y: Vec<Rational64> = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3].iter().map(|&v| r(v, 10)).collect();
        let inc = l1_isotonic_exact(&y, Direction::NonDecreasing);
        assert!(inc.fit.windows(2).all(|w| w[0] <= w[1]));
        let dec = l1_isotonic_exact(&y, Direction::NonIncreasing);
        assert!(dec.fit.windows(2).all(|w| w[0] >= w[1]));
    }

    proptest::proptest! {
        #[test]
        fn pava_matches_dp(vals in proptest::collection::vec(0i64..9, 1..25), inc in proptest::bool::ANY) {
            let y: Vec<Rational64> = vals.iter().map(|&v| r(v, 8)).collect();
            let dir = if inc { Direction::NonDecreasing } else { Direction::NonIncreasing };
            proptest::prop_assert_eq!(l1_isotonic_exact(&y, dir).distance, l1_isotonic_dp(&y, dir));
        }
    }
}
