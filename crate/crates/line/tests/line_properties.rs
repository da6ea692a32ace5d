use kmt_core::chain::is_violation_chain;
use kmt_core::rng::seeded;
use kmt_core::table::TruthTable;
use kmt_core::{exact_distance_line_dp, longest_alternating_chain, Domain};
use kmt_line::dual::{interval_lengths, intervals_function};
use kmt_line::support::exact_expectation;
use kmt_line::*;
use num_rational::Ratio;
use rand::Rng;

fn all_lines(n: usize) -> impl Iterator<Item = TruthTable> {
    (0..1u64 << n).map(move |mask| TruthTable::from_mask(Domain::line(n), mask))
}

#[test]
fn one_sided_never_rejects_small_k_monotone_lines() {
    for n in [6, 11, 14] {
        for f in all_lines(n) {
            let l = longest_alternating_chain(&f).unwrap();
            for k in l.max(1)..=3 {
                for seed in 0..100 {
                    let v = test_line_one_sided(&f, &OneSidedParams::new(k, 0.5), seed).unwrap();
                    assert!(v.accepted(), "n={n} k={k} f={:?}", f.to_bools());
                }
            }
        }
    }
}

#[test]
fn rejections_carry_violations() {
    let mut rng = seeded(5);
    for trial in 0..60 {
        let n = 2000 + trial * 17;
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let f = TruthTable::from_bools(Domain::line(n), &bits).unwrap();
        let k = 1 + trial % 4;
        let v = test_line_one_sided(&f, &OneSidedParams::new(k, 0.1), trial as u64).unwrap();
        assert!(v.rejected());
        assert!(is_violation_chain(f.domain(), |x| f.get(x), v.witness.as_ref().unwrap(), k));
    }
}

#[test]
fn slightly_more_alternations_means_close() {
    // A function that is (1 + eps/4)k-monotone is eps-close to k-monotone.
    for n in 1..=14 {
        for f in all_lines(n) {
            let l = longest_alternating_chain(&f).unwrap();
            for (k, eps) in [(4usize, 1.0f64), (8, 0.5), (6, 0.75), (10, 0.4), (12, 1.0 / 3.0)] {
                let relaxed = ((1.0 + eps / 4.0) * k as f64).floor() as usize;
                if l <= relaxed {
                    let d = exact_distance_line_dp(&f, k).unwrap();
                    assert!(d.as_f64() < eps, "n={n} k={k} eps={eps} d={d}");
                }
            }
        }
    }
}

#[test]
fn support_size_separates_monotone_from_far() {
    for n in 1..=12 {
        for f in all_lines(n) {
            let s = interval_lengths(&f).len();
            let l = longest_alternating_chain(&f).unwrap();
            for k in 1..=8 {
                if l <= k {
                    assert!(s <= k + 1);
                }
                for eps in [0.5, 1.0] {
                    if eps * k as f64 / 4.0 >= 1.0 && exact_distance_line_dp(&f, k).unwrap().as_f64() >= eps {
                        assert!(s as f64 > (1.0 + eps / 4.0) * k as f64 + 1.0);
                    }
                }
            }
        }
    }
}

fn random_lengths(rng: &mut impl Rng, total: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = total;
    while left > 0 {
        let l = rng.random_range(1..=left.min(20));
        out.push(l);
        left -= l;
    }
    out
}

#[test]
fn estimator_over_64_points() {
    let mut rng = seeded(64);
    for _ in 0..20 {
        let lengths = random_lengths(&mut rng, 64);
        assert_eq!(exact_expectation(&lengths, None), Ratio::from_integer(lengths.len() as u64));
        let f = intervals_function(&lengths);
        let mut good = 0;
        for seed in 0..100 {
            let o = kmt_core::Oracle::new(&f);
            let mut dual = LineDual::new(&o);
            let est = support_size_estimate(&mut dual, 0.25, None, None, &mut seeded(seed));
            if (est.estimate - lengths.len() as f64).abs() <= 16.0 {
                good += 1;
            }
        }
        assert!(good >= 90, "{lengths:?}: {good}/100");
    }
}
