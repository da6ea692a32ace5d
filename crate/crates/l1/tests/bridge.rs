//! The L1 / Hamming correspondence on small instances and the tester on the line.

use kmt_core::isotonic::{l1_isotonic_exact, Direction};
use kmt_core::rng::seeded;
use kmt_core::{is_k_monotone, BoolFn, Domain};
use kmt_l1::{
    l1_distance_to_monotone, l1_hamming_sides, round_m, run_l1, threshold_lift, Engine, RealFunction, ThresholdLift,
};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

/// Domains and resolutions with `N m <= 20`.
const SMALL: [(&[usize], usize); 9] = [
    (&[8], 2),
    (&[5], 4),
    (&[3], 4),
    (&[20], 1),
    (&[3, 3], 2),
    (&[2, 2], 5),
    (&[2, 2, 2], 2),
    (&[2, 3], 3),
    (&[2, 5], 2),
];

fn random_on_grid(rng: &mut impl Rng, dims: &[usize], m: usize, with_zero: bool) -> RealFunction {
    let low = if with_zero { 0 } else { 1 };
    RealFunction::from_fn(Domain::rect(dims.to_vec()), |_| r(rng.random_range(low..=m as i64), m as i64)).unwrap()
}

#[test]
fn level_average_recovers_the_value() {
    let mut rng = seeded(11);
    for i in 0..1000 {
        let (dims, m) = SMALL[i % SMALL.len()];
        let f = random_on_grid(&mut rng, dims, m, i % 2 == 0);
        let lift = ThresholdLift::new(&f, m).unwrap();
        for x in 0..f.domain().size() {
            let ones = (0..m).filter(|&j| lift.value(lift.point(x, j))).count();
            assert_eq!(r(ones as i64, m as i64), f.value(x));
        }
    }
}

#[test]
fn lift_agrees_with_the_threshold_inside_each_cell() {
    let mut rng = seeded(12);
    for _ in 0..200 {
        let m = rng.random_range(1..=6);
        let f = random_on_grid(&mut rng, &[4], m, true);
        let lift = ThresholdLift::new(&f, m).unwrap();
        for x in 0..4 {
            for j in 0..m {
                // Midpoint of the cell (j/m, (j+1)/m].
                let mid = r(2 * j as i64 + 1, 2 * m as i64);
                assert_eq!(lift.value(lift.point(x, j)), threshold_lift(&f, x, mid));
            }
        }
    }
}

#[test]
fn monotonicity_transfers_exhaustively() {
    for m in 1..=3usize {
        let levels = m as i64 + 1;
        for code in 0..levels.pow(3) {
            let f = RealFunction::from_fn(Domain::line(3), |x| r(code / levels.pow(x as u32) % levels, m as i64)).unwrap();
            let lifted = is_k_monotone(&ThresholdLift::new(&f, m).unwrap(), 1).unwrap();
            assert_eq!(f.is_monotone(), lifted, "m = {m}, f = {:?}", f.values());
        }
    }
}

#[test]
fn l1_equals_hamming_on_random_instances() {
    let mut rng = seeded(13);
    let mut positive = 0;
    for i in 0..1000 {
        let (dims, m) = SMALL[i % SMALL.len()];
        let f = random_on_grid(&mut rng, dims, m, false);
        let (real, hamming) = l1_hamming_sides(&f, m).unwrap();
        assert_eq!(real, hamming, "dims {dims:?}, m = {m}, f = {:?}", f.values());
        assert_eq!(l1_distance_to_monotone(&f).unwrap(), real);
        positive += (real > r(0, 1)) as usize;
    }
    assert!(positive > 800, "only {positive} instances were not monotone");
}

#[test]
fn four_level_functions_on_three_points() {
    let mut rng = seeded(14);
    for _ in 0..1000 {
        let f = random_on_grid(&mut rng, &[3], 4, false);
        let (real, hamming) = l1_hamming_sides(&f, 4).unwrap();
        assert_eq!(real, hamming);
    }
}

#[test]
fn rounding_moves_the_distance_by_at_most_one_over_m() {
    let mut rng = seeded(15);
    for m in [2usize, 4] {
        for _ in 0..1000 {
            let f = RealFunction::from_fn(Domain::line(8), |_| {
                let q = rng.random_range(1..=97i64);
                r(rng.random_range(0..=q), q)
            })
            .unwrap();
            let before = l1_isotonic_exact(f.values(), Direction::NonDecreasing).distance;
            let after = l1_isotonic_exact(round_m(&f, m).unwrap().values(), Direction::NonDecreasing).distance;
            let gap = if before > after { before - after } else { after - before };
            assert!(gap <= r(1, m as i64), "m = {m}: {before} vs {after}");
        }
    }
}

proptest! {
    #[test]
    fn rounding_is_idempotent_and_upward(vals in prop::collection::vec((0i64..=50, 1i64..=50), 1..12), m in 1usize..9) {
        let f = RealFunction::new(
            Domain::line(vals.len()),
            vals.iter().map(|&(p, q)| r(p.min(q), q)).collect(),
        ).unwrap();
        let g = round_m(&f, m).unwrap();
        prop_assert_eq!(round_m(&g, m).unwrap(), g.clone());
        prop_assert!(g.is_on_grid(m));
        for x in 0..vals.len() {
            prop_assert!(g.value(x) >= f.value(x));
            prop_assert!(g.value(x) - f.value(x) < r(1, m as i64));
        }
    }

    #[test]
    fn lift_is_non_decreasing_in_the_threshold(vals in prop::collection::vec(0i64..=1000, 1..10), m in 1usize..12) {
        let f = RealFunction::new(Domain::line(vals.len()), vals.iter().map(|&p| r(p, 1000)).collect()).unwrap();
        let lift = ThresholdLift::new(&f, m).unwrap();
        for x in 0..vals.len() {
            for j in 1..m {
                prop_assert!(lift.value(lift.point(x, j - 1)) <= lift.value(lift.point(x, j)));
            }
        }
    }
}

const N: usize = 240;
const EPS1: f64 = 0.05;
const EPS2: f64 = 0.4;

/// Sorted random values with a few points overwritten, certified within `EPS1`.
fn near_instances(count: usize, seed: u64) -> Vec<RealFunction> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut v: Vec<i64> = (0..N).map(|_| rng.random_range(0..=1000)).collect();
        v.sort();
        let noisy = out.len() % 2 == 1;
        if noisy {
            for _ in 0..rng.random_range(1..=12) {
                let i = rng.random_range(0..N);
                v[i] = rng.random_range(0..=1000);
            }
        }
        let f = RealFunction::new(Domain::line(N), v.iter().map(|&p| r(p, 1000)).collect()).unwrap();
        let dist = l1_distance_to_monotone(&f).unwrap();
        assert!(noisy || dist == r(0, 1));
        if dist <= r(1, 20) {
            out.push(f);
        }
    }
    out
}

/// High values followed by low ones, certified at least `EPS2` from monotone.
fn far_instances(count: usize, seed: u64) -> Vec<RealFunction> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let split = rng.random_range(100..=140);
        let f = RealFunction::from_fn(Domain::line(N), |x| {
            let p = if x < split { rng.random_range(880..=1000) } else { rng.random_range(0..=120) };
            r(p, 1000)
        })
        .unwrap();
        if l1_distance_to_monotone(&f).unwrap() >= r(2, 5) {
            out.push(f);
        }
    }
    out
}

#[test]
fn tester_decides_certified_line_instances() {
    let near = near_instances(50, 21);
    let far = far_instances(50, 22);
    let accepted = near
        .iter()
        .enumerate()
        .filter(|(i, f)| run_l1(f, EPS1, EPS2, 100 + *i as u64, Engine::Full).unwrap().verdict.accepted())
        .count();
    let rejected = far
        .iter()
        .enumerate()
        .filter(|(i, f)| run_l1(f, EPS1, EPS2, 200 + *i as u64, Engine::Full).unwrap().verdict.rejected())
        .count();
    assert!(accepted * 3 >= 2 * near.len(), "accepted {accepted} of {}", near.len());
    assert!(rejected * 3 >= 2 * far.len(), "rejected {rejected} of {}", far.len());
}

#[test]
fn each_lifted_read_is_one_read_of_f() {
    let f = &near_instances(1, 23)[0];
    let run = run_l1(f, EPS1, EPS2, 5, Engine::Full).unwrap();
    assert_eq!(run.m, 12);
    assert_eq!(run.blocks_per_axis, vec![55, 12]);
    let t = kmt_highdim::FullParams::new(1, run.lifted_eps.0, run.lifted_eps.1).samples_per_block(55 * 12);
    assert_eq!(run.verdict.queries as usize, 55 * 12 * t);
}

#[test]
fn agnostic_engine_on_small_grids() {
    // The lifted thresholds need 3 (eps1 + 1/m) < eps2 - 1/m. With m = ceil(4 / (eps2 - eps1))
    // that leaves eps1 = 0 and eps2 > 4/m, e.g. eps2 = 0.9 with m = 5.
    let dom = Domain::grid(6, 2);
    let mono = RealFunction::from_fn(dom.clone(), |x| r((dom.coord(x, 0) + dom.coord(x, 1)) as i64, 10)).unwrap();
    let anti = RealFunction::from_fn(dom.clone(), |x| if dom.coord(x, 0) < 3 { r(1, 1) } else { r(0, 1) }).unwrap();
    assert_eq!(l1_distance_to_monotone(&anti).unwrap(), r(1, 2));
    let run = run_l1(&mono, 0.0, 0.9, 3, Engine::Agnostic).unwrap();
    assert_eq!(run.m, 5);
    assert!(run.verdict.accepted(), "{:?}", run.verdict);
    let run = run_l1(&anti, 0.0, 0.9, 3, Engine::Agnostic).unwrap();
    assert!(run.verdict.rejected(), "{:?}", run.verdict);
    // eps2 = 1 gives m = 4 and lifted thresholds (1/4, 3/4), on the boundary.
    assert!(matches!(
        run_l1(&mono, 0.0, 1.0, 3, Engine::Agnostic),
        Err(kmt_core::KmtError::PreconditionViolated(_))
    ));
}
