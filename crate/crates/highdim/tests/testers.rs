use kmt_adversaries::random::random_k_monotone_table;
use kmt_core::coarsen::BlockMap;
use kmt_core::rng::seeded;
use kmt_core::{exact_distance, exact_distance_bruteforce, exact_distance_line_dp, is_k_monotone, Domain, TruthTable};
use kmt_highdim::regression::LabelCounts;
use kmt_highdim::{agnostic_learn_kkms, fit, run_agnostic, run_full, AgnosticParams, FullParams, RegressionMethod};
use rand::Rng;
use rand_distr::{Binomial, Distribution};

const N_LINE: usize = 240;

/// 2-monotone staircases with a few flips, kept when the line program certifies
/// distance at most 0.05.
fn near_line_instances(count: usize, seed: u64) -> Vec<TruthTable> {
    let dom = Domain::line(N_LINE);
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut f = random_k_monotone_table(&dom, 2, &mut rng);
        for _ in 0..rng.random_range(0..=12) {
            let x = rng.random_range(0..N_LINE);
            f.flip(x);
        }
        if exact_distance_line_dp(&f, 2).unwrap().as_f64() <= 0.05 {
            out.push(f);
        }
    }
    out
}

/// Narrow stripes and coin flips, kept when the line program certifies distance at
/// least 0.45.
fn far_line_instances(count: usize, seed: u64) -> Vec<TruthTable> {
    let dom = Domain::line(N_LINE);
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let f = if out.len() % 2 == 0 {
            let w = rng.random_range(1..=4);
            let phase = rng.random_range(0..2 * w);
            TruthTable::from_fn(dom.clone(), |i| (i + phase) / w % 2 == 1)
        } else {
            TruthTable::from_fn(dom.clone(), |_| rng.random_bool(0.5))
        };
        if exact_distance_line_dp(&f, 2).unwrap().as_f64() >= 0.45 {
            out.push(f);
        }
    }
    out
}

#[test]
fn block_estimates_on_the_line() {
    let params = FullParams::new(2, 0.05, 0.45);
    let near = near_line_instances(50, 1);
    let far = far_line_instances(50, 2);
    let mut accepted = 0;
    for (i, f) in near.iter().enumerate() {
        let run = run_full(f, &params, 100 + i as u64).unwrap();
        assert_eq!(run.blocks_per_axis, vec![25]);
        assert_eq!(run.verdict.queries, (25 * run.samples_per_block) as u64);
        accepted += run.verdict.accepted() as usize;
    }
    let mut rejected = 0;
    for (i, f) in far.iter().enumerate() {
        let run = run_full(f, &params, 200 + i as u64).unwrap();
        assert_eq!(run.verdict.queries, (25 * run.samples_per_block) as u64);
        rejected += run.verdict.rejected() as usize;
    }
    assert!(3 * accepted >= 2 * 50, "accepted {accepted}/50");
    assert!(3 * rejected >= 2 * 50, "rejected {rejected}/50");
}

#[test]
fn exact_staircases_are_accepted() {
    let dom = Domain::line(N_LINE);
    let mut rng = seeded(5);
    let params = FullParams::new(2, 0.0, 0.5);
    let mut accepted = 0;
    for seed in 0..50 {
        let f = random_k_monotone_table(&dom, 2, &mut rng);
        accepted += run_full(&f, &params, seed).unwrap().verdict.accepted() as usize;
    }
    assert!(3 * accepted >= 100, "{accepted}/50");
}

#[test]
fn block_estimates_meet_the_accuracy_target() {
    // Per block, |estimate - p| <= alpha/5 must fail with frequency at most 1/(3 m^d).
    for (params, d) in [(FullParams::new(2, 0.05, 0.45), 1usize), (FullParams::new(1, 0.0, 0.5), 1), (FullParams::new(1, 0.1, 0.9), 2)] {
        let m = params.blocks(d);
        let blocks = m.pow(d as u32);
        let t = params.samples_per_block(blocks);
        let tol = params.alpha() / 5.0;
        let mut rng = seeded(3);
        let reps = 20_000;
        for step in 0..=10 {
            let p = step as f64 / 10.0;
            let bin = Binomial::new(t as u64, p).unwrap();
            let misses = (0..reps).filter(|_| (bin.sample(&mut rng) as f64 / t as f64 - p).abs() > tol).count();
            assert!(
                (misses as f64 / reps as f64) <= 1.0 / (3.0 * blocks as f64),
                "m={m} t={t} p={p}: {misses}/{reps}"
            );
        }
    }
}

/// `[4]^2` tables with the exact distance to monotone, certified by brute force.
fn block_tables(seed: u64) -> (Vec<(TruthTable, f64)>, Vec<(TruthTable, f64)>) {
    let dom = Domain::grid(4, 2);
    let mut rng = seeded(seed);
    let mut near = Vec::new();
    while near.len() < 10 {
        let mut g = random_k_monotone_table(&dom, 1, &mut rng);
        if near.len() % 2 == 1 {
            let x = rng.random_range(0..16);
            g.flip(x);
        }
        let d = exact_distance_bruteforce(&g, 1).unwrap().as_f64();
        if d <= 1.0 / 16.0 {
            near.push((g, d));
        }
    }
    let mut far = Vec::new();
    let mut tries = 0;
    while far.len() < 10 {
        tries += 1;
        assert!(tries < 1_000_000);
        let g = TruthTable::from_mask(dom.clone(), rng.random_range(0..1u64 << 16));
        if exact_distance(&g, 1).unwrap().as_f64() < 0.5 {
            continue;
        }
        let d = exact_distance_bruteforce(&g, 1).unwrap().as_f64();
        assert_eq!(d, 0.5);
        far.push((g, d));
    }
    (near, far)
}

#[test]
fn learned_block_functions_decide_correctly() {
    let (eps1, eps2) = (1.0 / 16.0, 0.5);
    let params = AgnosticParams::new(1, eps1, eps2);
    let n = 156;
    let lift = BlockMap::new(&Domain::grid(n, 2), 4).unwrap();
    let (near, far) = block_tables(21);
    let mut accepted = 0;
    let mut rejected = 0;
    for trial in 0..50u64 {
        let (g, d) = &near[trial as usize % near.len()];
        assert!(*d <= eps1);
        let f = lift.inflate(g);
        let run = run_agnostic(&f, &params, trial).unwrap();
        assert_eq!(run.blocks_per_axis, vec![39, 39]);
        accepted += run.verdict.accepted() as usize;

        let (g, d) = &far[trial as usize % far.len()];
        assert!(*d >= eps2);
        let f = lift.inflate(g);
        rejected += run_agnostic(&f, &params, 1000 + trial).unwrap().verdict.rejected() as usize;
    }
    assert!(3 * accepted >= 100, "accepted {accepted}/50");
    assert!(3 * rejected >= 100, "rejected {rejected}/50");
}

#[test]
fn inflation_preserves_the_block_distance() {
    let (near, far) = block_tables(4);
    let lift = BlockMap::new(&Domain::grid(8, 2), 4).unwrap();
    for (g, d) in near.iter().chain(&far) {
        assert_eq!(exact_distance(&lift.inflate(g), 1).unwrap().as_f64(), *d);
    }
}

#[test]
fn learner_excess_error_under_label_noise() {
    let params = AgnosticParams::new(1, 1.0 / 16.0, 0.5);
    let tau = params.tau();
    let dom = Domain::grid(4, 2);
    let mut rng = seeded(31);
    let mut good = 0;
    let degree = params.degree(2);
    assert_eq!(degree, 2);
    for _ in 0..100 {
        let g = random_k_monotone_table(&dom, 1, &mut rng);
        let samples = params.learner_samples(16);
        let mut draw = || {
            let x = rng.random_range(0..16);
            (x, g.get(x) ^ rng.random_bool(0.1))
        };
        let h = agnostic_learn_kkms(&dom, &mut draw, degree, samples, RegressionMethod::L1).unwrap();
        let err: f64 = (0..16).map(|x| if h.predict(x) == g.get(x) { 0.1 } else { 0.9 }).sum::<f64>() / 16.0;
        good += (err <= 0.1 + tau + 0.05) as usize;
    }
    assert!(good >= 90, "{good}/100");
}

#[test]
fn linear_program_learner_under_label_noise() {
    // A dictator lies in the degree-1 span, so the program is run on a proper subspace.
    let dom = Domain::grid(4, 2);
    let mut rng = seeded(37);
    let tau = 0.05;
    let mut good = 0;
    for trial in 0..100 {
        let (axis, cut) = (trial % 2, 1 + trial % 3);
        let g = TruthTable::from_fn(dom.clone(), |x| dom.coord(x, axis) >= cut);
        let mut counts = LabelCounts::new(&dom);
        for _ in 0..2000 {
            let x = rng.random_range(0..16);
            counts.add(x, g.get(x) ^ rng.random_bool(0.1));
        }
        let h = fit(&counts, 1, RegressionMethod::L1).unwrap();
        assert_eq!(h.features.len(), 7);
        let err: f64 = (0..16).map(|x| if h.predict(x) == g.get(x) { 0.1 } else { 0.9 }).sum::<f64>() / 16.0;
        good += (err <= 0.1 + tau + 0.05) as usize;
    }
    assert!(good >= 90, "{good}/100");
}

#[test]
fn zero_tolerance_agrees_with_block_estimates() {
    let dom = Domain::line(N_LINE);
    let mut rng = seeded(41);
    let full = FullParams::new(2, 0.0, 0.45);
    let agnostic = AgnosticParams::new(2, 0.0, 0.45);
    let (mut a, mut b) = (0, 0);
    for seed in 0..30 {
        let f = random_k_monotone_table(&dom, 2, &mut rng);
        assert!(is_k_monotone(&f, 2).unwrap());
        a += run_full(&f, &full, seed).unwrap().verdict.accepted() as usize;
        b += run_agnostic(&f, &agnostic, seed).unwrap().verdict.accepted() as usize;
    }
    assert!(3 * a >= 60 && 3 * b >= 60, "{a} vs {b}");
}

#[test]
fn same_seed_same_verdict() {
    let f = far_line_instances(1, 8).remove(0);
    let p = FullParams::new(2, 0.05, 0.45);
    assert_eq!(run_full(&f, &p, 4).unwrap().verdict, run_full(&f, &p, 4).unwrap().verdict);
    let q = AgnosticParams::new(2, 0.0, 0.45);
    assert_eq!(run_agnostic(&f, &q, 4).unwrap().verdict, run_agnostic(&f, &q, 4).unwrap().verdict);
}
