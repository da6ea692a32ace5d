//! The acceptance suite: fourteen end-to-end checks, each against an exact oracle or
//! a concrete budget.
//!
//! Every check returns a [`CriterionReport`] with the measured numbers, so a failing
//! line says by how much it failed. Errors inside a check become failing reports.
//! Each check also has a wall-clock limit that counts toward its verdict.

use std::fmt;
use std::time::{Duration, Instant};

use kmt_adversaries::grid::{gen_band, gen_stripes};
use kmt_adversaries::random::random_k_monotone_table;
use kmt_adversaries::{anti_majority, evenly_cut, gen_compose_gh, gen_gv_line, generate, resolve_file, staircase};
use kmt_core::coarsen::{check_coarsening_lemma, BlockMap};
use kmt_core::extend::extend_partial;
use kmt_core::io::{FunctionFile, Repr};
use kmt_core::isotonic::{l1_isotonic_exact, Direction};
use kmt_core::matching::{greedy_violation_matching, max_violation_matching_exact};
use kmt_core::rng::seeded;
use kmt_core::{
    exact_distance_bruteforce, exact_distance_line_dp, is_k_monotone, is_violation_chain, BoolFn,
    Domain, KmtError, Oracle, PartialChainSearch, Result, TruthTable, Verdict,
};
use kmt_cube::{binomial, middle_window, test_cube_one_sided, CubeParams, MiddleWindow};
use kmt_grid::{is_two_column_wise_monotone, test_grid2_2monotone, ColumnChangepoints, Grid2Params, SequenceRepair};
use kmt_highdim::{
    agnostic_learn_kkms, boolean_fourier, influence, run_agnostic, run_full, AgnosticParams, CoordinateBasis,
    FullParams, RegressionMethod,
};
use kmt_l1::{l1_distance_to_monotone, l1_hamming_sides, round_m, run_l1, Engine, RealFunction, ThresholdLift};
use kmt_line::dual::intervals_function;
use kmt_line::support::exact_expectation;
use kmt_line::{
    support_size_estimate, test_line_one_sided, test_line_two_sided, LineDual, OneSidedParams, TwoSidedParams,
};
use num_rational::{Ratio, Rational64};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::experiment::{run_experiment, write_records, ExperimentConfig};
use crate::stats::Rate;

/// Identifier, title and time limit of each criterion.
pub const CRITERIA: [(usize, &str, u64); 14] = [
    (1, "line DP equals brute force", 60),
    (2, "one-sidedness on the line", 30),
    (3, "soundness and budget on g_v lines", 60),
    (4, "two-sided query count independent of k", 300),
    (5, "support-size estimation", 30),
    (6, "majority coarsening stays within kd/m", 60),
    (7, "Fourier suite", 120),
    (8, "block-estimation tester end to end", 180),
    (9, "learning-based tester end to end", 300),
    (10, "L1 to Hamming bridge", 120),
    (11, "2-monotonicity tester on the grid", 300),
    (12, "extendability and violation matchings", 120),
    (13, "hypercube tester", 180),
    (14, "reproducibility", 60),
];

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] c{:<2} {} ({:.1}s of {}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

/// Collects named checks; the criterion passes when all of them hold.
#[derive(Debug, Default)]
struct Tally {
    pass: bool,
    parts: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { pass: true, parts: Vec::new() }
    }

    fn check(&mut self, ok: bool, part: impl Into<String>) {
        let part = part.into();
        self.pass &= ok;
        self.parts.push(if ok { part } else { format!("FAILED {part}") });
    }

    fn note(&mut self, part: impl Into<String>) {
        self.parts.push(part.into());
    }
}

/// Parses `c7`, `7` or `C7`.
pub fn parse_criterion(name: &str) -> Option<usize> {
    let id: usize = name.trim().trim_start_matches(['c', 'C']).parse().ok()?;
    (1..=CRITERIA.len()).contains(&id).then_some(id)
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize) -> Result<CriterionReport> {
    let &(_, title, secs) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| KmtError::InvalidParameter(format!("no criterion c{id}; valid names are c1..c14")))?;
    let start = Instant::now();
    let outcome = match id {
        1 => c1_oracle_equivalence(),
        2 => c2_one_sided_line(),
        3 => c3_gv_soundness(),
        4 => c4_k_independence(),
        5 => c5_support_size(),
        6 => c6_coarsening(),
        7 => c7_fourier(),
        8 => c8_block_estimation(),
        9 => c9_learning(),
        10 => c10_l1_bridge(),
        11 => c11_grid(),
        12 => c12_extend_and_matching(),
        13 => c13_cube(),
        _ => c14_reproducibility(),
    };
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(secs);
    let (pass, detail) = match outcome {
        Ok(t) => (t.pass, t.parts.join("; ")),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= limit;
    let detail = if in_time { detail } else { format!("{detail}; FAILED runtime over the limit") };
    Ok(CriterionReport { id, title, pass: pass && in_time, detail, elapsed, limit })
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id).expect("ids come from the table")).collect()
}

fn witness_ok(f: &TruthTable, v: &Verdict, k: usize) -> bool {
    v.witness.as_ref().is_some_and(|w| is_violation_chain(f.domain(), |x| f.get(x), w, k))
}

fn c1_oracle_equivalence() -> Result<Tally> {
    let mut t = Tally::new();
    let mut cases = 0usize;
    let mut bad = Vec::new();
    for n in 1..=10usize {
        for mask in 0..1u64 << n {
            let f = TruthTable::from_mask(Domain::line(n), mask);
            for k in 1..=3 {
                let dp = exact_distance_line_dp(&f, k)?;
                let bf = exact_distance_bruteforce(&f, k)?;
                if dp != bf || (dp.num == 0) != is_k_monotone(&f, k)? {
                    bad.push(format!("n={n} mask={mask:#b} k={k}"));
                }
                cases += 1;
            }
        }
    }
    t.check(bad.is_empty(), format!("{cases} (f, k) pairs over n <= 10, {} mismatches {:?}", bad.len(), bad.first()));
    Ok(t)
}

fn c2_one_sided_line() -> Result<Tally> {
    let mut t = Tally::new();
    let n = 60;
    let dom = Domain::line(n);
    let eps = 0.1;
    for k in 1..=3 {
        let mut rng = seeded(200 + k as u64);
        let mut rejects = 0;
        for _ in 0..500 {
            let f = random_k_monotone_table(&dom, k, &mut rng);
            if !is_k_monotone(&f, k)? {
                return Err(KmtError::ConstructionFailed(format!("generator returned a non-{k}-monotone line")));
            }
            for seed in 0..20 {
                rejects += test_line_one_sided(&f, &OneSidedParams::new(k, eps), seed)?.rejected() as usize;
            }
        }
        t.check(rejects == 0, format!("k={k}: {rejects} rejects in 10000 runs"));
    }
    // Coin-flip lines are rejected often; every rejection must name a violating chain.
    let mut rng = seeded(299);
    let (mut rejects, mut verified) = (0, 0);
    for i in 0..600u64 {
        let k = 1 + (i % 3) as usize;
        let f = TruthTable::from_fn(dom.clone(), |_| rng.random_bool(0.5));
        let v = test_line_one_sided(&f, &OneSidedParams::new(k, eps), i)?;
        if v.rejected() {
            rejects += 1;
            verified += witness_ok(&f, &v, k) as usize;
        }
    }
    t.check(rejects > 0 && verified == rejects, format!("random lines: {verified}/{rejects} witnesses verified"));
    Ok(t)
}

fn c3_gv_soundness() -> Result<Tally> {
    let mut t = Tally::new();
    let (n, k, eps) = (48_000, 8, 0.05);
    let mut instances = Vec::new();
    let mut discarded = 0;
    let mut seed = 0u64;
    while instances.len() < 200 {
        let b = gen_gv_line(n, k, eps, seed)?;
        seed += 1;
        let d = b.meta.exact_distance.as_ref().map(|d| d.ratio());
        if d.is_some_and(|d| d >= Ratio::new(1, 20)) {
            instances.push(b.table);
        } else {
            discarded += 1;
        }
    }
    t.note(format!("200 DP-certified instances, {discarded} below 0.05 discarded"));
    let params = OneSidedParams::new(k, eps);
    let runs: Vec<(bool, bool, u64)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let v = test_line_one_sided(f, &params, 1000 + i as u64)?;
            Ok((v.rejected(), !v.rejected() || witness_ok(f, &v, k), v.queries))
        })
        .collect::<Result<_>>()?;
    let rate = Rate::new(runs.iter().filter(|r| r.0).count(), runs.len());
    let max_q = runs.iter().map(|r| r.2).max().unwrap_or(0);
    let budget = (200.0 * k as f64 / eps) as u64;
    t.check(rate.lower >= 2.0 / 3.0, format!("rejected {rate}"));
    t.check(max_q <= budget, format!("max queries {max_q} <= {budget}"));
    t.check(runs.iter().all(|r| r.1), "every rejection has a verified witness");
    Ok(t)
}

/// `k + 1` pieces of roughly equal length with jittered cuts; exactly k-monotone.
fn jittered_staircase(n: usize, k: usize, rng: &mut impl Rng) -> TruthTable {
    let step = n / (k + 1);
    let jitter = step / 4;
    let cuts: Vec<usize> = (1..=k).map(|j| j * step + rng.random_range(0..=2 * jitter) - jitter).collect();
    staircase(n, &cuts, false)
}

fn c4_k_independence() -> Result<Tally> {
    let mut t = Tally::new();
    let (n, eps) = (20_000, 0.2);
    let mut means = Vec::new();
    for k in [10usize, 40] {
        let mut rng = seeded(400 + k as u64);
        let mut near = Vec::new();
        for i in 0..100 {
            let f = if i % 2 == 0 { evenly_cut(n, k) } else { jittered_staircase(n, k, &mut rng) };
            if exact_distance_line_dp(&f, k)?.num != 0 {
                return Err(KmtError::ConstructionFailed("near instance is not k-monotone".into()));
            }
            near.push(f);
        }
        let mut far = Vec::new();
        while far.len() < 100 {
            let f = evenly_cut(n, rng.random_range(6 * k..=12 * k));
            if exact_distance_line_dp(&f, k)?.as_f64() >= eps {
                far.push(f);
            }
        }
        let params = TwoSidedParams::new(k, eps).without_delegation();
        let run = |fs: &[TruthTable], base: u64| -> Result<Vec<Verdict>> {
            fs.par_iter().enumerate().map(|(i, f)| test_line_two_sided(f, &params, base + i as u64)).collect()
        };
        let a = run(&near, 10_000)?;
        let r = run(&far, 20_000)?;
        let acc = Rate::new(a.iter().filter(|v| v.accepted()).count(), 100);
        let rej = Rate::new(r.iter().filter(|v| v.rejected()).count(), 100);
        let mean = a.iter().chain(&r).map(|v| v.queries as f64).sum::<f64>() / 200.0;
        t.check(acc.at_least(2.0 / 3.0), format!("k={k}: accepted {acc}"));
        t.check(rej.at_least(2.0 / 3.0), format!("k={k}: rejected {rej}"));
        means.push(mean);
    }
    let gap = (means[1] - means[0]).abs() / means[0];
    t.check(gap <= 0.10, format!("mean queries {:.0} vs {:.0}, gap {:.1}%", means[0], means[1], 100.0 * gap));
    Ok(t)
}

fn c5_support_size() -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = seeded(64);
    let (mut exact, mut worst) = (0, 100);
    for _ in 0..20 {
        let mut lengths = Vec::new();
        let mut left = 64;
        while left > 0 {
            let l = rng.random_range(1..=left.min(20));
            lengths.push(l);
            left -= l;
        }
        let s = lengths.len();
        exact += (exact_expectation(&lengths, None) == Ratio::from_integer(s as u64)) as usize;
        let f = intervals_function(&lengths);
        let good = (0..100u64)
            .filter(|&seed| {
                let o = Oracle::new(&f);
                let mut dual = LineDual::new(&o);
                let est = support_size_estimate(&mut dual, 0.25, None, None, &mut seeded(seed));
                (est.estimate - s as f64).abs() <= 16.0
            })
            .count();
        worst = worst.min(good);
    }
    t.check(exact == 20, format!("exact expectation equals S on {exact}/20 distributions"));
    t.check(worst >= 90, format!("worst distribution within 16 in {worst}/100 runs"));
    Ok(t)
}

fn c6_coarsening() -> Result<Tally> {
    let mut t = Tally::new();
    let cases = [(16usize, 2usize, 2usize, vec![2usize, 4, 8, 16]), (27, 3, 1, vec![3, 9, 27])];
    for (n, d, k, ms) in cases {
        let dom = Domain::grid(n, d);
        let mut rng = seeded(600 + n as u64);
        let mut failures = 0;
        for _ in 0..10_000 {
            // check_coarsening_lemma errors on inputs that are not k-monotone.
            let f = random_k_monotone_table(&dom, k, &mut rng);
            for &m in &ms {
                failures += !check_coarsening_lemma(&f, k, m)? as usize;
            }
        }
        t.check(failures == 0, format!("({n},{d},{k}) m in {ms:?}: {failures} failures over 10^4 instances"));
    }
    Ok(t)
}

fn c7_fourier() -> Result<Tally> {
    let mut t = Tally::new();
    let ortho = (2..=8).map(|r| CoordinateBasis::gram_schmidt(r).map(|b| b.orthonormality_error())).collect::<Result<Vec<_>>>()?;
    let worst = ortho.iter().copied().fold(0.0, f64::max);
    t.check(worst <= 1e-12, format!("basis orthonormality error {worst:.1e} for r = 2..8"));

    let mut rng = seeded(700);
    let (mut parseval, mut spectral) = (0.0f64, 0.0f64);
    for dom in [Domain::grid(3, 2), Domain::cube(3)] {
        for i in 0..1000 {
            let density = 0.05 + 0.9 * (i as f64 / 1000.0);
            let f = TruthTable::from_fn(dom.clone(), |_| rng.random_bool(density));
            let ft = boolean_fourier(&f)?;
            parseval = parseval.max((ft.squared_norm() - 1.0).abs());
            spectral = spectral.max((ft.spectral_influence() - influence(&f)?.total).abs());
        }
    }
    t.check(parseval <= 1e-9 && spectral <= 1e-9, format!("Parseval error {parseval:.1e}, influence error {spectral:.1e}"));

    let dom = Domain::grid(3, 3);
    let mut over = 0;
    let mut worst_ratio: f64 = 0.0;
    for i in 0..10_000 {
        let k = 1 + i % 3;
        let f = random_k_monotone_table(&dom, k, &mut rng);
        if !is_k_monotone(&f, k)? {
            return Err(KmtError::ConstructionFailed("generator returned a non-k-monotone table".into()));
        }
        let total = influence(&f)?.total;
        over += (total > k as f64 * 3f64.sqrt() + 1e-12) as usize;
        worst_ratio = worst_ratio.max(total / (k as f64 * 3f64.sqrt()));
    }
    t.check(over == 0, format!("I[f] <= k sqrt(d) on 10^4 k-monotone [3]^3 tables (max ratio {worst_ratio:.3})"));

    let mut tail_fail = 0;
    let mut nontrivial = 0;
    for dom in [Domain::grid(3, 2), Domain::grid(3, 3), Domain::cube(6)] {
        for i in 0..1500 {
            let density = [0.01, 0.03, 0.1, 0.5][i % 4];
            let f = TruthTable::from_fn(dom.clone(), |_| rng.random_bool(density));
            let ft = boolean_fourier(&f)?;
            let total = influence(&f)?.total;
            for eps in [0.1, 0.25] {
                for k in [total, total.ceil()] {
                    if k == 0.0 {
                        continue;
                    }
                    let tail = ft.tail_above(k / eps);
                    tail_fail += (tail > eps + 1e-12) as usize;
                    nontrivial += (k / eps < dom.d() as f64 && tail > 0.0) as usize;
                }
            }
        }
    }
    t.check(tail_fail == 0 && nontrivial > 100, format!("tail above I[f]/eps <= eps: {tail_fail} failures, {nontrivial} nonempty tails"));
    Ok(t)
}

fn c8_block_estimation() -> Result<Tally> {
    let mut t = Tally::new();
    let n = 240;
    let dom = Domain::line(n);
    let params = FullParams::new(2, 0.05, 0.45);
    let mut rng = seeded(800);
    let mut near = Vec::new();
    while near.len() < 50 {
        let mut f = random_k_monotone_table(&dom, 2, &mut rng);
        for _ in 0..rng.random_range(0..=12) {
            f.flip(rng.random_range(0..n));
        }
        if exact_distance_line_dp(&f, 2)?.as_f64() <= 0.05 {
            near.push(f);
        }
    }
    let mut far = Vec::new();
    while far.len() < 50 {
        let f = if far.len() % 2 == 0 {
            let w = rng.random_range(1..=4);
            let phase = rng.random_range(0..2 * w);
            TruthTable::from_fn(dom.clone(), |i| (i + phase) / w % 2 == 1)
        } else {
            TruthTable::from_fn(dom.clone(), |_| rng.random_bool(0.5))
        };
        if exact_distance_line_dp(&f, 2)?.as_f64() >= 0.45 {
            far.push(f);
        }
    }
    let run = |fs: &[TruthTable], base: u64| -> Result<Vec<(bool, bool)>> {
        fs.par_iter()
            .enumerate()
            .map(|(i, f)| {
                let r = run_full(f, &params, base + i as u64)?;
                let exact = r.blocks_per_axis == [25] && r.verdict.queries == (25 * r.samples_per_block) as u64;
                Ok((r.verdict.accepted(), exact))
            })
            .collect()
    };
    let a = run(&near, 100)?;
    let r = run(&far, 200)?;
    let t_per = params.samples_per_block(25);
    let acc = Rate::new(a.iter().filter(|x| x.0).count(), 50);
    let rej = Rate::new(r.iter().filter(|x| !x.0).count(), 50);
    t.check(params.blocks(1) == 25, format!("m = {}", params.blocks(1)));
    t.check(a.iter().chain(&r).all(|x| x.1), format!("every run used exactly m t = 25 x {t_per} queries"));
    t.check(acc.at_least(2.0 / 3.0), format!("accepted {acc}"));
    t.check(rej.at_least(2.0 / 3.0), format!("rejected {rej}"));
    Ok(t)
}

fn c9_learning() -> Result<Tally> {
    let mut t = Tally::new();
    let (eps1, eps2) = (1.0 / 16.0, 0.5);
    let params = AgnosticParams::new(1, eps1, eps2);
    let block_dom = Domain::grid(4, 2);
    let mut rng = seeded(900);
    let mut near = Vec::new();
    while near.len() < 10 {
        let mut g = random_k_monotone_table(&block_dom, 1, &mut rng);
        if near.len() % 2 == 1 {
            g.flip(rng.random_range(0..16));
        }
        if exact_distance_bruteforce(&g, 1)?.as_f64() <= eps1 {
            near.push(g);
        }
    }
    let mut far = Vec::new();
    while far.len() < 10 {
        let g = TruthTable::from_mask(block_dom.clone(), rng.random_range(0..1u64 << 16));
        if exact_distance_bruteforce(&g, 1)?.as_f64() >= eps2 {
            far.push(g);
        }
    }
    let lift = BlockMap::new(&Domain::grid(156, 2), 4)?;
    let trials: Vec<(bool, bool)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let a = run_agnostic(&lift.inflate(&near[i as usize % 10]), &params, i)?;
            let r = run_agnostic(&lift.inflate(&far[i as usize % 10]), &params, 1000 + i)?;
            Ok((a.verdict.accepted(), r.verdict.rejected()))
        })
        .collect::<Result<_>>()?;
    let acc = Rate::new(trials.iter().filter(|x| x.0).count(), 50);
    let rej = Rate::new(trials.iter().filter(|x| x.1).count(), 50);
    t.check(acc.at_least(2.0 / 3.0), format!("accepted {acc}"));
    t.check(rej.at_least(2.0 / 3.0), format!("rejected {rej}"));

    // Monotone block tables under 10% label noise: opt = 0.1.
    let tau = params.tau();
    let degree = params.degree(2);
    let samples = params.learner_samples(16);
    let mut good = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = random_k_monotone_table(&block_dom, 1, &mut rng);
        let mut draw = || {
            let x = rng.random_range(0..16);
            (x, g.get(x) ^ rng.random_bool(0.1))
        };
        let h = agnostic_learn_kkms(&block_dom, &mut draw, degree, samples, RegressionMethod::L1)?;
        let err = (0..16).map(|x| if h.predict(x) == g.get(x) { 0.1 } else { 0.9 }).sum::<f64>() / 16.0;
        good += (err <= 0.1 + tau + 0.05) as usize;
        worst = worst.max(err - 0.1);
    }
    t.check(good >= 90, format!("learner excess error <= tau + 0.05 in {good}/100 runs (tau {tau:.3}, worst {worst:.3})"));
    Ok(t)
}

/// Domains and resolutions with `N m <= 20`.
const SMALL_L1: [(&[usize], usize); 9] = [
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

fn c10_l1_bridge() -> Result<Tally> {
    let mut t = Tally::new();
    let r = |p: i64, q: i64| Rational64::new(p, q);
    let mut rng = seeded(1000);
    let (mut level_bad, mut transfer_bad, mut equal_bad, mut positive) = (0, 0, 0, 0);
    for i in 0..1000 {
        let (dims, m) = SMALL_L1[i % SMALL_L1.len()];
        let f = RealFunction::from_fn(Domain::rect(dims.to_vec()), |_| r(rng.random_range(1..=m as i64), m as i64))?;
        let lift = ThresholdLift::new(&f, m)?;
        for x in 0..f.domain().size() {
            let ones = (0..m).filter(|&j| lift.value(lift.point(x, j))).count();
            level_bad += (r(ones as i64, m as i64) != f.value(x)) as usize;
        }
        transfer_bad += (f.is_monotone() != is_k_monotone(&lift, 1)?) as usize;
        let (real, hamming) = l1_hamming_sides(&f, m)?;
        equal_bad += (real != hamming || l1_distance_to_monotone(&f)? != real) as usize;
        positive += (real > r(0, 1)) as usize;
    }
    t.check(level_bad == 0 && transfer_bad == 0, format!("level averages and monotonicity transfer exact on 10^3 instances"));
    t.check(equal_bad == 0, format!("L1 = Hamming on 10^3 instances ({positive} not monotone), {equal_bad} mismatches"));

    let mut round_bad = 0;
    for m in [2usize, 4] {
        for _ in 0..1000 {
            let f = RealFunction::from_fn(Domain::line(8), |_| {
                let q = rng.random_range(1..=97i64);
                r(rng.random_range(0..=q), q)
            })?;
            let before = l1_isotonic_exact(f.values(), Direction::NonDecreasing).distance;
            let after = l1_isotonic_exact(round_m(&f, m)?.values(), Direction::NonDecreasing).distance;
            let gap = if before > after { before - after } else { after - before };
            round_bad += (gap > r(1, m as i64)) as usize;
        }
    }
    t.check(round_bad == 0, format!("rounding moves the distance by <= 1/m on 2000 instances, {round_bad} violations"));

    let n = 240;
    let (eps1, eps2) = (0.05, 0.4);
    let mut near = Vec::new();
    while near.len() < 50 {
        let mut v: Vec<i64> = (0..n).map(|_| rng.random_range(0..=1000)).collect();
        v.sort_unstable();
        if near.len() % 2 == 1 {
            for _ in 0..rng.random_range(1..=12) {
                let i = rng.random_range(0..n);
                v[i] = rng.random_range(0..=1000);
            }
        }
        let f = RealFunction::new(Domain::line(n), v.iter().map(|&p| r(p, 1000)).collect())?;
        if l1_distance_to_monotone(&f)? <= r(1, 20) {
            near.push(f);
        }
    }
    let mut far = Vec::new();
    while far.len() < 50 {
        let split = rng.random_range(100..=140);
        let f = RealFunction::from_fn(Domain::line(n), |x| {
            r(if x < split { rng.random_range(880..=1000) } else { rng.random_range(0..=120) }, 1000)
        })?;
        if l1_distance_to_monotone(&f)? >= r(2, 5) {
            far.push(f);
        }
    }
    let decide = |fs: &[RealFunction], base: u64| -> Result<usize> {
        let v: Vec<bool> = fs
            .par_iter()
            .enumerate()
            .map(|(i, f)| Ok(run_l1(f, eps1, eps2, base + i as u64, Engine::Full)?.verdict.accepted()))
            .collect::<Result<_>>()?;
        Ok(v.into_iter().filter(|&a| a).count())
    };
    let acc = Rate::new(decide(&near, 100)?, 50);
    let rej = Rate::new(50 - decide(&far, 200)?, 50);
    t.check(acc.at_least(2.0 / 3.0), format!("n=240 tester accepted {acc}"));
    t.check(rej.at_least(2.0 / 3.0), format!("rejected {rej}"));
    Ok(t)
}

/// Columns of `rows` padded rows whose interior holds one (possibly empty) run of ones.
fn column_choices(rows: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(1, 1)];
    for l in 1..rows - 1 {
        for h in l + 2..=rows {
            out.push((l, h));
        }
    }
    out
}

/// All 2-column-wise-monotone functions on `rows x cols` with zero first and last rows.
fn all_banded(rows: usize, cols: usize) -> impl Iterator<Item = TruthTable> {
    let choices = column_choices(rows);
    let total = choices.len().pow(cols as u32);
    (0..total).map(move |mut code| {
        let mut cp = ColumnChangepoints { rows, lseq: vec![0; cols], hseq: vec![0; cols] };
        for j in 0..cols {
            let (l, h) = choices[code % choices.len()];
            code /= choices.len();
            cp.lseq[j] = l;
            cp.hseq[j] = h;
        }
        cp.band_table()
    })
}

fn c11_grid() -> Result<Tally> {
    let mut t = Tally::new();
    let n = 256;
    let p = Grid2Params::new(0.1);
    let accepted: Vec<bool> = (0..60u64)
        .into_par_iter()
        .map(|s| Ok(test_grid2_2monotone(&gen_band(n, s)?.table, &p, s)?.accepted()))
        .collect::<Result<_>>()?;
    let acc = Rate::new(accepted.iter().filter(|&&a| a).count(), 60);
    t.check(acc.at_least(2.0 / 3.0), format!("bands accepted {acc}"));

    let mut rng = seeded(1100);
    let random = TruthTable::from_fn(Domain::grid(n, 2), |_| rng.random_bool(0.5));
    let far = [("stripes(4)", gen_stripes(n, 4, 2)?.table), ("stripes(32)", gen_stripes(n, 32, 2)?.table), ("random", random)];
    for (name, f) in &far {
        let lb = greedy_violation_matching(f, 2)?.lower_bound;
        let rejected = (0..30u64)
            .into_par_iter()
            .map(|s| Ok(test_grid2_2monotone(f, &p, s)?.rejected()))
            .collect::<Result<Vec<bool>>>()?;
        let rej = Rate::new(rejected.iter().filter(|&&r| r).count(), 30);
        t.check(lb.as_f64() >= 0.1 && rej.at_least(2.0 / 3.0), format!("{name} (greedy {lb}) rejected {rej}"));
    }

    // Scaling at n = 512: at n = 256 the smallest eps reads the whole grid.
    let mut means = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let p = Grid2Params::new(eps);
        let q: Vec<u64> = (0..20u64)
            .into_par_iter()
            .map(|s| Ok(test_grid2_2monotone(&gen_band(512, s)?.table, &p, s)?.queries))
            .collect::<Result<_>>()?;
        means.push(q.iter().sum::<u64>() as f64 / q.len() as f64);
    }
    let linear = means[1] <= 2.5 * means[0] && means[2] <= 5.0 * means[0];
    t.check(linear, format!("n=512 mean queries {:.0} / {:.0} / {:.0} at eps 0.2 / 0.1 / 0.05", means[0], means[1], means[2]));

    // Changepoint characterization, exhaustively on small padded grids.
    let (mut forward, mut forward_bad) = (0, 0);
    for (rows, cols) in [(3, 4), (4, 4), (5, 4), (6, 4), (7, 3), (8, 3)] {
        for f in all_banded(rows, cols) {
            if ColumnChangepoints::of(&f)?.resolved().non_increasing() {
                forward += 1;
                forward_bad += !is_k_monotone(&f, 2)? as usize;
            }
        }
    }
    let (mut converse, mut converse_bad) = (0, 0);
    for mask in 0..1u64 << 16 {
        let f = TruthTable::from_mask(Domain::grid(4, 2), mask);
        if !is_two_column_wise_monotone(&f)? || !is_k_monotone(&f, 2)? {
            continue;
        }
        let padded = TruthTable::from_fn(Domain::rect(vec![6, 4]), |q| {
            let (i, j) = (q % 6, q / 6);
            (1..=4).contains(&i) && f.get(i - 1 + 4 * j)
        });
        converse += 1;
        converse_bad += !ColumnChangepoints::of(&padded)?.resolved().non_increasing() as usize;
    }
    let mut band_bad = 0;
    for seed in 0..10_000 {
        band_bad += !ColumnChangepoints::of(&gen_band(32, seed)?.table)?.resolved().non_increasing() as usize;
    }
    t.check(
        forward_bad + converse_bad + band_bad == 0,
        format!("sequence characterization: {forward} + {converse} exhaustive cases, 10^4 random bands, {} failures", forward_bad + converse_bad + band_bad),
    );

    let (mut repairs, mut repair_bad) = (0, 0);
    for rows in [5, 6] {
        for f in all_banded(rows, 4) {
            let repair = SequenceRepair::fit(&ColumnChangepoints::of(&f)?);
            let exact = exact_distance_bruteforce(&f, 2)?;
            repairs += 1;
            repair_bad += (Rational64::new(exact.num as i64, exact.den as i64) > repair.bound()) as usize;
        }
    }
    for side in 3..=8 {
        for _ in 0..2000 {
            let choices = column_choices(side + 2);
            let mut cp = ColumnChangepoints { rows: side + 2, lseq: vec![0; side], hseq: vec![0; side] };
            for j in 0..side {
                (cp.lseq[j], cp.hseq[j]) = choices[rng.random_range(0..choices.len())];
            }
            let f = cp.band_table();
            let repair = SequenceRepair::fit(&ColumnChangepoints::of(&f)?);
            let g = repair.fits.band_table();
            repairs += 1;
            let flips = Rational64::new(g.hamming(&f) as i64, f.len() as i64);
            repair_bad += (!is_k_monotone(&g, 2)? || flips > repair.bound()) as usize;
        }
    }
    t.check(repair_bad == 0, format!("sequence repair bounds the distance in {repairs} cases, {repair_bad} failures"));
    Ok(t)
}

fn c12_extend_and_matching() -> Result<Tally> {
    let mut t = Tally::new();
    let (mut extended, mut extend_bad) = (0, 0);
    for dom in [Domain::grid(3, 2), Domain::cube(3)] {
        let n = dom.size();
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let partial: Vec<Option<bool>> = (0..n)
                .map(|_| {
                    let v = [None, Some(false), Some(true)][c % 3];
                    c /= 3;
                    v
                })
                .collect();
            for k in 1..=2 {
                if !PartialChainSearch::is_k_monotone(&dom, &partial, k) {
                    continue;
                }
                extended += 1;
                let ok = match extend_partial(&dom, &partial, k) {
                    Ok(g) => {
                        is_k_monotone(&g, k)? && partial.iter().enumerate().all(|(x, v)| v.is_none_or(|b| g.get(x) == b))
                    }
                    Err(_) => false,
                };
                extend_bad += !ok as usize;
            }
        }
    }
    t.check(extend_bad == 0, format!("{extended} k-monotone partial assignments extended, {extend_bad} failures"));

    let (mut cases, mut matching_bad, mut greedy_bad) = (0, 0, 0);
    for dom in [Domain::grid(3, 2), Domain::cube(3), Domain::line(9), Domain::rect(vec![2, 4])] {
        for mask in 0..1u64 << dom.size() {
            let f = TruthTable::from_mask(dom.clone(), mask);
            for k in 1..=2 {
                let exact = exact_distance_bruteforce(&f, k)?.num as usize;
                let best = max_violation_matching_exact(&f, k)?;
                let greedy = greedy_violation_matching(&f, k)?.len();
                cases += 1;
                // eps |P| / (k + 1) with eps |P| the number of flips.
                matching_bad += ((k + 1) * best < exact) as usize;
                greedy_bad += (greedy > exact) as usize;
            }
        }
    }
    t.check(matching_bad == 0, format!("max matching >= eps|P|/(k+1) on {cases} cases with |P| <= 9"));
    t.check(greedy_bad == 0, format!("greedy bound <= exact distance on {cases} cases"));
    Ok(t)
}

fn c13_cube() -> Result<Tally> {
    let mut t = Tally::new();
    let (d, k, eps) = (12usize, 3usize, 0.3);
    let params = CubeParams::new(k, eps);
    let dom = Domain::cube(d);
    let mut rng = seeded(1300);
    let tables: Vec<TruthTable> = (0..1000).map(|_| random_k_monotone_table(&dom, k, &mut rng)).collect();
    let rejects: usize = tables
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            if !is_k_monotone(f, k)? {
                return Err(KmtError::ConstructionFailed("generator returned a non-3-monotone cube table".into()));
            }
            Ok(test_cube_one_sided(f, &params, i as u64)?.rejected() as usize)
        })
        .sum::<Result<usize>>()?;
    t.check(rejects == 0, format!("{rejects} rejects on 10^3 3-monotone instances"));

    let window = middle_window(d, eps)?;
    let counted = (0..1usize << d).filter(|x| !window.contains(x.count_ones() as usize)).count() as u128;
    let by_sums: u128 = (0..=d).filter(|&w| !window.contains(w)).map(|w| binomial(d, w)).sum();
    let narrower = MiddleWindow::new(d, window.lo + 1, window.hi - 1)?;
    t.check(
        counted == window.outside && by_sums == window.outside && window.complement_within(eps) && !narrower.complement_within(eps),
        format!("window [{}, {}] leaves {} <= {:.1} points", window.lo, window.hi, window.outside, eps * 2f64.powi(d as i32 - 1)),
    );

    let mut best_certified: f64 = 0.0;
    for (name, g) in [("anti-majority", anti_majority(6)), ("not-x1", TruthTable::from_fn(Domain::cube(6), |x| x & 1 == 0))] {
        let f = gen_compose_gh(&g, k)?.table;
        let lb = greedy_violation_matching(&f, k)?.lower_bound;
        best_certified = best_certified.max(lb.as_f64());
        let runs: Vec<(bool, bool)> = (0..200u64)
            .into_par_iter()
            .map(|s| {
                let v = test_cube_one_sided(&f, &params, s)?;
                let inside = v.witness.as_ref().is_none_or(|w| w.iter().all(|&x| window.contains(x.count_ones() as usize)));
                Ok((v.rejected(), !v.rejected() || (witness_ok(&f, &v, k) && inside)))
            })
            .collect::<Result<_>>()?;
        let rej = Rate::new(runs.iter().filter(|r| r.0).count(), 200);
        t.check(rej.lower >= 2.0 / 3.0 && runs.iter().all(|r| r.1), format!("g||h with g = {name} (greedy {lb}) rejected {rej}, witnesses verified"));
    }
    // No composed instance could be certified at eps: greedy matchings cap at 1/(k+1).
    t.check(best_certified >= eps, format!("best certified distance {best_certified:.3} vs required {eps}"));
    Ok(t)
}

fn c14_reproducibility() -> Result<Tally> {
    let mut t = Tally::new();
    let config = ExperimentConfig::parse(
        r#"{"cells": [
            {"tester": "line-one-sided", "family": "gv", "domain": "line",
             "grid": {"n": [4000], "k": [2, 8], "eps": [0.1]}, "trials": 20, "base_seed": 14, "certify": true},
            {"tester": "cube", "family": "compose_gh", "domain": "cube",
             "grid": {"n": [2], "d": [8], "k": [2], "eps": [0.3]}, "trials": 10, "base_seed": 15},
            {"tester": "highdim-full", "family": "noisy", "domain": "grid",
             "grid": {"n": [20], "d": [2], "k": [1], "eps1": [0.05], "eps2": [0.45]},
             "family_params": {"base": {"name": "random_k_monotone"}, "rho": 0.02}, "trials": 6, "base_seed": 16}
        ], "jobs": 2}"#,
    )?;
    let write = || -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        write_records(&run_experiment(&config)?.records, &mut buf)?;
        Ok(buf)
    };
    let (a, b) = (write()?, write()?);
    let rows = a.iter().filter(|&&c| c == b'\n').count() - 2;
    let errors = String::from_utf8_lossy(&a).matches(",ERROR,").count();
    t.check(a == b && errors == 0, format!("experiment rerun gives byte-identical records ({rows} rows, {} bytes)", a.len()));

    let mut rng = seeded(1400);
    let mut files = 0;
    let mut bad = 0;
    for dom in [Domain::line(37), Domain::grid(5, 3), Domain::cube(9), Domain::rect(vec![3, 7])] {
        for _ in 0..25 {
            let f = TruthTable::from_fn(dom.clone(), |_| rng.random_bool(0.5));
            let text = FunctionFile::from_table(&f).to_json();
            let back = FunctionFile::parse(&text)?;
            bad += (back.table()? != f || back.to_json() != text) as usize;
            let real = RealFunction::from_fn(dom.clone(), |_| Rational64::new(rng.random_range(0..=7), 7))?;
            bad += (RealFunction::parse(&real.to_json())? != real) as usize;
            files += 2;
        }
    }
    for (family, dom, params) in [
        ("gv", Domain::line(500), json!({"k": 3, "eps": 0.1})),
        ("band", Domain::grid(16, 2), json!({})),
        ("random_k_monotone", Domain::cube(5), json!({"k": 2})),
    ] {
        let file = FunctionFile {
            domain: dom.spec(),
            repr: Repr::Generator { name: family.into(), params: params.clone(), seed: 5 },
        };
        let back = FunctionFile::parse(&file.to_json())?;
        bad += (resolve_file(&back)? != generate(&dom, family, &params, 5)?.table) as usize;
        files += 1;
    }
    t.check(bad == 0, format!("{files} function files round-trip, {bad} mismatches"));
    Ok(t)
}

/// One line per criterion, for listings.
pub fn describe() -> Vec<String> {
    CRITERIA.iter().map(|(id, title, secs)| format!("c{id}: {title} (limit {secs}s)")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_names() {
        assert_eq!(parse_criterion("c7"), Some(7));
        assert_eq!(parse_criterion("C14"), Some(14));
        assert_eq!(parse_criterion("3"), Some(3));
        assert_eq!(parse_criterion("c0"), None);
        assert_eq!(parse_criterion("c15"), None);
        assert!(run_criterion(15).is_err());
    }

    #[test]
    fn tally_keeps_failures_visible() {
        let mut t = Tally::new();
        t.check(true, "a");
        t.check(false, "b");
        assert!(!t.pass);
        assert_eq!(t.parts.join("; "), "a; FAILED b");
    }

    #[test]
    fn staircases_have_k_cuts() {
        let mut rng = seeded(1);
        for k in [1, 10, 40] {
            let f = jittered_staircase(20_000, k, &mut rng);
            assert_eq!(kmt_core::longest_alternating_chain(&f).unwrap(), k);
        }
    }
}
