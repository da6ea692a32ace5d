//! Superqueries and the one-sided cube tester.

use kmt_core::chain::PartialChainSearch;
use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::rng::seeded;
use kmt_core::table::TruthTable;
use kmt_core::{DomainKind, KmtError, Result, Verdict};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::window::{binomial, middle_window, MiddleWindow};

/// Largest cube dimension the tester accepts; the search runs over all `2^d` points.
pub const CUBE_DIM_LIMIT: usize = 24;

/// Values assumed outside the window during the violation search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// 0 below the window, 1 above it (odd `k`).
    ZeroBelowOneAbove,
    /// 0 on both sides (even `k`).
    ZeroBothSides,
}

impl Truncation {
    pub fn for_k(k: usize) -> Self {
        if k % 2 == 1 {
            Truncation::ZeroBelowOneAbove
        } else {
            Truncation::ZeroBothSides
        }
    }

    fn above(self) -> bool {
        self == Truncation::ZeroBelowOneAbove
    }

    /// The value assumed at weight `w`, or `None` inside the window.
    pub fn value_at(self, window: &MiddleWindow, w: usize) -> Option<bool> {
        if w < window.lo {
            Some(false)
        } else if w > window.hi {
            Some(self.above())
        } else {
            None
        }
    }

    /// `f` with the assumed values written outside the window.
    pub fn apply(self, f: &dyn BoolFn, window: &MiddleWindow) -> TruthTable {
        TruthTable::from_fn(f.domain().clone(), |x| {
            self.value_at(window, x.count_ones() as usize).unwrap_or_else(|| f.value(x))
        })
    }
}

/// Parameters of [`test_cube_one_sided`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeParams {
    pub k: usize,
    pub eps: f64,
    /// Sampled points are `ceil(c / eps)`.
    pub c: f64,
}

impl CubeParams {
    pub fn new(k: usize, eps: f64) -> Self {
        CubeParams { k, eps, c: 8.0 }
    }

    pub fn samples(&self) -> usize {
        (self.c / self.eps).ceil() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(KmtError::InvalidParameter("k must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(KmtError::InvalidParameter(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.c > 0.0) {
            return Err(KmtError::InvalidParameter(format!("sample constant must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// Number of window points comparable to a point of weight `weight` (itself included).
pub fn superquery_size(d: usize, weight: usize, window: &MiddleWindow) -> u128 {
    let below: u128 = (window.lo..=weight).map(|w| binomial(weight, w)).sum();
    let above: u128 = (weight + 1..=window.hi).map(|w| binomial(d - weight, w - weight)).sum();
    below + above
}

/// Reads `f` on every window point below or above `x`, `x` included. Each point is
/// read once.
pub fn superquery(oracle: &Oracle<'_>, x: usize, window: &MiddleWindow) -> Vec<(usize, bool)> {
    let d = window.d;
    let wx = x.count_ones() as usize;
    assert!(window.contains(wx), "superquery centre must lie in the window");
    let mut out = Vec::new();
    let mut sub = x;
    loop {
        if sub.count_ones() as usize >= window.lo {
            out.push((sub, oracle.query(sub)));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & x;
    }
    let comp = !x & ((1usize << d) - 1);
    let mut add = comp;
    while add != 0 {
        if wx + add.count_ones() as usize <= window.hi {
            out.push((x | add, oracle.query(x | add)));
        }
        add = (add - 1) & comp;
    }
    out
}

/// A uniform point among those with weight in the window.
fn sample_middle<R: Rng + ?Sized>(window: &MiddleWindow, rng: &mut R) -> usize {
    let mut t = rng.random_range(0..window.inside);
    let mut weight = window.lo;
    loop {
        let layer = binomial(window.d, weight);
        if t < layer {
            break;
        }
        t -= layer;
        weight += 1;
    }
    sample(rng, window.d, weight).iter().fold(0usize, |x, i| x | 1 << i)
}

/// Runs the superquery tester on a function over `{0,1}^d`.
///
/// The verdict reason records the truncation used outside the window.
pub fn test_cube_one_sided(f: &dyn BoolFn, params: &CubeParams, seed: u64) -> Result<Verdict> {
    params.validate()?;
    let dom = f.domain();
    if dom.kind() != DomainKind::Cube {
        return Err(KmtError::PreconditionViolated(format!("cube tester got domain {dom}")));
    }
    let d = dom.d();
    if d > CUBE_DIM_LIMIT {
        return Err(KmtError::budget("cube dimension", d, CUBE_DIM_LIMIT));
    }
    let window = middle_window(d, params.eps)?;
    let truncation = Truncation::for_k(params.k);
    let oracle = Oracle::new(f);
    let mut rng = seeded(seed);

    let mut seen: Vec<Option<bool>> = vec![None; dom.size()];
    for _ in 0..params.samples() {
        let x = sample_middle(&window, &mut rng);
        for (y, v) in superquery(&oracle, x, &window) {
            seen[y] = Some(v);
        }
    }
    let queried = seen.clone();
    for (y, slot) in seen.iter_mut().enumerate() {
        if let Some(v) = truncation.value_at(&window, y.count_ones() as usize) {
            *slot = Some(v);
        }
    }
    let reason = match truncation {
        Truncation::ZeroBelowOneAbove => "truncation=zero-below-one-above",
        Truncation::ZeroBothSides => "truncation=zero-both-sides",
    };
    Ok(match PartialChainSearch::find_violation(dom, &seen, params.k) {
        Some(chain) => {
            assert!(
                chain.iter().all(|&y| queried[y].is_some()),
                "a truncated value cannot sit on a violating chain"
            );
            Verdict::reject(oracle.queries(), seed).with_reason(reason).with_witness(chain)
        }
        None => Verdict::accept(oracle.queries(), seed).with_reason(reason),
    })
}
