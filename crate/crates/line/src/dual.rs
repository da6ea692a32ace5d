//! Sample and capped-evaluation access to the interval-length distribution.
//!
//! A line function splits `[N]` into maximal constant intervals `I_1, ..., I_s`. The
//! distribution `D_f` gives interval `I_j` mass `|I_j| / N`. Sampling a uniform
//! position and taking its interval draws from `D_f` exactly. Evaluating the mass of
//! that interval means finding both of its ends by reading outward from the sampled
//! position; with a cap `w` the search reads at most `w` positions on each side.

use kmt_core::oracle::Oracle;
use kmt_core::table::TruthTable;
use kmt_core::Domain;
use rand::Rng;

/// Outcome of a capped interval evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capped {
    /// The whole interval `[start, end]` was found.
    Mass { start: usize, end: usize },
    /// An end of the interval lies beyond the window; the interval is longer than the cap.
    ExceedsCap,
}

impl Capped {
    /// Interval length, if found.
    pub fn len(&self) -> Option<usize> {
        match *self {
            Capped::Mass { start, end } => Some(end - start + 1),
            Capped::ExceedsCap => None,
        }
    }
}

/// Access to `D_f` for some line function: positions are the sample handles.
pub trait DualAccess {
    /// Number of positions `N`.
    fn positions(&self) -> usize;

    /// Finds the interval containing `pos`, reading at most `cap` positions per side.
    fn eval(&mut self, pos: usize, cap: Option<usize>) -> Capped;

    /// Queries charged so far.
    fn queries(&self) -> u64;
}

/// Draws a handle whose interval is distributed exactly as `D_f`.
pub fn sample_df<D: DualAccess + ?Sized, R: Rng + ?Sized>(dual: &D, rng: &mut R) -> usize {
    rng.random_range(0..dual.positions())
}

/// Reads outward from `pos` until both interval ends are found or the cap is hit.
/// Returns the outcome and the number of reads.
pub fn explore(n: usize, pos: usize, cap: Option<usize>, mut value: impl FnMut(usize) -> bool) -> (Capped, u64) {
    let w = cap.unwrap_or(usize::MAX);
    let v = value(pos);
    let mut reads = 1u64;
    let start;
    let mut t = 1usize;
    loop {
        if pos < t {
            start = 0;
            break;
        }
        if t > w {
            return (Capped::ExceedsCap, reads);
        }
        let p = pos - t;
        reads += 1;
        if value(p) != v {
            start = p + 1;
            break;
        }
        if p == 0 {
            start = 0;
            break;
        }
        t += 1;
    }
    let end;
    let mut t = 1usize;
    loop {
        if pos + t >= n {
            end = n - 1;
            break;
        }
        if t > w {
            return (Capped::ExceedsCap, reads);
        }
        let p = pos + t;
        reads += 1;
        if value(p) != v {
            end = p - 1;
            break;
        }
        if p == n - 1 {
            end = n - 1;
            break;
        }
        t += 1;
    }
    debug_assert!(start <= pos && pos <= end);
    (Capped::Mass { start, end }, reads)
}

/// Reads [`explore`] would make from `pos` inside the known interval `[start, end]`.
pub fn exploration_cost(n: usize, pos: usize, start: usize, end: usize, cap: Option<usize>) -> (Capped, u64) {
    let w = cap.unwrap_or(usize::MAX);
    let left = if start == 0 {
        if pos <= w { Some(pos) } else { None }
    } else {
        let d = pos - start + 1;
        if d <= w { Some(d) } else { None }
    };
    let Some(left) = left else {
        return (Capped::ExceedsCap, 1 + w as u64);
    };
    let right = if end == n - 1 {
        let d = n - 1 - pos;
        if d <= w { Some(d) } else { None }
    } else {
        let d = end + 1 - pos;
        if d <= w { Some(d) } else { None }
    };
    match right {
        Some(r) => (Capped::Mass { start, end }, (1 + left + r) as u64),
        None => (Capped::ExceedsCap, (1 + left) as u64 + w as u64),
    }
}

/// Dual access backed by a counted oracle; every read is a real query.
pub struct LineDual<'o, 'f> {
    oracle: &'o Oracle<'f>,
}

impl<'o, 'f> LineDual<'o, 'f> {
    pub fn new(oracle: &'o Oracle<'f>) -> Self {
        assert!(oracle.domain().is_line(), "dual access needs a line function");
        LineDual { oracle }
    }
}

impl DualAccess for LineDual<'_, '_> {
    fn positions(&self) -> usize {
        self.oracle.domain().size()
    }

    fn eval(&mut self, pos: usize, cap: Option<usize>) -> Capped {
        let n = self.positions();
        explore(n, pos, cap, |p| self.oracle.query(p)).0
    }

    fn queries(&self) -> u64 {
        self.oracle.queries()
    }
}

/// Dual access over a simulated line function whose reads cost `unit` queries each.
///
/// Values are produced once per position by `value` and remembered. Interval ends
/// are remembered too, and each evaluation is charged exactly the reads that
/// [`explore`] would make, times `unit`.
pub struct CachedDual<F: FnMut(usize) -> bool> {
    n: usize,
    value: F,
    memo: Vec<Option<bool>>,
    span: Vec<Option<(u32, u32)>>,
    unit: u64,
    charged: u64,
}

impl<F: FnMut(usize) -> bool> CachedDual<F> {
    pub fn new(n: usize, unit: u64, value: F) -> Self {
        CachedDual { n, value, memo: vec![None; n], span: vec![None; n], unit, charged: 0 }
    }

    fn get(&mut self, p: usize) -> bool {
        if let Some(v) = self.memo[p] {
            return v;
        }
        let v = (self.value)(p);
        self.memo[p] = Some(v);
        v
    }

    fn interval(&mut self, pos: usize) -> (usize, usize) {
        if let Some((a, b)) = self.span[pos] {
            return (a as usize, b as usize);
        }
        let n = self.n;
        let (found, _) = {
            let mut reader = |p: usize| self.get(p);
            explore(n, pos, None, &mut reader)
        };
        let Capped::Mass { start, end } = found else { unreachable!("uncapped exploration always ends") };
        for p in start..=end {
            self.span[p] = Some((start as u32, end as u32));
        }
        (start, end)
    }

    /// Number of distinct positions simulated so far.
    pub fn simulated(&self) -> usize {
        self.memo.iter().filter(|v| v.is_some()).count()
    }
}

impl<F: FnMut(usize) -> bool> DualAccess for CachedDual<F> {
    fn positions(&self) -> usize {
        self.n
    }

    fn eval(&mut self, pos: usize, cap: Option<usize>) -> Capped {
        let (start, end) = self.interval(pos);
        let (out, reads) = exploration_cost(self.n, pos, start, end, cap);
        self.charged += reads * self.unit;
        out
    }

    fn queries(&self) -> u64 {
        self.charged
    }
}

/// Line function whose constant intervals have the given lengths, in order.
pub fn intervals_function(lengths: &[usize]) -> TruthTable {
    let n: usize = lengths.iter().sum();
    let mut t = TruthTable::zeros(Domain::line(n));
    let mut pos = 0;
    for (i, &len) in lengths.iter().enumerate() {
        assert!(len > 0, "interval lengths must be positive");
        for p in pos..pos + len {
            t.set(p, i % 2 == 1);
        }
        pos += len;
    }
    t
}

/// Lengths of the maximal constant intervals of a line function.
pub fn interval_lengths(f: &TruthTable) -> Vec<usize> {
    let n = f.len();
    let mut out = Vec::new();
    let mut run = 1;
    for p in 1..n {
        if f.get(p) == f.get(p - 1) {
            run += 1;
        } else {
            out.push(run);
            run = 1;
        }
    }
    if n > 0 {
        out.push(run);
    }
    out
}
