//! `RingG`: the repair `g~` materialized column by column during a run.
//!
//! Anchor columns sit every `n / ceil(1/eps)` columns, plus the last column. At
//! initialization the first anchor is read in full and every later anchor is found
//! by scanning downwards from the band of the last nonempty anchor before it. Any
//! other column `j` between anchors `a < j < b` is searched only inside the range
//! spanned by the bands at `a` and `b`:
//!
//! * `hi - 1` is the highest 1-block scanning down from `hi(a) - 1` to `hi(b) - 1`,
//! * `lo + 1` is the lowest 1-block scanning up from `lo(b) + 1` to `lo(a) + 1`,
//!
//! An empty anchor passes on the state `(lo, lo + 1)` of its predecessor: in a
//! 2-monotone function every band to the right of an empty column lies below the
//! bands to its left. An empty right anchor lets the search run to block 1. Every column is thereby a single band, the
//! result depends on `f` only, and for a 2-monotone `f` it coincides with `g~`.
//!
//! All reads of `f` go through a memo and a hard cap; exceeding the cap surfaces as
//! [`KmtError::QueryBudgetExceeded`].

use std::collections::HashMap;

use kmt_core::oracle::{BoolFn, Oracle};
use kmt_core::{KmtError, Result};
use num_rational::Rational64;

use crate::changepoints::grid_shape;
use crate::coarse::{blocks_for, hull, Band, ColumnBlocks};

/// Memoized, capped reads of `f` with the order of first reads recorded.
pub struct Reader<'a> {
    oracle: Oracle<'a>,
    memo: HashMap<usize, bool>,
    cap: u64,
    transcript: Vec<usize>,
}

impl<'a> Reader<'a> {
    pub fn new(f: &'a dyn BoolFn, cap: u64) -> Self {
        Reader { oracle: Oracle::new(f), memo: HashMap::new(), cap, transcript: Vec::new() }
    }

    /// `f` at point index `p`; only the first read of a point is a query.
    pub fn read(&mut self, p: usize) -> Result<bool> {
        if let Some(&v) = self.memo.get(&p) {
            return Ok(v);
        }
        if self.oracle.queries() >= self.cap {
            return Err(KmtError::QueryBudgetExceeded { used: self.oracle.queries(), cap: self.cap });
        }
        let v = self.oracle.query(p);
        self.memo.insert(p, v);
        self.transcript.push(p);
        Ok(v)
    }

    pub fn queries(&self) -> u64 {
        self.oracle.queries()
    }

    /// Points in the order they were first queried.
    pub fn transcript(&self) -> &[usize] {
        &self.transcript
    }
}

/// Lazily computed `g~` of a function on `[n]^2`.
pub struct RingG<'a> {
    reader: Reader<'a>,
    n: usize,
    blocks: ColumnBlocks,
    anchors: Vec<usize>,
    /// Band of each anchor, `None` when the anchor column is empty.
    anchor_bands: Vec<Option<Band>>,
    /// Where the search for the next column starts: the band of the anchor, or for an
    /// empty anchor `(lo, lo + 1)` with `lo` from the state before it.
    anchor_states: Vec<Band>,
    g: HashMap<(usize, usize), bool>,
    raw: HashMap<usize, Option<Band>>,
    resolved: HashMap<usize, Band>,
    init_queries: u64,
}

/// Anchor columns `floor(l * n / ceil(1/eps))` for `l < ceil(1/eps)`, and `n - 1`.
pub fn anchor_columns(n: usize, eps: f64) -> Vec<usize> {
    let count = ((1.0 / eps).ceil() as usize).clamp(1, n);
    let mut a: Vec<usize> = (0..count).map(|l| l * n / count).collect();
    a.push(n - 1);
    a.dedup();
    a
}

impl<'a> RingG<'a> {
    /// Initializes the anchors of `g~` for `f` on `[n]^2` at accuracy `eps`, reading
    /// at most `cap` points of `f` over the lifetime of the structure.
    pub fn new(f: &'a dyn BoolFn, eps: f64, cap: u64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(KmtError::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
        }
        let (n, cols) = grid_shape(f.domain())?;
        if n != cols {
            return Err(KmtError::PreconditionViolated(format!("expected a square grid, got {}", f.domain())));
        }
        let blocks = ColumnBlocks::new(n, blocks_for(eps, n + 2))?;
        let anchors = anchor_columns(n, eps);
        let mut ring = RingG {
            reader: Reader::new(f, cap),
            n,
            blocks,
            anchors: anchors.clone(),
            anchor_bands: Vec::with_capacity(anchors.len()),
            anchor_states: Vec::with_capacity(anchors.len()),
            g: HashMap::new(),
            raw: HashMap::new(),
            resolved: HashMap::new(),
            init_queries: 0,
        };
        let k = ring.blocks.k();
        let first: Vec<bool> = (0..k).map(|b| ring.g_value(anchors[0], b)).collect::<Result<_>>()?;
        let band = hull(&first);
        let mut state = band.unwrap_or_else(|| ring.blocks.top());
        ring.record_anchor(anchors[0], band, state);
        for &a in &anchors[1..] {
            let band = ring.descend(a, state)?;
            state = band.unwrap_or(Band { lo: state.lo, hi: state.lo + 1 });
            ring.record_anchor(a, band, state);
        }
        ring.init_queries = ring.reader.queries();
        Ok(ring)
    }

    fn record_anchor(&mut self, column: usize, band: Option<Band>, state: Band) {
        self.anchor_bands.push(band);
        self.anchor_states.push(state);
        self.raw.insert(column, band);
    }

    /// Value of the coarsened `g` at block `b` of column `j`.
    fn g_value(&mut self, j: usize, b: usize) -> Result<bool> {
        if let Some(&v) = self.g.get(&(j, b)) {
            return Ok(v);
        }
        let n = self.n;
        let reader = &mut self.reader;
        let v = self.blocks.block_value(b, |i| reader.read(i + n * j))?;
        self.g.insert((j, b), v);
        Ok(v)
    }

    /// Band of anchor column `j` found by scanning down from `state`.
    fn descend(&mut self, j: usize, state: Band) -> Result<Option<Band>> {
        let mut hi = None;
        for b in (1..state.hi).rev() {
            if self.g_value(j, b)? {
                hi = Some(b + 1);
                break;
            }
        }
        let Some(hi) = hi else { return Ok(None) };
        let mut t = (state.lo + 1).min(hi - 1);
        if !self.g_value(j, t)? {
            return Ok(Some(Band { lo: t, hi }));
        }
        while t > 1 && self.g_value(j, t - 1)? {
            t -= 1;
        }
        Ok(Some(Band { lo: t - 1, hi }))
    }

    /// Band of a column strictly between anchors `l` and `l + 1`.
    fn between(&mut self, j: usize, l: usize) -> Result<Option<Band>> {
        let left = self.anchor_states[l];
        let right = self.anchor_bands[l + 1];
        let top = left.hi - 1;
        let bottom = right.map_or(1, |r| r.hi - 1);
        let (from, to) = (top.max(bottom), top.min(bottom).max(1));
        let mut hi = None;
        for b in (to..=from).rev() {
            if self.g_value(j, b)? {
                hi = Some(b + 1);
                break;
            }
        }
        let Some(hi) = hi else { return Ok(None) };
        let upper = (left.lo + 1).min(hi - 1);
        let lower = right.map_or(1, |r| r.lo + 1).clamp(1, upper);
        for b in lower..=upper {
            if self.g_value(j, b)? {
                return Ok(Some(Band { lo: b - 1, hi }));
            }
        }
        Ok(Some(Band { lo: upper, hi }))
    }

    /// Band of column `j`, `None` if the column of `g~` is 0.
    pub fn column(&mut self, j: usize) -> Result<Option<Band>> {
        if let Some(&b) = self.raw.get(&j) {
            return Ok(b);
        }
        let l = self.anchors.partition_point(|&a| a < j) - 1;
        let band = self.between(j, l)?;
        self.raw.insert(j, band);
        Ok(band)
    }

    /// Band of column `j` with an empty column placed at `(p, p + 1)`, where `p + 1`
    /// is `hi` of the nearest nonempty column to the right (or 1 if none).
    pub fn resolved(&mut self, j: usize) -> Result<Band> {
        if let Some(b) = self.column(j)? {
            return Ok(b);
        }
        if let Some(&b) = self.resolved.get(&j) {
            return Ok(b);
        }
        let mut empty = vec![j];
        let mut found = Band { lo: 0, hi: 1 };
        for c in j + 1..self.n {
            if let Some(&b) = self.resolved.get(&c) {
                found = b;
                break;
            }
            match self.column(c)? {
                Some(b) => {
                    found = Band { lo: b.hi - 1, hi: b.hi };
                    break;
                }
                None => empty.push(c),
            }
        }
        for c in empty {
            self.resolved.insert(c, found);
        }
        Ok(found)
    }

    /// Resolved `(lseq, hseq)` of column `j` in padded rows, divided by `n + 2`.
    pub fn normalized_changepoints(&mut self, j: usize) -> Result<(Rational64, Rational64)> {
        let band = self.resolved(j)?;
        let (l, h) = self.blocks.band_rows(band);
        let r = self.blocks.padded_rows() as i64;
        Ok((Rational64::new(l as i64, r), Rational64::new(h as i64, r)))
    }

    /// `g~(i, j)` at a real point.
    pub fn value(&mut self, i: usize, j: usize) -> Result<bool> {
        let b = self.blocks.block_of_row(i);
        Ok(self.column(j)?.is_some_and(|band| band.contains(b)))
    }

    /// `f(i, j)` through the shared memo.
    pub fn read_f(&mut self, i: usize, j: usize) -> Result<bool> {
        self.reader.read(i + self.n * j)
    }

    pub fn blocks(&self) -> &ColumnBlocks {
        &self.blocks
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    /// Bands of the anchors as found at initialization.
    pub fn anchor_bands(&self) -> &[Option<Band>] {
        &self.anchor_bands
    }

    /// Queries spent by initialization.
    pub fn init_queries(&self) -> u64 {
        self.init_queries
    }

    /// Queries so far.
    pub fn queries(&self) -> u64 {
        self.reader.queries()
    }

    pub fn transcript(&self) -> &[usize] {
        self.reader.transcript()
    }
}
