//! Column changepoints of functions on two-dimensional grids.
//!
//! Coordinate 0 is the row `i` and coordinate 1 the column `j`, so a column is the
//! line `i = 1..=rows` at fixed `j`. Positions in this module are 1-indexed. For a
//! column `c`,
//!
//! * `lseq = min{i : c(i) != c(1)} - 1`,
//! * `hseq = max{i : c(i) != c(rows)} + 1`,
//!
//! and a constant column gets `(1, 1)`. When the first and last rows are 0, a
//! 2-monotone column is `0..0 1..1 0..0` and its ones are exactly `lseq < i < hseq`.

use kmt_core::isotonic::{l1_isotonic_exact, Direction};
use kmt_core::oracle::BoolFn;
use kmt_core::{Domain, KmtError, Result, TruthTable};
use num_rational::Rational64;

/// `(lseq, hseq)` of one fully known column, 1-indexed.
pub fn extract_changepoints(column: &[bool]) -> (usize, usize) {
    let Some((&first, _)) = column.split_first() else {
        return (1, 1);
    };
    let last = column[column.len() - 1];
    let low = column.iter().position(|&v| v != first);
    let high = column.iter().rposition(|&v| v != last);
    match (low, high) {
        (Some(l), Some(h)) => (l, h + 2),
        _ => (1, 1),
    }
}

/// Rows and columns of a two-dimensional domain.
pub fn grid_shape(domain: &Domain) -> Result<(usize, usize)> {
    match domain.dims() {
        [rows, cols] => Ok((*rows, *cols)),
        _ => Err(KmtError::PreconditionViolated(format!("expected a two-dimensional grid, got {domain}"))),
    }
}

/// Column `j` of `f`, bottom row first.
pub fn column(f: &dyn BoolFn, j: usize) -> Vec<bool> {
    let rows = f.domain().dims()[0];
    (0..rows).map(|i| f.value(i + rows * j)).collect()
}

/// Whether every column of `f` is 2-monotone, i.e. has no `1, 0, 1` pattern.
pub fn is_two_column_wise_monotone(f: &dyn BoolFn) -> Result<bool> {
    let (_, cols) = grid_shape(f.domain())?;
    Ok((0..cols).all(|j| column_alternations(&column(f, j)) <= 2))
}

/// Longest alternating chain starting with 1 along a single column.
fn column_alternations(col: &[bool]) -> usize {
    let runs = 1 + col.windows(2).filter(|w| w[0] != w[1]).count();
    match col.first() {
        None => 0,
        Some(true) => runs,
        Some(false) => runs - 1,
    }
}

/// The changepoint sequences of all columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnChangepoints {
    pub rows: usize,
    pub lseq: Vec<usize>,
    pub hseq: Vec<usize>,
}

impl ColumnChangepoints {
    /// Reads every column of `f`.
    pub fn of(f: &dyn BoolFn) -> Result<Self> {
        let (rows, cols) = grid_shape(f.domain())?;
        let (lseq, hseq) = (0..cols).map(|j| extract_changepoints(&column(f, j))).unzip();
        Ok(ColumnChangepoints { rows, lseq, hseq })
    }

    pub fn len(&self) -> usize {
        self.lseq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lseq.is_empty()
    }

    /// Whether column `j` carries the constant-column value `(1, 1)`.
    pub fn is_constant(&self, j: usize) -> bool {
        self.lseq[j] == 1 && self.hseq[j] == 1
    }

    /// The sequences with every constant column moved next to its right neighbour.
    ///
    /// A constant column takes `(p, p + 1)` with `p = hseq - 1` of the nearest
    /// non-constant column to its right, or `p = 1` when there is none. The band
    /// `lseq < i < hseq` stays empty, and for a 2-monotone `f` with zero first and
    /// last rows both resolved sequences are non-increasing. Under the raw `(1, 1)`
    /// value they need not be: a column with a band followed by an empty column
    /// already breaks it when the empty column sits to the left.
    pub fn resolved(&self) -> ColumnChangepoints {
        let mut out = self.clone();
        let mut next: Option<usize> = None;
        for j in (0..self.len()).rev() {
            if self.is_constant(j) {
                let p = next.map_or(1, |h| h - 1);
                out.lseq[j] = p;
                out.hseq[j] = p + 1;
            } else {
                next = Some(self.hseq[j]);
            }
        }
        out
    }

    /// Whether both sequences are non-increasing in `j`.
    pub fn non_increasing(&self) -> bool {
        let dec = |s: &[usize]| s.windows(2).all(|w| w[0] >= w[1]);
        dec(&self.lseq) && dec(&self.hseq)
    }

    /// The function that is 1 exactly on `lseq(j) < i < hseq(j)`.
    pub fn band_table(&self) -> TruthTable {
        let rows = self.rows;
        let dom = Domain::rect(vec![rows, self.len()]);
        TruthTable::from_fn(dom, |p| {
            let (i, j) = (p % rows + 1, p / rows);
            self.lseq[j] < i && i < self.hseq[j]
        })
    }
}

/// Exact L1 distances of the resolved sequences to non-increasing, normalized so that
/// they are comparable with Hamming distance on the `rows x cols` domain: each value
/// is divided by `rows` and the sum over columns by `cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRepair {
    pub l1_lseq: Rational64,
    pub l1_hseq: Rational64,
    /// Bands built from the two isotonic fits.
    pub fits: ColumnChangepoints,
}

impl SequenceRepair {
    /// Fits both resolved sequences of `cp` to the non-increasing cone.
    pub fn fit(cp: &ColumnChangepoints) -> SequenceRepair {
        let r = cp.resolved();
        let rows = Rational64::from_integer(r.rows as i64);
        let as_rat = |s: &[usize]| s.iter().map(|&v| Rational64::from_integer(v as i64)).collect::<Vec<_>>();
        let lf = l1_isotonic_exact(&as_rat(&r.lseq), Direction::NonIncreasing);
        let hf = l1_isotonic_exact(&as_rat(&r.hseq), Direction::NonIncreasing);
        let to_int = |v: &[Rational64]| v.iter().map(|x| x.to_integer() as usize).collect::<Vec<_>>();
        SequenceRepair {
            l1_lseq: lf.distance / rows,
            l1_hseq: hf.distance / rows,
            fits: ColumnChangepoints { rows: r.rows, lseq: to_int(&lf.fit), hseq: to_int(&hf.fit) },
        }
    }

    /// `l1_lseq + l1_hseq`, an upper bound on the distance of a 2-column-wise-monotone
    /// function with zero first and last rows to the 2-monotone class.
    pub fn bound(&self) -> Rational64 {
        self.l1_lseq + self.l1_hseq
    }
}
