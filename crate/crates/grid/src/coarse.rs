//! Row blocks of padded columns and the canonical repair `g~` of the coarsened function.
//!
//! Every column of `f` on `[n]^2` is padded with a virtual 0 below row 0 and above row
//! `n - 1`, giving `R = n + 2` padded rows. The padded rows are cut into `K` blocks.
//! The coarsened `g` has value `v` on a block whose two endpoints both read `v`, and
//! 0 on a block whose endpoints disagree. Blocks 0 and `K - 1` contain a padding row,
//! so `g` is 0 there and they cost nothing to read. `g~` replaces each column of `g`
//! by the hull of its 1-blocks.

use kmt_core::coarsen::BlockMap;
use kmt_core::oracle::BoolFn;
use kmt_core::{Domain, KmtError, Result, TruthTable};
use serde::{Deserialize, Serialize};

use crate::changepoints::grid_shape;

/// Number of row blocks per padded column, `ceil(16 / eps)` capped at `R`.
pub fn blocks_for(eps: f64, padded_rows: usize) -> usize {
    ((16.0 / eps).ceil() as usize).clamp(3, padded_rows)
}

/// Nonempty band of a column in block units: blocks `b` with `lo < b < hi` are 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Band {
    pub lo: usize,
    pub hi: usize,
}

impl Band {
    pub fn contains(&self, b: usize) -> bool {
        self.lo < b && b < self.hi
    }
}

/// Block geometry of the padded columns of an `n x n` grid.
#[derive(Debug, Clone)]
pub struct ColumnBlocks {
    n: usize,
    map: BlockMap,
}

impl ColumnBlocks {
    /// `k` blocks over the `n + 2` padded rows.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 3 {
            return Err(KmtError::InvalidParameter(format!("need at least 3 row blocks, got {k}")));
        }
        Ok(ColumnBlocks { n, map: BlockMap::new(&Domain::line(n + 2), k)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Padded rows `R = n + 2`.
    pub fn padded_rows(&self) -> usize {
        self.n + 2
    }

    /// Number of blocks `K`.
    pub fn k(&self) -> usize {
        self.map.num_blocks()
    }

    /// Block holding real row `i`.
    pub fn block_of_row(&self, i: usize) -> usize {
        self.map.axis_block(0, i + 1)
    }

    /// First and last padded row of block `b`.
    pub fn endpoints(&self, b: usize) -> (usize, usize) {
        let r = self.map.axis_range(0, b);
        (r.start, r.end - 1)
    }

    /// Band `(K - 2, K - 1)`, the starting point of a downward search.
    pub fn top(&self) -> Band {
        Band { lo: self.k() - 2, hi: self.k() - 1 }
    }

    /// 1-indexed `(lseq, hseq)` of a band over the padded rows.
    pub fn band_rows(&self, band: Band) -> (usize, usize) {
        let start = |b: usize| self.map.axis_range(0, b).start;
        (start(band.lo + 1), start(band.hi) + 1)
    }

    /// Value of `g` on block `b`, reading padded rows through `read`. Blocks touching
    /// the padding are 0 without any read.
    pub fn block_value(&self, b: usize, mut read: impl FnMut(usize) -> Result<bool>) -> Result<bool> {
        if b == 0 || b + 1 == self.k() {
            return Ok(false);
        }
        let (s, e) = self.endpoints(b);
        let vs = read(s - 1)?;
        if s == e {
            return Ok(vs);
        }
        Ok(vs && read(e - 1)?)
    }
}

/// Hull of the 1-blocks of a fully known column of `g`.
pub fn hull(values: &[bool]) -> Option<Band> {
    let first = values.iter().position(|&v| v)?;
    let last = values.iter().rposition(|&v| v)?;
    Some(Band { lo: first - 1, hi: last + 1 })
}

/// `g~` computed from a full read of `f`.
#[derive(Debug, Clone)]
pub struct TildeG {
    pub blocks: ColumnBlocks,
    /// The band of each column, `None` for a zero column.
    pub bands: Vec<Option<Band>>,
    /// `g~` on the unpadded `n x n` grid.
    pub table: TruthTable,
}

/// Builds `g~` for `f` on `[n]^2` with `blocks_for(eps, n + 2)` row blocks.
pub fn build_tilde_g(f: &dyn BoolFn, eps: f64) -> Result<TildeG> {
    let (n, cols) = grid_shape(f.domain())?;
    if n != cols {
        return Err(KmtError::PreconditionViolated(format!("expected a square grid, got {}", f.domain())));
    }
    let blocks = ColumnBlocks::new(n, blocks_for(eps, n + 2))?;
    let k = blocks.k();
    let bands: Vec<Option<Band>> = (0..n)
        .map(|j| {
            let g: Vec<bool> = (0..k)
                .map(|b| blocks.block_value(b, |i| Ok(f.value(i + n * j))).expect("full reads cannot fail"))
                .collect();
            hull(&g)
        })
        .collect();
    let table = TruthTable::from_fn(f.domain().clone(), |p| {
        let (i, j) = (p % n, p / n);
        bands[j].is_some_and(|band| band.contains(blocks.block_of_row(i)))
    });
    Ok(TildeG { blocks, bands, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let cb = ColumnBlocks::new(8, 5).unwrap();
        assert_eq!(cb.padded_rows(), 10);
        assert_eq!((0..5).map(|b| cb.endpoints(b)).collect::<Vec<_>>(), vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]);
        assert_eq!(cb.block_of_row(0), 0);
        assert_eq!(cb.block_of_row(7), 4);
        assert_eq!(cb.band_rows(Band { lo: 0, hi: 4 }), (2, 9));
        assert!(ColumnBlocks::new(8, 2).is_err());
    }

    #[test]
    fn stars_become_zero() {
        let cb = ColumnBlocks::new(8, 5).unwrap();
        // Padded rows 2..=3 are real rows 1..=2.
        let col = [false, true, false, false, false, false, false, false];
        assert!(!cb.block_value(1, |i| Ok(col[i])).unwrap());
        let col = [false, true, true, false, false, false, false, false];
        assert!(cb.block_value(1, |i| Ok(col[i])).unwrap());
        assert!(!cb.block_value(0, |_| panic!("padding blocks are free")).unwrap());
    }

    #[test]
    fn hulls() {
        assert_eq!(hull(&[false, false, false]), None);
        assert_eq!(hull(&[false, true, false, true, false]), Some(Band { lo: 0, hi: 4 }));
    }

    #[test]
    fn zero_function() {
        let f = TruthTable::zeros(Domain::grid(40, 2));
        let t = build_tilde_g(&f, 0.5).unwrap();
        assert_eq!(t.table.count_ones(), 0);
        assert!(t.bands.iter().all(Option::is_none));
    }
}
