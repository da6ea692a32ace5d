//! Families on the square grid `[n]^2`.
//!
//! Coordinate 0 is the row `i` (position inside a column), coordinate 1 the column `j`.

use kmt_core::rng::seeded;
use kmt_core::{Domain, KmtError, Result, TruthTable};
use rand::Rng;
use serde_json::json;

use crate::bundle::InstanceBundle;

fn non_increasing(n: usize, lo: usize, hi: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Band between two monotone staircases: `f(i, j) = 1` iff `a(j) <= i < b(j)` with
/// `a <= b` both non-increasing in `j`. The top and bottom rows are 0, every column
/// reads `0..0 1..1 0..0`, and `f` is 2-monotone.
pub fn gen_band(n: usize, seed: u64) -> Result<InstanceBundle> {
    if n < 3 {
        return Err(KmtError::InvalidParameter(format!("a band needs n >= 3, got {n}")));
    }
    let mut rng = seeded(seed);
    let u = non_increasing(n, 1, n - 1, &mut rng);
    let w = non_increasing(n, 1, n - 1, &mut rng);
    let a: Vec<usize> = u.iter().zip(&w).map(|(x, y)| *x.min(y)).collect();
    let b: Vec<usize> = u.iter().zip(&w).map(|(x, y)| *x.max(y)).collect();
    let dom = Domain::grid(n, 2);
    let table = TruthTable::from_fn(dom.clone(), |p| {
        let (i, j) = (dom.coord(p, 0), dom.coord(p, 1));
        a[j] <= i && i < b[j]
    });
    InstanceBundle::new(table, "band", json!({ "n": n }), seed, 2)
}

/// Diagonal stripes of width `width`: `f(i, j) = 1` iff `floor((i + j) / width)` is even.
/// Every maximal chain crosses many stripes, so the function is far from 2-monotone
/// for small widths.
pub fn gen_stripes(n: usize, width: usize, k: usize) -> Result<InstanceBundle> {
    if width == 0 {
        return Err(KmtError::InvalidParameter("stripe width must be positive".into()));
    }
    let dom = Domain::grid(n, 2);
    let table = TruthTable::from_fn(dom.clone(), |p| ((dom.coord(p, 0) + dom.coord(p, 1)) / width) % 2 == 0);
    InstanceBundle::new(table, "stripes", json!({ "n": n, "width": width, "k": k }), 0, k)
}
