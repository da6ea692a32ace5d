//! Line families.

use kmt_core::coarsen::BlockMap;
use kmt_core::rng::seeded;
use kmt_core::{Domain, KmtError, Result, TruthTable};
use rand::Rng;
use serde_json::json;

use crate::bundle::InstanceBundle;

/// Line function that starts at `start` and flips at every position in `cuts`.
pub fn staircase(n: usize, cuts: &[usize], start: bool) -> TruthTable {
    let mut sorted = cuts.to_vec();
    sorted.sort_unstable();
    TruthTable::from_fn(Domain::line(n), |i| start ^ (sorted.partition_point(|&c| c <= i) % 2 == 1))
}

/// Line function cut into `pieces` equal runs, alternating from 0.
pub fn evenly_cut(n: usize, pieces: usize) -> TruthTable {
    TruthTable::from_fn(Domain::line(n), |i| (i * pieces / n) % 2 == 1)
}

/// The `g_v` family: `K = round(k/eps)` blocks, block `2i` (0-indexed) holds `v_i`,
/// every other block holds 1, and each `v_i` is 0 with probability `min(6 eps, 1)`.
///
/// Metadata: exact distance by the line DP, `blocks`, and the realized `zero_blocks`.
pub fn gen_gv_line(n: usize, k: usize, eps: f64, seed: u64) -> Result<InstanceBundle> {
    if k == 0 || !(eps > 0.0 && eps <= 1.0) {
        return Err(KmtError::InvalidParameter(format!("g_v needs k >= 1 and eps in (0, 1], got k={k}, eps={eps}")));
    }
    let ideal = k as f64 / eps;
    let blocks = (ideal.round() as usize).clamp(1, n);
    let p = (6.0 * eps).min(1.0);
    let mut rng = seeded(seed);
    let v: Vec<bool> = (0..blocks.div_ceil(2)).map(|_| !rng.random_bool(p)).collect();
    let zero_blocks = v.iter().filter(|&&b| !b).count();
    let table = gv_table(n, blocks, &v)?;
    let params = json!({ "n": n, "k": k, "eps": eps });
    Ok(InstanceBundle::new(table, "gv", params, seed, k)?
        .with_extra("blocks", blocks)
        .with_extra("integral_blocks", (ideal - blocks as f64).abs() < 1e-9)
        .with_extra("zero_blocks", zero_blocks))
}

/// `g_v` for an explicit vector `v` of length `ceil(blocks / 2)`.
pub fn gv_table(n: usize, blocks: usize, v: &[bool]) -> Result<TruthTable> {
    if v.len() != blocks.div_ceil(2) {
        return Err(KmtError::InvalidParameter(format!("{blocks} blocks need {} values, got {}", blocks.div_ceil(2), v.len())));
    }
    let bm = BlockMap::new(&Domain::line(n), blocks)?;
    let values: Vec<bool> = (0..blocks).map(|b| b % 2 == 1 || v[b / 2]).collect();
    Ok(bm.inflate(&TruthTable::from_bools(bm.block_domain().clone(), &values)?))
}

/// Expected number of zero blocks of [`gen_gv_line`].
pub fn gv_expected_zero_blocks(k: usize, eps: f64) -> f64 {
    let blocks = (k as f64 / eps).round();
    (6.0 * eps).min(1.0) * (blocks / 2.0).ceil()
}
