//! Random k-monotone functions and noise.
//!
//! Off the line, a random monotone potential `phi` is built (down-set sums of sparse
//! random weights plus a random positive linear term) and `c <= k` thresholds are
//! drawn among its values. The function is `#{thresholds below phi(x)} mod 2`. Along
//! any chain the count never decreases and stays at most `k`, so the result is
//! k-monotone; it is re-checked anyway.

use kmt_core::coarsen::BlockMap;
use kmt_core::rng::seeded;
use kmt_core::{is_k_monotone, Domain, KmtError, Result, TruthTable};
use rand::seq::index::sample;
use rand::Rng;
use serde_json::json;

use crate::bundle::InstanceBundle;
use crate::line::staircase;

/// Random k-monotone table on any domain (not bundled, no metadata).
pub fn random_k_monotone_table(domain: &Domain, k: usize, rng: &mut impl Rng) -> TruthTable {
    let n = domain.size();
    if domain.is_line() {
        let start = rng.random_bool(0.5);
        let max_cuts = if start { k - 1 } else { k }.min(n.saturating_sub(1));
        let cuts = rng.random_range(0..=max_cuts);
        let mut positions: Vec<usize> = sample(rng, n - 1, cuts).into_iter().map(|c| c + 1).collect();
        positions.sort_unstable();
        return staircase(n, &positions, start);
    }
    let density = rng.random_range(0.05..0.6);
    let mut phi: Vec<f64> = (0..n).map(|_| if rng.random_bool(density) { rng.random::<f64>() } else { 0.0 }).collect();
    for axis in 0..domain.d() {
        let stride = domain.strides()[axis];
        for x in 0..n {
            if domain.coord(x, axis) > 0 {
                phi[x] += phi[x - stride];
            }
        }
    }
    let weights: Vec<f64> = (0..domain.d()).map(|_| rng.random::<f64>() * rng.random_range(0.0..3.0)).collect();
    for (x, p) in phi.iter_mut().enumerate() {
        *p += (0..domain.d()).map(|a| weights[a] * domain.coord(x, a) as f64).sum::<f64>();
    }
    let levels = rng.random_range(0..=k);
    let mut thresholds: Vec<f64> = (0..levels).map(|_| phi[rng.random_range(0..n)]).collect();
    thresholds.sort_by(f64::total_cmp);
    TruthTable::from_fn(domain.clone(), |x| thresholds.iter().filter(|&&t| phi[x] >= t).count() % 2 == 1)
}

/// Random verified k-monotone instance.
pub fn gen_random_k_monotone(domain: &Domain, k: usize, seed: u64) -> Result<InstanceBundle> {
    if k == 0 {
        return Err(KmtError::InvalidParameter("k must be at least 1".into()));
    }
    let table = random_k_monotone_table(domain, k, &mut seeded(seed));
    if !is_k_monotone(&table, k)? {
        return Err(KmtError::ConstructionFailed("generated table is not k-monotone".into()));
    }
    InstanceBundle::new(table, "random_k_monotone", json!({ "k": k }), seed, k)
}

/// Random k-monotone table on the `m`-per-axis block domain, inflated to `domain`.
pub fn gen_random_k_monotone_blocks(domain: &Domain, m: usize, k: usize, seed: u64) -> Result<InstanceBundle> {
    let bm = BlockMap::new(domain, m)?;
    let coarse = random_k_monotone_table(bm.block_domain(), k.max(1), &mut seeded(seed));
    let table = bm.inflate(&coarse);
    if !is_k_monotone(&table, k)? {
        return Err(KmtError::ConstructionFailed("inflated table is not k-monotone".into()));
    }
    InstanceBundle::new(table, "random_k_monotone_blocks", json!({ "k": k, "m": m }), seed, k)
}

/// Flips exactly `floor(rho * N)` points chosen uniformly without replacement and
/// recomputes the metadata for the same `k`.
pub fn gen_noisy(base: &InstanceBundle, rho: f64, seed: u64) -> Result<InstanceBundle> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(KmtError::InvalidParameter(format!("noise rate must lie in [0, 1], got {rho}")));
    }
    let n = base.table.len();
    let flips = (rho * n as f64).floor() as usize;
    let mut table = base.table.clone();
    for p in sample(&mut seeded(seed), n, flips) {
        table.flip(p);
    }
    let params = json!({ "base": base.family, "base_params": base.params, "base_seed": base.seed, "rho": rho });
    Ok(InstanceBundle::new(table, "noisy", params, seed, base.meta.k)?.with_extra("flips", flips))
}
