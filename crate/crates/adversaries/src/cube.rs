//! Hypercube families: truncated anti-parity and the `g || h` composition.

use kmt_core::{longest_alternating_chain, Domain, KmtError, Result, TruthTable};
use serde_json::json;

use crate::bundle::InstanceBundle;

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Whether weight `w` lies in the middle band `| w - d/2 | <= sqrt(d)`.
pub fn in_anti_parity_window(d: usize, w: usize) -> bool {
    (w as f64 - d as f64 / 2.0).abs() <= (d as f64).sqrt()
}

/// Truncated anti-parity over the coordinates in `s` (0-indexed bits): inside the
/// middle band the value is 1 iff an even number of those bits are set, outside it is 0.
pub fn gen_anti_parity(d: usize, s: &[usize], k: usize) -> Result<InstanceBundle> {
    if let Some(&bad) = s.iter().find(|&&i| i >= d) {
        return Err(KmtError::InvalidParameter(format!("coordinate {bad} outside a {d}-cube")));
    }
    let mask: usize = s.iter().map(|&i| 1usize << i).fold(0, |a, b| a | b);
    let table = TruthTable::from_fn(Domain::cube(d), |x| {
        in_anti_parity_window(d, x.count_ones() as usize) && (x & mask).count_ones() % 2 == 0
    });
    let t = mask.count_ones() as usize;
    let bound = anti_parity_bound(d, t, k);
    Ok(InstanceBundle::new(table, "anti_parity", json!({ "d": d, "s": s, "k": k }), 0, k)?.with_extra("claimed_lower_bound", bound))
}

/// Lower bound on the distance of the truncated anti-parity over `t` of `d`
/// coordinates from k-monotone, with constant 1:
/// `|Z| * sum_{i <= (t-k-1)/2} C(t, i) / 2^d`, where `Z` collects the assignments
/// `z` to the other `d - t` coordinates with `d/2 - sqrt d <= |z| <= d/2 + sqrt d - t`.
pub fn anti_parity_bound(d: usize, t: usize, k: usize) -> f64 {
    if t < k + 1 {
        return 0.0;
    }
    let top = (t - k - 1) / 2;
    let per_fibre: f64 = (0..=top).map(|i| binomial(t, i)).sum();
    let lo = d as f64 / 2.0 - (d as f64).sqrt();
    let hi = d as f64 / 2.0 + (d as f64).sqrt() - t as f64;
    let z: f64 = (0..=d - t).filter(|&w| w as f64 >= lo && w as f64 <= hi).map(|w| binomial(d - t, w)).sum();
    z * per_fibre / 2f64.powi(d as i32)
}

/// Cuts the weight layers of `{0,1}^e` into `k` consecutive bands of nearly equal
/// mass, each within `(1 +- k/sqrt(e)) 2^e / k`. Returns the band of every weight.
pub fn weight_bands(e: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > e + 1 {
        return Err(KmtError::ConstructionFailed(format!("cannot cut {} layers into {k} bands", e + 1)));
    }
    let total = 2f64.powi(e as i32);
    let layers: Vec<f64> = (0..=e).map(|w| binomial(e, w)).collect();
    let mut band_of = vec![0usize; e + 1];
    let mut w = 0usize;
    let mut cum = 0.0;
    for band in 0..k {
        let remaining_bands = k - band - 1;
        if band + 1 == k {
            while w <= e {
                band_of[w] = band;
                w += 1;
            }
            break;
        }
        let ideal = total * (band + 1) as f64 / k as f64;
        // Take at least one layer, leave at least one per remaining band, stop nearest the ideal cut.
        band_of[w] = band;
        cum += layers[w];
        w += 1;
        while w + remaining_bands <= e && (cum + layers[w] - ideal).abs() < (cum - ideal).abs() {
            band_of[w] = band;
            cum += layers[w];
            w += 1;
        }
    }
    let slack = k as f64 / (e as f64).sqrt();
    for band in 0..k {
        let mass: f64 = (0..=e).filter(|&w| band_of[w] == band).map(|w| layers[w]).sum();
        let target = total / k as f64;
        if mass < (1.0 - slack) * target || mass > (1.0 + slack) * target {
            return Err(KmtError::ConstructionFailed(format!(
                "band {band} has mass {mass}, outside (1 +- {slack:.3}) * {target}"
            )));
        }
    }
    Ok(band_of)
}

/// The band staircase `h` on `{0,1}^e`: value `(i + 1) mod 2` on band `i` (1-indexed),
/// so 0 on the lowest band. It is `(k-1)`-monotone.
pub fn band_staircase(e: usize, k: usize) -> Result<TruthTable> {
    let band_of = weight_bands(e, k)?;
    Ok(TruthTable::from_fn(Domain::cube(e), |y| band_of[y.count_ones() as usize] % 2 == 1))
}

/// Anti-majority on `{0,1}^e`: 1 iff fewer than half the bits are set.
pub fn anti_majority(e: usize) -> TruthTable {
    TruthTable::from_fn(Domain::cube(e), |x| 2 * (x.count_ones() as usize) < e)
}

/// `(g || h)(x, y) = g(x) xor h(y)` on `{0,1}^{2e}`, with `x` the low `e` bits and `h`
/// the band staircase for `k`.
pub fn gen_compose_gh(g: &TruthTable, k: usize) -> Result<InstanceBundle> {
    let gd = g.domain();
    if gd.kind() != kmt_core::DomainKind::Cube {
        return Err(KmtError::PreconditionViolated(format!("g must live on a hypercube, got {gd}")));
    }
    let e = gd.d();
    let h = band_staircase(e, k)?;
    let low = (1usize << e) - 1;
    let table = TruthTable::from_fn(Domain::cube(2 * e), |p| g.get(p & low) ^ h.get(p >> e));
    let h_chain = longest_alternating_chain(&h)?;
    let bands: Vec<usize> = weight_bands(e, k)?;
    Ok(InstanceBundle::new(table, "compose_gh", json!({ "d": 2 * e, "k": k, "g": g.to_hex() }), 0, k)?
        .with_extra("h_longest_chain", h_chain)
        .with_extra("band_of_weight", bands))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmt_core::is_k_monotone;

    #[test]
    fn anti_parity_pointwise() {
        let b = gen_anti_parity(4, &[0, 1], 1).unwrap();
        // x = (1,0,1,0): bits 0 and 2 set, weight 2 inside the band, x_1 xor x_2 = 1.
        assert!(!b.table.get(0b0101));
        // On the 4-cube every weight is within sqrt(4) of 2, and 0 has even parity.
        assert!(b.table.get(0));
        let b = gen_anti_parity(9, &[0, 1], 1).unwrap();
        // |0 - 4.5| = 4.5 > 3: outside the window.
        assert!(!b.table.get(0));
    }

    #[test]
    fn bands_for_small_cubes() {
        assert_eq!(weight_bands(6, 3).unwrap(), vec![0, 0, 0, 1, 2, 2, 2]);
        let h = band_staircase(4, 2).unwrap();
        assert!(is_k_monotone(&h, 1).unwrap());
        for (e, k) in [(6, 3), (8, 3), (4, 2), (6, 2)] {
            let h = band_staircase(e, k).unwrap();
            assert!(longest_alternating_chain(&h).unwrap() <= k - 1);
        }
    }

    #[test]
    fn monotone_g_gives_k_monotone_composition() {
        let g = TruthTable::from_fn(Domain::cube(4), |x| x.count_ones() >= 2);
        let b = gen_compose_gh(&g, 2).unwrap();
        assert_eq!(b.meta.k_monotone, Some(true));
    }

    #[test]
    fn anti_majority_composition_is_far() {
        let b = gen_compose_gh(&anti_majority(4), 2).unwrap();
        assert_eq!(b.meta.k_monotone, Some(false));
        assert!(b.meta.certified_distance().unwrap() > 0.0);
    }
}
