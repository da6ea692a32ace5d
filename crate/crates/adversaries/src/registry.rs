//! Name-based generator lookup, used by function files and the CLI.
//!
//! | name | domain | params |
//! |------|--------|--------|
//! | `constant` | any | `value` (bool) |
//! | `staircase` | line | `cuts` (positions), `start` (bool) |
//! | `alternating` | line | `pieces` |
//! | `gv` | line | `k`, `eps` |
//! | `anti_parity` | cube | `s` (0-indexed coordinates) or `t` (random subset), `k` |
//! | `compose_gh` | cube (even `d`) | `k`, `g` = `monotone` \| `anti_majority` \| `random_monotone` |
//! | `random_k_monotone` | any | `k`, optional `m` (inflate from `m` blocks per axis) |
//! | `band` | grid, `d = 2` | none |
//! | `stripes` | grid, `d = 2` | `width`, `k` |
//! | `noisy` | any | `base` (`{name, params}`), `rho` |
//!
//! Every family also accepts `k` for its metadata (default 1).

use kmt_core::io::{FunctionFile, Repr};
use kmt_core::rng::{seeded, split};
use kmt_core::{Domain, DomainKind, KmtError, Result, TruthTable};
use rand::seq::index::sample;
use serde_json::{json, Value};

use crate::bundle::InstanceBundle;
use crate::cube::{anti_majority, gen_anti_parity, gen_compose_gh};
use crate::grid::{gen_band, gen_stripes};
use crate::line::{evenly_cut, gen_gv_line, staircase};
use crate::random::{gen_noisy, gen_random_k_monotone, gen_random_k_monotone_blocks, random_k_monotone_table};

/// Names accepted by [`generate`].
pub const FAMILIES: [&str; 10] = [
    "constant",
    "staircase",
    "alternating",
    "gv",
    "anti_parity",
    "compose_gh",
    "random_k_monotone",
    "band",
    "stripes",
    "noisy",
];

fn get_usize(params: &Value, key: &str) -> Result<Option<usize>> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| KmtError::Parse(format!("parameter `{key}` must be a non-negative integer"))),
    }
}

fn need_usize(params: &Value, key: &str) -> Result<usize> {
    get_usize(params, key)?.ok_or_else(|| KmtError::Parse(format!("missing parameter `{key}`")))
}

fn need_f64(params: &Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| KmtError::Parse(format!("missing numeric parameter `{key}`")))
}

fn get_bool(params: &Value, key: &str, default: bool) -> Result<bool> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v.as_bool().ok_or_else(|| KmtError::Parse(format!("parameter `{key}` must be a boolean"))),
    }
}

fn usize_list(params: &Value, key: &str) -> Result<Option<Vec<usize>>> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| KmtError::Parse(format!("`{key}` must hold integers"))))
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(_) => Err(KmtError::Parse(format!("parameter `{key}` must be an array"))),
    }
}

fn want(domain: &Domain, kind: DomainKind, name: &str) -> Result<()> {
    let ok = match kind {
        DomainKind::Line => domain.is_line(),
        DomainKind::Cube => domain.kind() == DomainKind::Cube,
        DomainKind::Grid => domain.kind() == DomainKind::Grid && domain.d() == 2,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(KmtError::InvalidParameter(format!("generator `{name}` does not apply to domain {domain}")))
    }
}

/// Builds the named instance on `domain`.
pub fn generate(domain: &Domain, name: &str, params: &Value, seed: u64) -> Result<InstanceBundle> {
    let k = get_usize(params, "k")?.unwrap_or(1).max(1);
    let n = domain.size();
    match name {
        "constant" => {
            let v = get_bool(params, "value", false)?;
            InstanceBundle::new(TruthTable::constant(domain.clone(), v), name, params.clone(), seed, k)
        }
        "staircase" => {
            want(domain, DomainKind::Line, name)?;
            let cuts = usize_list(params, "cuts")?.unwrap_or_default();
            let start = get_bool(params, "start", false)?;
            InstanceBundle::new(staircase(n, &cuts, start), name, params.clone(), seed, k)
        }
        "alternating" => {
            want(domain, DomainKind::Line, name)?;
            let pieces = need_usize(params, "pieces")?;
            InstanceBundle::new(evenly_cut(n, pieces), name, params.clone(), seed, k)
        }
        "gv" => {
            want(domain, DomainKind::Line, name)?;
            gen_gv_line(n, need_usize(params, "k")?, need_f64(params, "eps")?, seed)
        }
        "anti_parity" => {
            want(domain, DomainKind::Cube, name)?;
            let d = domain.d();
            let s = match usize_list(params, "s")? {
                Some(s) => s,
                None => {
                    let t = need_usize(params, "t")?.min(d);
                    let mut s = sample(&mut seeded(seed), d, t).into_vec();
                    s.sort_unstable();
                    s
                }
            };
            let mut b = gen_anti_parity(d, &s, k)?;
            b.seed = seed;
            Ok(b)
        }
        "compose_gh" => {
            want(domain, DomainKind::Cube, name)?;
            let d = domain.d();
            if d % 2 != 0 {
                return Err(KmtError::InvalidParameter(format!("compose_gh needs an even dimension, got {d}")));
            }
            let e = d / 2;
            let g = match params.get("g").and_then(Value::as_str).unwrap_or("anti_majority") {
                "anti_majority" => anti_majority(e),
                "monotone" => TruthTable::from_fn(Domain::cube(e), |x| 2 * x.count_ones() as usize >= e),
                "random_monotone" => random_k_monotone_table(&Domain::cube(e), 1, &mut seeded(seed)),
                other => return Err(KmtError::Parse(format!("unknown g `{other}` for compose_gh"))),
            };
            let mut b = gen_compose_gh(&g, k)?;
            b.seed = seed;
            b.params = json!({ "d": d, "k": k, "g": params.get("g").cloned().unwrap_or(json!("anti_majority")) });
            Ok(b)
        }
        "random_k_monotone" => match get_usize(params, "m")? {
            Some(m) => gen_random_k_monotone_blocks(domain, m, k, seed),
            None => gen_random_k_monotone(domain, k, seed),
        },
        "band" => {
            want(domain, DomainKind::Grid, name)?;
            gen_band(domain.n(), seed)
        }
        "stripes" => {
            want(domain, DomainKind::Grid, name)?;
            gen_stripes(domain.n(), need_usize(params, "width")?, k)
        }
        "noisy" => {
            let base = params.get("base").ok_or_else(|| KmtError::Parse("noisy needs `base`".into()))?;
            let base_name = base
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| KmtError::Parse("noisy `base` needs a `name`".into()))?;
            let mut base_params = base.get("params").cloned().unwrap_or(json!({}));
            if base_params.get("k").is_none() {
                if let Some(obj) = base_params.as_object_mut() {
                    obj.insert("k".into(), json!(k));
                }
            }
            let b = generate(domain, base_name, &base_params, split(seed, 0))?;
            gen_noisy(&b, need_f64(params, "rho")?, split(seed, 1))
        }
        other => Err(KmtError::Parse(format!("unknown generator `{other}`"))),
    }
}

/// Materializes a function file, resolving generators through [`generate`].
pub fn resolve_file(file: &FunctionFile) -> Result<TruthTable> {
    match &file.repr {
        Repr::Table { .. } => file.table(),
        Repr::Generator { name, params, seed } => {
            let domain = file.domain.to_domain()?;
            Ok(generate(&domain, name, params, *seed)?.table)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_resolves() {
        let cases = [
            (Domain::line(100), "constant", json!({ "value": true })),
            (Domain::line(100), "staircase", json!({ "cuts": [10, 50], "start": false, "k": 2 })),
            (Domain::line(100), "alternating", json!({ "pieces": 7, "k": 3 })),
            (Domain::line(2000), "gv", json!({ "k": 8, "eps": 0.05 })),
            (Domain::cube(6), "anti_parity", json!({ "t": 3 })),
            (Domain::cube(8), "compose_gh", json!({ "k": 2, "g": "monotone" })),
            (Domain::grid(8, 2), "random_k_monotone", json!({ "k": 2 })),
            (Domain::grid(16, 2), "random_k_monotone", json!({ "k": 2, "m": 4 })),
            (Domain::grid(10, 2), "band", json!({})),
            (Domain::grid(10, 2), "stripes", json!({ "width": 2, "k": 2 })),
            (Domain::grid(6, 2), "noisy", json!({ "base": { "name": "band" }, "rho": 0.1, "k": 2 })),
        ];
        let mut names: Vec<&str> = cases.iter().map(|c| c.1).collect();
        names.dedup();
        assert_eq!(names, FAMILIES);
        for (dom, name, params) in cases {
            let a = generate(&dom, name, &params, 5).unwrap();
            let b = generate(&dom, name, &params, 5).unwrap();
            assert_eq!(a.table, b.table, "{name}");
        }
    }

    #[test]
    fn unknown_names_and_bad_domains_fail() {
        assert!(generate(&Domain::line(5), "nope", &json!({}), 0).is_err());
        assert!(generate(&Domain::line(5), "band", &json!({}), 0).is_err());
        assert!(generate(&Domain::cube(3), "compose_gh", &json!({}), 0).is_err());
    }

    #[test]
    fn function_files_resolve() {
        let text = r#"{"domain":{"kind":"cube","d":4},"repr":{"kind":"generator","name":"anti_parity","params":{"s":[0,1]},"seed":7}}"#;
        let f = FunctionFile::parse(text).unwrap();
        let t = resolve_file(&f).unwrap();
        assert!(!t.get(0b0101));
    }
}
