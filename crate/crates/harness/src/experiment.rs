//! Experiment matrices: configs, per-trial records, CSV persistence and summaries.
//!
//! A config lists cells. Each cell names a tester, an instance family, a domain shape
//! and a parameter grid. Every grid point runs `trials` independent trials. Trial `i`
//! uses the derived seed `split(base_seed, i)`. The instance is generated from
//! `split(seed, 0)` and the tester runs with `split(seed, 1)`, so a record can be
//! replayed from its row alone.
//!
//! ```json
//! {"cells": [{"tester": "line-one-sided", "family": "gv", "domain": "line",
//!             "grid": {"n": [48000], "k": [8], "eps": [0.05]},
//!             "trials": 200, "base_seed": 7, "certify": true}]}
//! ```

use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use kmt_adversaries::{generate, FAMILIES};
use kmt_core::rng::split;
use kmt_core::{Domain, DomainKind, KmtError, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::stats::Rate;
use crate::testers::{TesterArgs, TesterId};

/// First line of every records file.
pub const RECORDS_VERSION: &str = "# kmt-records v1";

/// Environment variable that overrides the number of worker threads.
pub const JOBS_ENV: &str = "KMT_JOBS";

/// Parameter values crossed into grid points. Plain testers read `eps`, tolerant
/// ones the pairs `(eps1, eps2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub n: Vec<usize>,
    #[serde(default = "default_d")]
    pub d: Vec<usize>,
    pub k: Vec<usize>,
    #[serde(default)]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub eps1: Vec<f64>,
    #[serde(default)]
    pub eps2: Vec<f64>,
}

fn default_d() -> Vec<usize> {
    vec![1]
}

/// One row of the experiment matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellConfig {
    pub tester: TesterId,
    pub family: String,
    pub domain: DomainKind,
    pub grid: ParamGrid,
    #[serde(default)]
    pub family_params: Value,
    pub trials: usize,
    pub base_seed: u64,
    /// Record the certified distance of every generated instance.
    #[serde(default)]
    pub certify: bool,
    #[serde(default)]
    pub no_delegation: bool,
}

/// A full experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub cells: Vec<CellConfig>,
    /// Worker threads; [`JOBS_ENV`] takes precedence.
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Fill the `millis` column. Off by default so that reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
}

/// One point of a cell's parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub eps1: f64,
    pub eps2: f64,
}

impl CellConfig {
    /// Grid points in a fixed order: `n`, then `d`, `k` and the thresholds.
    pub fn points(&self) -> Vec<GridPoint> {
        let thresholds: Vec<(f64, f64)> = if self.tester.tolerant() {
            self.grid.eps1.iter().flat_map(|&a| self.grid.eps2.iter().map(move |&b| (a, b))).collect()
        } else {
            self.grid.eps.iter().map(|&e| (0.0, e)).collect()
        };
        let mut out = Vec::new();
        for &n in &self.grid.n {
            for &d in &self.grid.d {
                for &k in &self.grid.k {
                    for &(eps1, eps2) in &thresholds {
                        out.push(GridPoint { n, d, k, eps1, eps2 });
                    }
                }
            }
        }
        out
    }

    fn domain(&self, p: &GridPoint) -> Result<Domain> {
        match self.domain {
            DomainKind::Line => Ok(Domain::line(p.n)),
            DomainKind::Grid => Ok(Domain::grid(p.n, p.d)),
            DomainKind::Cube => Ok(Domain::cube(p.d)),
            DomainKind::Rect => Err(KmtError::InvalidParameter("experiment cells take line, grid or cube domains".into())),
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let fail = |msg: String| Err(KmtError::InvalidParameter(format!("cell {index}: {msg}")));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if !FAMILIES.contains(&self.family.as_str()) {
            return fail(format!("unknown family `{}`", self.family));
        }
        if self.domain == DomainKind::Rect {
            return fail("rect domains are not supported".into());
        }
        if self.grid.n.is_empty() || self.grid.d.is_empty() || self.grid.k.is_empty() {
            return fail("grid needs values for n, d and k".into());
        }
        if self.points().is_empty() {
            let need = if self.tester.tolerant() { "eps1 and eps2" } else { "eps" };
            return fail(format!("tester {} needs {need} values", self.tester));
        }
        if self.grid.n.contains(&0) || self.grid.d.contains(&0) || self.grid.k.contains(&0) {
            return fail("n, d and k must be positive".into());
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| KmtError::Parse(format!("experiment config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(KmtError::InvalidParameter("experiment has no cells".into()));
        }
        self.cells.iter().enumerate().try_for_each(|(i, c)| c.validate(i))
    }
}

/// One trial, as stored in the records file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub tester: String,
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub trial: usize,
    pub seed: u64,
    /// `ACCEPT`, `REJECT` or `ERROR`.
    pub verdict: String,
    pub queries: Option<u64>,
    /// Exact or certified lower-bound distance as a reduced fraction.
    pub cert_distance: Option<String>,
    pub millis: Option<u64>,
}

/// Aggregate over the trials of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub tester: String,
    pub family: String,
    pub point: GridPoint,
    pub acceptance: Rate,
    pub errors: usize,
    pub first_error: Option<String>,
    pub mean_queries: f64,
    pub max_queries: u64,
    /// Smallest certified distance among the generated instances.
    pub min_cert_distance: Option<f64>,
}

/// Records and summaries of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<ExperimentRecord>,
    pub summaries: Vec<CellSummary>,
}

fn family_params(cell: &CellConfig, p: &GridPoint) -> Value {
    let mut params = if cell.family_params.is_null() { json!({}) } else { cell.family_params.clone() };
    if let Some(obj) = params.as_object_mut() {
        obj.entry("k").or_insert(json!(p.k));
        obj.entry("eps").or_insert(json!(p.eps2));
    }
    params
}

fn run_trial(cell: &CellConfig, p: &GridPoint, trial: usize, timing: bool) -> (ExperimentRecord, Option<String>, Option<f64>) {
    let seed = split(cell.base_seed, trial as u64);
    let mut record = ExperimentRecord {
        tester: cell.tester.name().to_string(),
        family: cell.family.clone(),
        n: p.n,
        d: p.d,
        k: p.k,
        eps1: p.eps1,
        eps2: p.eps2,
        trial,
        seed,
        verdict: "ERROR".into(),
        queries: None,
        cert_distance: None,
        millis: None,
    };
    let start = Instant::now();
    let outcome = (|| -> Result<(kmt_core::Verdict, Option<f64>)> {
        let domain = cell.domain(p)?;
        let bundle = generate(&domain, &cell.family, &family_params(cell, p), split(seed, 0))?;
        let cert = if cell.certify {
            let d = bundle.meta.exact_distance.as_ref().or(bundle.meta.lower_bound.as_ref());
            if let Some(d) = d {
                record.cert_distance = Some(d.ratio().to_string());
            }
            d.map(|d| d.as_f64())
        } else {
            None
        };
        let args = TesterArgs {
            k: p.k,
            eps: Some(p.eps2),
            eps1: Some(p.eps1),
            eps2: Some(p.eps2),
            no_delegation: cell.no_delegation,
        };
        Ok((cell.tester.run(&bundle.table, &args, split(seed, 1))?, cert))
    })();
    if timing {
        record.millis = Some(start.elapsed().as_millis() as u64);
    }
    match outcome {
        Ok((verdict, cert)) => {
            record.verdict = if verdict.accepted() { "ACCEPT" } else { "REJECT" }.into();
            record.queries = Some(verdict.queries);
            (record, None, cert)
        }
        Err(e) => (record, Some(e.to_string()), None),
    }
}

/// Worker threads: [`JOBS_ENV`], then `requested`, then 1.
pub fn resolve_jobs(requested: Option<usize>) -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .or(requested)
        .unwrap_or(1)
        .max(1)
}

/// Runs every cell. Trials run in parallel; records come back in cell, grid point
/// and trial order whatever the scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_jobs(config.jobs))
        .build()
        .map_err(|e| KmtError::InvalidParameter(format!("thread pool: {e}")))?;
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for (ci, cell) in config.cells.iter().enumerate() {
        for p in cell.points() {
            let trials: Vec<_> =
                pool.install(|| (0..cell.trials).into_par_iter().map(|t| run_trial(cell, &p, t, config.timing)).collect());
            let ok: Vec<&ExperimentRecord> = trials.iter().filter(|t| t.1.is_none()).map(|t| &t.0).collect();
            let accepted = ok.iter().filter(|r| r.verdict == "ACCEPT").count();
            let queries: Vec<u64> = ok.iter().filter_map(|r| r.queries).collect();
            summaries.push(CellSummary {
                cell: ci,
                tester: cell.tester.name().to_string(),
                family: cell.family.clone(),
                point: p,
                acceptance: Rate::new(accepted, ok.len()),
                errors: trials.len() - ok.len(),
                first_error: trials.iter().find_map(|t| t.1.clone()),
                mean_queries: if queries.is_empty() { 0.0 } else { queries.iter().sum::<u64>() as f64 / queries.len() as f64 },
                max_queries: queries.iter().copied().max().unwrap_or(0),
                min_cert_distance: trials.iter().filter_map(|t| t.2).reduce(f64::min),
            });
            records.extend(trials.into_iter().map(|t| t.0));
        }
    }
    Ok(ExperimentOutput { records, summaries })
}

/// Writes records as versioned CSV.
pub fn write_records<W: Write>(records: &[ExperimentRecord], mut out: W) -> Result<()> {
    let io = |e: std::io::Error| KmtError::Parse(format!("writing records: {e}"));
    writeln!(out, "{RECORDS_VERSION}").map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| KmtError::Parse(format!("writing records: {e}")))?;
    }
    w.flush().map_err(io)
}

/// Reads a records file written by [`write_records`].
pub fn read_records<R: Read>(mut input: R) -> Result<Vec<ExperimentRecord>> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| KmtError::Parse(format!("reading records: {e}")))?;
    let first = text.lines().next().unwrap_or("");
    if first != RECORDS_VERSION {
        return Err(KmtError::Parse(format!("records file starts with `{first}`, expected `{RECORDS_VERSION}`")));
    }
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(|e| KmtError::Parse(format!("records row: {e}")))).collect()
}

/// Writes one two-column data file per summary metric into `dir`:
/// `acceptance_rate.dat` and `mean_queries.dat`, indexed by summary position.
pub fn write_plot_data(dir: &Path, summaries: &[CellSummary]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let metrics: [(&str, fn(&CellSummary) -> f64); 2] =
        [("acceptance_rate", |s| s.acceptance.rate), ("mean_queries", |s| s.mean_queries)];
    for (name, value) in metrics {
        let mut text = format!("# index {name}\n");
        for (i, s) in summaries.iter().enumerate() {
            text.push_str(&format!("{i} {}\n", value(s)));
        }
        std::fs::write(dir.join(format!("{name}.dat")), text)?;
    }
    Ok(())
}
