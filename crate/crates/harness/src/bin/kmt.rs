//! `kmt`: run testers, compute distances, generate instances, drive experiments and
//! run the acceptance checks.
//!
//! Exit codes: 0 for ACCEPT or success, 1 for REJECT, 2 for usage and parse errors,
//! 3 when a size or query budget is exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use kmt_adversaries::{generate, resolve_file};
use kmt_core::distance::{exact_distance_bruteforce, exact_distance_line_dp};
use kmt_core::flow::distance_to_monotone;
use kmt_core::io::{FunctionFile, Repr};
use kmt_core::matching::greedy_violation_matching;
use kmt_core::{exact_distance, Domain, KmtError, TruthTable, Verdict};
use kmt_harness::acceptance::{describe, parse_criterion, run_criterion};
use kmt_harness::experiment::{read_records, run_experiment, write_plot_data, write_records, ExperimentConfig};
use kmt_harness::testers::{TesterArgs, TesterId};
use kmt_l1::{tolerant_l1_test_monotone, Engine, RealFunction};

#[derive(Parser)]
#[command(name = "kmt", version, about = "Testers for k-monotone Boolean functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a tester on a function file and print the verdict as JSON.
    Test(TestArgs),
    /// Distance of a function file to the k-monotone class, as JSON.
    Distance(DistanceArgs),
    /// Generate an instance and write it as a function file.
    Gen(GenArgs),
    /// Run an experiment config and write the records as CSV.
    Experiment(ExperimentArgs),
    /// Run one acceptance check (c1..c14), or `all`, or `list`.
    LemmaCheck {
        #[arg(long)]
        name: String,
    },
}

#[derive(clap::Args)]
struct TestArgs {
    /// Tester name: line-one-sided, line-two-sided, grid2, cube, highdim-full,
    /// highdim-agnostic, or l1 for real-valued function files.
    #[arg(long)]
    tester: String,
    #[arg(long = "fn")]
    file: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep the two-sided line tester on the support-estimation path for small k.
    #[arg(long)]
    no_delegation: bool,
    /// Boolean tester behind the l1 reduction.
    #[arg(long, value_enum, default_value_t = L1Engine::Full)]
    engine: L1Engine,
}

#[derive(Clone, Copy, ValueEnum)]
enum L1Engine {
    Full,
    Agnostic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistanceEngine {
    /// Line DP on lines, min-cut for k = 1, brute force otherwise.
    Auto,
    Dp,
    Brute,
    /// Greedy disjoint violating chains: a certified lower bound.
    Matching,
    /// Min-cut, k = 1 only.
    Flow,
}

#[derive(clap::Args)]
struct DistanceArgs {
    #[arg(long = "fn")]
    file: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = DistanceEngine::Auto)]
    engine: DistanceEngine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Line,
    Grid,
    Cube,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Side length (ignored for cubes).
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Family parameters as a JSON object.
    #[arg(long, default_value = "{}")]
    params: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Store the generator call instead of the table.
    #[arg(long)]
    lazy: bool,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
    /// Fill the millis column.
    #[arg(long)]
    timing: bool,
    /// Directory for per-metric plot data files.
    #[arg(long)]
    plots: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_table(path: &Path) -> anyhow::Result<TruthTable> {
    Ok(resolve_file(&FunctionFile::parse(&read(path)?)?)?)
}

fn print_verdict(v: &Verdict) -> anyhow::Result<ExitCode> {
    println!("{}", serde_json::to_string(v)?);
    Ok(if v.accepted() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_test(a: TestArgs) -> anyhow::Result<ExitCode> {
    if a.tester == "l1" {
        let f = RealFunction::parse(&read(&a.file)?)?;
        let (e1, e2) = match (a.eps1, a.eps2) {
            (Some(e1), Some(e2)) => (e1, e2),
            _ => return Err(KmtError::InvalidParameter("l1 needs --eps1 and --eps2".into()).into()),
        };
        let engine = match a.engine {
            L1Engine::Full => Engine::Full,
            L1Engine::Agnostic => Engine::Agnostic,
        };
        return print_verdict(&tolerant_l1_test_monotone(&f, e1, e2, a.seed, engine)?);
    }
    let tester = TesterId::from_name(&a.tester)
        .ok_or_else(|| KmtError::InvalidParameter(format!("unknown tester `{}`", a.tester)))?;
    let f = load_table(&a.file)?;
    let args = TesterArgs { k: a.k, eps: a.eps, eps1: a.eps1, eps2: a.eps2, no_delegation: a.no_delegation };
    print_verdict(&tester.run(&f, &args, a.seed)?)
}

fn cmd_distance(a: DistanceArgs) -> anyhow::Result<ExitCode> {
    let f = load_table(&a.file)?;
    let d = match a.engine {
        DistanceEngine::Auto => exact_distance(&f, a.k)?,
        DistanceEngine::Dp => exact_distance_line_dp(&f, a.k)?,
        DistanceEngine::Brute => exact_distance_bruteforce(&f, a.k)?,
        DistanceEngine::Matching => greedy_violation_matching(&f, a.k)?.lower_bound,
        DistanceEngine::Flow => {
            if a.k != 1 {
                return Err(KmtError::InvalidParameter("the flow engine computes k = 1 only".into()).into());
            }
            distance_to_monotone(&f)?
        }
    };
    println!("{}", serde_json::to_string(&d)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<ExitCode> {
    let domain = match a.kind {
        Kind::Line => Domain::line(a.n),
        Kind::Grid => Domain::grid(a.n, a.d),
        Kind::Cube => Domain::cube(a.d),
    };
    let params: serde_json::Value =
        serde_json::from_str(&a.params).map_err(|e| KmtError::Parse(format!("--params: {e}")))?;
    let bundle = generate(&domain, &a.family, &params, a.seed)?;
    let file = if a.lazy {
        FunctionFile { domain: domain.spec(), repr: Repr::Generator { name: a.family, params, seed: a.seed } }
    } else {
        FunctionFile::from_table(&bundle.table)
    };
    fs::write(&a.out, file.to_json()).with_context(|| format!("writing {}", a.out.display()))?;
    println!("{}", serde_json::to_string(&bundle.meta)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(a: ExperimentArgs) -> anyhow::Result<ExitCode> {
    let mut config = ExperimentConfig::parse(&read(&a.config)?)?;
    if a.jobs.is_some() {
        config.jobs = a.jobs;
    }
    config.timing |= a.timing;
    let out = run_experiment(&config)?;
    let mut buf = Vec::new();
    write_records(&out.records, &mut buf)?;
    read_records(buf.as_slice())?;
    fs::write(&a.out, &buf).with_context(|| format!("writing {}", a.out.display()))?;
    if let Some(dir) = &a.plots {
        write_plot_data(dir, &out.summaries).with_context(|| format!("writing plot data to {}", dir.display()))?;
    }
    println!("{}", serde_json::to_string_pretty(&out.summaries)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_lemma_check(name: &str) -> anyhow::Result<ExitCode> {
    if name == "list" {
        describe().iter().for_each(|l| println!("{l}"));
        return Ok(ExitCode::SUCCESS);
    }
    let ids: Vec<usize> = if name == "all" {
        (1..=14).collect()
    } else {
        vec![parse_criterion(name).ok_or_else(|| KmtError::InvalidParameter(format!("unknown check `{name}`")))?]
    };
    let mut all_pass = true;
    for id in ids {
        let report = run_criterion(id)?;
        println!("{report}");
        all_pass &= report.pass;
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<KmtError>() {
        Some(KmtError::BudgetExceeded { .. } | KmtError::QueryBudgetExceeded { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Distance(a) => cmd_distance(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::LemmaCheck { name } => cmd_lemma_check(&name),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kmt: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
