//! Command-line front end.
//!
//! Three subcommands share the model flags: `sample` writes one JSON line
//! per independent chain, `diagnose` writes one exact diagnostics report,
//! and `init` prints the start state. Exit codes: 0 success, 1 a diagnostic
//! check failed, 2 bad input (flags, files, parse errors), 3 domain or
//! numerical failure, 4 capacity exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chain::{sample_many, BudgetOptions, ChainConfig, CMuSource};
use crate::diagnostics::diagnose;
use crate::distributions::{
    binomial, truncate, ExplicitTable, HomogeneousDistribution, KDpp, SpanningTrees, WeightedEdge,
    DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::init::{greedy_init_kdpp, init_spanning_tree, init_table, InitReport};
use crate::json;
use crate::linalg::SymmetricMatrix;
use crate::Subset;

#[derive(Debug, Parser)]
#[command(name = "srmix", version, about = "Exchange-chain sampling for k-DPPs and other strongly Rayleigh measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw approximate samples, one JSON line per independent chain.
    Sample(SampleArgs),
    /// Exact diagnostics for an enumerable instance (one JSON document).
    Diagnose(DiagnoseArgs),
    /// Print the start state the sampler would use.
    Init(InitArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Kdpp,
    Table,
    SpanningTree,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Ensemble CSV: n lines of n comma-separated reals.
    #[arg(long)]
    ensemble: Option<PathBuf>,
    /// Table CSV: `i1;i2;...;ik,weight` per line.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Graph CSV: `u,v,weight` per line.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Subset size. Required for kdpp; for tables it selects one size class.
    #[arg(long)]
    k: Option<usize>,
    /// Largest number of k-subsets an exact enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    num_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run exactly this many steps instead of the mixing budget.
    #[arg(long)]
    steps: Option<u64>,
    /// Start state as comma-separated indices; defaults to the initializer.
    #[arg(long)]
    start: Option<String>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InitArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Model {
    Kdpp(KDpp),
    Table(ExplicitTable),
    Trees(SpanningTrees),
}

impl Model {
    fn dist(&self) -> &dyn HomogeneousDistribution {
        match self {
            Model::Kdpp(d) => d,
            Model::Table(t) => t,
            Model::Trees(g) => g,
        }
    }

    fn init(&self) -> Result<InitReport> {
        match self {
            Model::Kdpp(d) => greedy_init_kdpp(d),
            Model::Table(t) => init_table(t),
            Model::Trees(g) => init_spanning_tree(g),
        }
    }

    /// Lower bound on `ln μ(start)` for budgets on instances too large to
    /// enumerate. Only the initializer's own start has a known bound,
    /// except for tables where the normalizer is a finite sum.
    fn log_start_mass_lower_bound(&self, start: &Subset, from_init: bool) -> Option<f64> {
        let d = self.dist();
        let (n, k) = (d.ground_size() as u64, d.degree() as u64);
        let log_count = (binomial(n as usize, k as usize) as f64).ln();
        match self {
            Model::Table(t) => {
                let total: f64 = t.entries().values().sum();
                t.entries().get(start).map(|w| (w / total).ln())
            }
            // the greedy start is within k! of the mode
            Model::Kdpp(_) if from_init => Some(-ln_factorial(k) - log_count),
            // the maximum-weight tree is a mode
            Model::Trees(_) if from_init => Some(-log_count),
            _ => None,
        }
    }
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, model: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::input(format!("--model {model} requires --{flag}")))
}

fn load_model(args: &ModelArgs) -> Result<Model> {
    match args.model {
        ModelKind::Kdpp => {
            let path = require(&args.ensemble, "ensemble", "kdpp")?;
            let k = args.k.ok_or_else(|| Error::input("--model kdpp requires --k"))?;
            let l = parse_ensemble(path, &read(path)?)?;
            Ok(Model::Kdpp(KDpp::new(l, k)?))
        }
        ModelKind::Table => {
            let path = require(&args.table, "table", "table")?;
            let rows = parse_table(path, &read(path)?)?;
            let k = match args.k {
                Some(k) => k,
                None => {
                    let sizes: std::collections::BTreeSet<usize> = rows.keys().map(|s| s.len()).collect();
                    if sizes.len() != 1 {
                        return Err(Error::input(format!(
                            "{} mixes subset sizes {sizes:?}; pass --k to select one",
                            path.display()
                        )));
                    }
                    sizes.into_iter().next().unwrap()
                }
            };
            Ok(Model::Table(truncate(&rows, k)?))
        }
        ModelKind::SpanningTree => {
            let path = require(&args.graph, "graph", "spanning-tree")?;
            let edges = parse_graph(path, &read(path)?)?;
            let vertices = edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0);
            let g = SpanningTrees::new(vertices, edges)?;
            if let Some(k) = args.k {
                if k != g.degree() {
                    return Err(Error::input(format!(
                        "--k {k} does not match the {} vertices of the graph (k = {})",
                        vertices,
                        g.degree()
                    )));
                }
            }
            Ok(Model::Trees(g))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Numbered lines with content; blank lines are skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_real(path: &Path, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("`{}` is not a number", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_error(path, line, format!("`{}` is not finite", field.trim())));
    }
    Ok(v)
}

fn parse_index(path: &Path, line: usize, field: &str) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("`{}` is not a nonnegative integer", field.trim())))
}

pub(crate) fn parse_ensemble(path: &Path, text: &str) -> Result<SymmetricMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (line, content) in content_lines(text) {
        let row = content
            .split(',')
            .map(|f| parse_real(path, line, f))
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_error(path, line, format!("expected {w} columns, found {}", row.len())));
            }
            _ => {}
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_error(path, 1, "ensemble is empty"));
    }
    if width != Some(n) {
        return Err(parse_error(path, 1, format!("ensemble has {n} rows but {} columns", width.unwrap())));
    }
    SymmetricMatrix::from_rows(&rows)
}

pub(crate) fn parse_table(path: &Path, text: &str) -> Result<BTreeMap<Subset, f64>> {
    let mut out = BTreeMap::new();
    for (line, content) in content_lines(text) {
        let (set, weight) = content
            .rsplit_once(',')
            .ok_or_else(|| parse_error(path, line, "expected `i1;i2;...;ik,weight`"))?;
        let idx = if set.trim().is_empty() {
            Vec::new()
        } else {
            set.split(';')
                .map(|f| parse_index(path, line, f))
                .collect::<Result<Vec<usize>>>()?
        };
        let s = Subset::new(idx).map_err(|_| parse_error(path, line, "repeated index in subset"))?;
        let w = parse_real(path, line, weight)?;
        if w < 0.0 {
            return Err(parse_error(path, line, "weights must be nonnegative"));
        }
        if out.insert(s.clone(), w).is_some() {
            return Err(parse_error(path, line, format!("subset {s} listed twice")));
        }
    }
    if out.is_empty() {
        return Err(parse_error(path, 1, "table is empty"));
    }
    Ok(out)
}

pub(crate) fn parse_graph(path: &Path, text: &str) -> Result<Vec<WeightedEdge>> {
    let mut edges = Vec::new();
    for (line, content) in content_lines(text) {
        let fields: Vec<&str> = content.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_error(path, line, format!("expected `u,v,weight`, found {} fields", fields.len())));
        }
        let u = parse_index(path, line, fields[0])?;
        let v = parse_index(path, line, fields[1])?;
        let weight = parse_real(path, line, fields[2])?;
        if u == v {
            return Err(parse_error(path, line, "self-loops are not allowed"));
        }
        if !(weight > 0.0) {
            return Err(parse_error(path, line, "edge weights must be positive"));
        }
        edges.push(WeightedEdge { u, v, weight });
    }
    if edges.is_empty() {
        return Err(parse_error(path, 1, "graph has no edges"));
    }
    Ok(edges)
}

fn parse_start(text: &str, d: &dyn HomogeneousDistribution) -> Result<Subset> {
    let idx = if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|f| {
                f.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::input(format!("--start: `{}` is not an index", f.trim())))
            })
            .collect::<Result<Vec<usize>>>()?
    };
    let s = Subset::new(idx)?;
    if !d.in_support(&s)? {
        return Err(Error::input(format!("--start {s} has zero mass")));
    }
    Ok(s)
}

/// Writes to `--output` when given, otherwise to `stdout`.
fn emit(output: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display()))),
        None => Ok(stdout.write_all(bytes)?),
    }
}

fn cmd_sample(args: &SampleArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if args.num_samples == 0 {
        return Err(Error::input("--num-samples must be at least 1"));
    }
    if args.threads == Some(0) {
        return Err(Error::input("--threads must be at least 1"));
    }
    let model = load_model(&args.model)?;
    let d = model.dist();
    let (start, from_init) = match &args.start {
        Some(text) => (parse_start(text, d)?, false),
        None => (model.init()?.subset, true),
    };
    let mut config = ChainConfig::new(args.epsilon, args.seed);
    config.steps_override = args.steps;
    config.budget = BudgetOptions {
        cap: args.model.cap,
        log_start_mass_lower_bound: model.log_start_mass_lower_bound(&start, from_init),
    };
    let batch = sample_many(d, &start, &config, args.num_samples, args.threads)?;

    match &batch.budget {
        Some(b) => {
            let source = match b.c_mu_source {
                CMuSource::Enumerated => "enumerated",
                CMuSource::UniversalBound => "bound 1/(2kn)",
                CMuSource::SingleState => "single state",
            };
            writeln!(
                stderr,
                "start {start}: tau = {} steps (c_mu = {:.6} [{source}], ln mu(start) = {:.6}, epsilon = {})",
                b.tau, b.c_mu, b.log_mu_start, b.epsilon
            )?;
        }
        None => writeln!(stderr, "start {start}: {} steps (fixed by --steps)", batch.steps)?,
    }
    let accepts: u64 = batch.outcomes.iter().map(|o| o.accepts).sum();
    let total = batch.steps.saturating_mul(batch.outcomes.len() as u64);
    if total > 0 {
        writeln!(
            stderr,
            "{} chains, acceptance rate {:.4}",
            batch.outcomes.len(),
            accepts as f64 / total as f64
        )?;
    }

    let mut out = Vec::new();
    for o in &batch.outcomes {
        json::write_json(&mut out, o).map_err(io::Error::from)?;
        out.push(b'\n');
    }
    emit(&args.output, stdout, &out)?;
    Ok(0)
}

fn cmd_diagnose(args: &DiagnoseArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let model = load_model(&args.model)?;
    let d = model.dist();
    let start = match &args.start {
        Some(text) => parse_start(text, d)?,
        None => model.init()?.subset,
    };
    let report = diagnose(d, &start, args.epsilon, args.model.cap)?;
    let mut out = Vec::new();
    json::write_json(&mut out, &report).map_err(io::Error::from)?;
    out.push(b'\n');
    emit(&args.output, stdout, &out)?;
    if report.all_checks_pass() {
        Ok(0)
    } else {
        writeln!(
            stderr,
            "check failed: lambda >= c_mu {}, tv(tau) <= epsilon {}, negative correlation {}, exchange {}",
            report.lambda_ge_c_mu,
            report.tv_at_tau.is_some_and(|tv| tv <= report.epsilon),
            report.negative_correlation_ok,
            report.exchange_ok
        )?;
        Ok(1)
    }
}

fn cmd_init(args: &InitArgs, stdout: &mut dyn Write) -> Result<i32> {
    let report = load_model(&args.model)?.init()?;
    let mut out = Vec::new();
    json::write_json(&mut out, &report).map_err(io::Error::from)?;
    out.push(b'\n');
    emit(&args.output, stdout, &out)?;
    Ok(0)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Sample(a) => cmd_sample(a, stdout, stderr),
        Command::Diagnose(a) => cmd_diagnose(a, stdout, stderr),
        Command::Init(a) => cmd_init(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
