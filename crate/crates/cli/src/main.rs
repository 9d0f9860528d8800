//! `kpath`: compute centrality scores, generate synthetic graphs, and compare the
//! sampling estimators against exact betweenness.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for unreadable or malformed
//! input, 3 when `--budget-secs` runs out. A JSON manifest is written for every run
//! that gets past argument parsing.

mod manifest;
mod source;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpath::eval::{
    default_kpath_params, match_speedup_params, run_comparison, write_correlation_csv, write_overlap_csv, Algorithm,
    BaselinePolicy, Comparison, ComparisonConfig, MeanStd, DEFAULT_ALPHA, DEFAULT_TOP_PERCENTS, LITERAL_C,
    LITERAL_EPSILON, LITERAL_S,
};
use kpath::exact::{bounded_distance_betweenness_with_workers, brandes_betweenness_with_workers};
use kpath::kpath::{exact_kpath_oracle_limited, ra_kpath_run, KPathParams, ORACLE_MAX_PATHS};
use kpath::sampled::{as_brandes, draw_pivots, ra_brandes_with_pivots, AsBrandesParams, RaBrandesParams};
use kpath::synth::{graph_stats, GenParams};
use kpath::{CentralityScores, Graph, IdMap, Loaded};
use serde_json::{json, Value};

use manifest::{Manifest, Status};
use source::{Format, GenSpec, GraphInfo, Origin};

#[derive(Parser, Debug)]
#[command(name = "kpath", version, about = "Betweenness and k-path centrality toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score every vertex of one graph with one algorithm.
    Compute(ComputeArgs),
    /// Write a synthetic social network as a SNAP edge list.
    Generate(GenerateArgs),
    /// Run the estimators repeatedly and compare them with exact betweenness.
    Compare(CompareArgs),
    /// Exact k-path centrality by path enumeration (small graphs only).
    Oracle(OracleArgs),
}

#[derive(Args, Clone, Debug)]
struct InputArgs {
    /// Graph file.
    #[arg(long = "in", value_name = "PATH", required_unless_present = "generate")]
    input: Option<PathBuf>,
    /// Generate the graph instead, e.g. `n=1000,m=3,p=0.6,seed=7`.
    #[arg(long, value_name = "SPEC", conflicts_with = "input")]
    generate: Option<GenSpec>,
    #[arg(long, value_enum, default_value_t = Format::Snap)]
    format: Format,
    /// Treat SNAP edges as directed arcs.
    #[arg(long)]
    directed: bool,
    /// Read the third SNAP column as an edge weight.
    #[arg(long, conflicts_with = "unweighted")]
    weighted: bool,
    /// Drop the weights of a weighted Pajek file.
    #[arg(long)]
    unweighted: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Primary output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Run manifest; defaults to `<out>.manifest.json` or `kpath-<command>.manifest.json`.
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
    /// Abort with exit status 3 once this many seconds have passed.
    #[arg(long, value_name = "SECS")]
    budget_secs: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ComputeAlgo {
    Brandes,
    Kbetweenness,
    RaBrandes,
    AsBrandes,
    RaKpath,
    KpathOracle,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    algo: ComputeAlgo,
    /// Walk length bound for ra-kpath and kpath-oracle; defaults to round(ln(n + m)).
    #[arg(long)]
    kappa: Option<usize>,
    /// ra-kpath accuracy exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// ra-kpath walk count, replacing the default formula.
    #[arg(long)]
    iterations: Option<u64>,
    /// kbetweenness distance bound.
    #[arg(long)]
    k: Option<f64>,
    /// ra-brandes error parameter.
    #[arg(long)]
    epsilon: Option<f64>,
    /// ra-brandes pivot count, replacing the formula in epsilon.
    #[arg(long)]
    pivots: Option<usize>,
    /// as-brandes threshold multiplier.
    #[arg(long)]
    c: Option<f64>,
    /// as-brandes speed parameter.
    #[arg(long)]
    s: Option<f64>,
    /// as-brandes pivot cutoff, replacing ceil(n / s).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Measured RA-kpath speedup to derive unset baseline parameters from.
    #[arg(long, conflicts_with = "prior_manifest")]
    kpath_speedup: Option<f64>,
    /// Comparison manifest whose RA-kpath speedup sets unset baseline parameters.
    #[arg(long, value_name = "PATH")]
    prior_manifest: Option<PathBuf>,
    /// k-path oracle enumeration cap.
    #[arg(long)]
    max_paths: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the `internal_id,external_id` mapping here.
    #[arg(long, value_name = "PATH")]
    ids_out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    /// Links made by each new vertex.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Triad-closure probability.
    #[arg(long, default_value_t = 0.6)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_delimiter = ',', default_value = "ra-kpath,ra-brandes,as-brandes")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Repetition i runs with seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of generated graphs; graph i uses generator seed + i.
    #[arg(long, default_value_t = 1, requires = "generate")]
    graphs: usize,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    iterations: Option<u64>,
    /// Fixed ra-brandes epsilon (together with --s).
    #[arg(long, requires = "s")]
    epsilon: Option<f64>,
    /// Fixed as-brandes speed parameter (together with --epsilon).
    #[arg(long, requires = "epsilon")]
    s: Option<f64>,
    #[arg(long, default_value_t = LITERAL_C)]
    c: f64,
    /// Use epsilon 0.5 and s 20 instead of matching the RA-kpath speedup.
    #[arg(long, conflicts_with_all = ["epsilon", "kpath_speedup", "prior_manifest"])]
    literal_baselines: bool,
    /// Speedup to match when RA-kpath is not among the algorithms.
    #[arg(long, conflicts_with = "prior_manifest")]
    kpath_speedup: Option<f64>,
    #[arg(long, value_name = "PATH")]
    prior_manifest: Option<PathBuf>,
    /// Top-N% cut-offs for the overlap metric.
    #[arg(long, value_delimiter = ',')]
    top: Vec<f64>,
    /// Network label in the CSV outputs.
    #[arg(long)]
    network: Option<String>,
    /// Per-network top-N% overlaps, one row per algorithm and cut-off.
    #[arg(long, value_name = "PATH")]
    overlap_csv: Option<PathBuf>,
    /// Per-network correlations and speedups, one row per algorithm.
    #[arg(long, value_name = "PATH")]
    correlation_csv: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Walk length bound; defaults to round(ln(n + m)).
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long, default_value_t = ORACLE_MAX_PATHS)]
    max_paths: u64,
    #[arg(long, value_name = "PATH")]
    ids_out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Budget(f64),
}

impl CliError {
    pub fn from_core(e: kpath::Error, path: Option<&Path>) -> Self {
        match e {
            kpath::Error::InvalidParam(msg) => CliError::Usage(msg),
            other => match path {
                Some(p) => CliError::Input(format!("{}: {other}", p.display())),
                None => CliError::Input(other.to_string()),
            },
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn status(&self) -> Status {
        match self {
            CliError::Usage(_) => Status::UsageError,
            CliError::Input(_) => Status::InputError,
            CliError::Budget(_) => Status::BudgetExceeded,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) => f.write_str(m),
            CliError::Budget(secs) => write!(f, "time budget of {secs} s exceeded"),
        }
    }
}

fn core_err(e: kpath::Error) -> CliError {
    CliError::from_core(e, None)
}

fn io_err(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::Input(format!("cannot write {}: {e}", p.display())),
        None => CliError::Input(format!("cannot write to standard output: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (name, out, manifest_flag, budget) = match &cli.command {
        Command::Compute(a) => ("compute", &a.output.out, &a.output.manifest, a.output.budget_secs),
        Command::Generate(a) => ("generate", &a.output.out, &a.output.manifest, a.output.budget_secs),
        Command::Compare(a) => ("compare", &a.output.out, &a.output.manifest, a.output.budget_secs),
        Command::Oracle(a) => ("oracle", &a.output.out, &a.output.manifest, a.output.budget_secs),
    };
    let manifest_path = manifest_flag.clone().unwrap_or_else(|| manifest::default_path(name, out.as_deref()));
    let mut manifest = Manifest::new(name);
    manifest.budget_secs = budget;

    let started = Instant::now();
    let result = match cli.command {
        Command::Compute(a) => compute(a, &mut manifest),
        Command::Generate(a) => generate(a, &mut manifest),
        Command::Compare(a) => compare(a, &mut manifest),
        Command::Oracle(a) => oracle(a, &mut manifest),
    };
    if manifest.wall_clock_secs == 0.0 {
        manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    }

    let code = match &result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("kpath {name}: {e}");
            manifest.status = e.status();
            manifest.error = Some(e.to_string());
            e.exit_code()
        }
    };
    manifest.exit_code = code.into();
    if let Err(e) = manifest.write(&manifest_path) {
        eprintln!("kpath {name}: cannot write manifest {}: {e}", manifest_path.display());
        return ExitCode::from(code.max(2));
    }
    ExitCode::from(code)
}

/// Runs `work` on its own thread and gives up once `budget_secs` have passed. The
/// abandoned thread dies with the process.
fn within_budget<T, F>(budget_secs: Option<f64>, work: F) -> Result<T, CliError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, CliError> + Send + 'static,
{
    let Some(secs) = budget_secs else {
        return work();
    };
    if !(secs > 0.0 && secs.is_finite()) {
        return Err(CliError::Usage(format!("--budget-secs must be positive, got {secs}")));
    }
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(work());
    });
    match rx.recv_timeout(Duration::from_secs_f64(secs)) {
        Ok(result) => result,
        Err(mpsc::RecvTimeoutError::Timeout) => Err(CliError::Budget(secs)),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(CliError::Input("worker thread panicked".into())),
    }
}

fn load_input(input: &InputArgs, seed: u64, manifest: &mut Manifest) -> Result<Loaded, CliError> {
    let loaded = match (&input.input, &input.generate) {
        (Some(path), _) => {
            let l = source::load_file(path, input.format, input.directed, input.weighted, input.unweighted)?;
            manifest.inputs.push(Origin::File {
                path: path.clone(),
                format: input.format,
                directed: l.graph.is_directed(),
                weighted: l.graph.is_weighted(),
            });
            l
        }
        (None, Some(spec)) => {
            if input.directed || input.weighted || input.unweighted || input.format != Format::Snap {
                return Err(CliError::Usage("--format, --directed and weight flags apply to file input only".into()));
            }
            let params = spec.params(seed);
            let l = source::generated(&params)?;
            manifest.inputs.push(Origin::Generated { params });
            l
        }
        (None, None) => return Err(CliError::Usage("either --in or --generate is required".into())),
    };
    manifest.graphs.push(GraphInfo::of(&loaded.graph, &loaded.report));
    Ok(loaded)
}

/// Opens `path`, or standard output when it is `None`, writes, and flushes.
fn write_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> kpath::Result<()>) -> Result<(), CliError> {
    let result = match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_err(Some(p), e))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|()| w.flush().map_err(Into::into))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|()| w.flush().map_err(Into::into))
        }
    };
    result.map_err(|e| match e {
        kpath::Error::Io(io) => io_err(path, io),
        other => core_err(other),
    })
}

fn write_scores(
    scores: &CentralityScores,
    ids: &IdMap,
    out: Option<&Path>,
    ids_out: Option<&Path>,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    if let Some(p) = ids_out {
        write_output(Some(p), |w| ids.write_csv(w))?;
        manifest.outputs.push(p.to_path_buf());
    }
    write_output(out, |w| scores.write_csv(ids, w))?;
    manifest.outputs.extend(out.map(Path::to_path_buf));
    Ok(())
}

fn prior_speedup(flag: Option<f64>, prior: Option<&Path>) -> Result<Option<f64>, CliError> {
    match (flag, prior) {
        (Some(s), _) => Ok(Some(s)),
        (None, Some(p)) => manifest::prior_kpath_speedup(p).map(Some).map_err(CliError::Input),
        (None, None) => Ok(None),
    }
}

/// Flags the chosen algorithm does not read; passing one is a usage error.
fn unused_flags(a: &ComputeArgs) -> Vec<&'static str> {
    use ComputeAlgo::*;
    let given = [
        ("--kappa", a.kappa.is_some(), &[RaKpath, KpathOracle][..]),
        ("--alpha", a.alpha.is_some(), &[RaKpath]),
        ("--iterations", a.iterations.is_some(), &[RaKpath]),
        ("--k", a.k.is_some(), &[Kbetweenness]),
        ("--epsilon", a.epsilon.is_some(), &[RaBrandes]),
        ("--pivots", a.pivots.is_some(), &[RaBrandes]),
        ("--c", a.c.is_some(), &[AsBrandes]),
        ("--s", a.s.is_some(), &[AsBrandes]),
        ("--cutoff", a.cutoff.is_some(), &[AsBrandes]),
        ("--kpath-speedup", a.kpath_speedup.is_some(), &[RaBrandes, AsBrandes]),
        ("--prior-manifest", a.prior_manifest.is_some(), &[RaBrandes, AsBrandes]),
        ("--max-paths", a.max_paths.is_some(), &[KpathOracle]),
    ];
    given.into_iter().filter(|(_, set, algos)| *set && !algos.contains(&a.algo)).map(|(flag, _, _)| flag).collect()
}

type Job = Box<dyn FnOnce(&Graph) -> kpath::Result<CentralityScores> + Send>;

fn compute(a: ComputeArgs, manifest: &mut Manifest) -> Result<(), CliError> {
    let algo_name = a.algo.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    manifest.algorithm = Some(algo_name.clone());
    manifest.seed = Some(a.seed);
    manifest.workers = a.workers;
    let unused = unused_flags(&a);
    if !unused.is_empty() {
        return Err(CliError::Usage(format!("{} not used by --algo {algo_name}", unused.join(", "))));
    }
    if a.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let loaded = load_input(&a.input, a.seed, manifest)?;
    let g = loaded.graph;
    let n = g.n();
    let workers = a.workers;

    let (job, params): (Job, Value) = match a.algo {
        ComputeAlgo::Brandes => (Box::new(move |g| Ok(brandes_betweenness_with_workers(g, workers))), json!({})),
        ComputeAlgo::Kbetweenness => {
            let k = a.k.ok_or_else(|| CliError::Usage("--algo kbetweenness needs --k".into()))?;
            (Box::new(move |g| bounded_distance_betweenness_with_workers(g, k, workers)), json!({ "k": k }))
        }
        ComputeAlgo::RaBrandes => {
            let prior = prior_speedup(a.kpath_speedup, a.prior_manifest.as_deref())?;
            let (epsilon, source) = match (a.epsilon, prior) {
                (Some(e), _) => (e, "flag"),
                (None, Some(sp)) => (match_speedup_params(sp, n).map_err(core_err)?.epsilon, "matched"),
                (None, None) => (LITERAL_EPSILON, "literal"),
            };
            let p = RaBrandesParams { pivot_count_override: a.pivots, ..RaBrandesParams::new(epsilon, a.seed) };
            let count = p.pivot_count(n).map_err(core_err)?;
            let params = json!({
                "epsilon": epsilon, "epsilon_source": source, "kpath_speedup": prior, "pivots": count,
            });
            let seed = a.seed;
            let job = move |g: &Graph| {
                let pivots = if g.n() == 0 { Vec::new() } else { draw_pivots(g.n(), count, seed) };
                ra_brandes_with_pivots(g, &pivots, workers)
            };
            (Box::new(job), params)
        }
        ComputeAlgo::AsBrandes => {
            let prior = prior_speedup(a.kpath_speedup, a.prior_manifest.as_deref())?;
            let (s, source) = match (a.s, prior) {
                (Some(s), _) => (s, "flag"),
                (None, Some(sp)) => (match_speedup_params(sp, n).map_err(core_err)?.s, "matched"),
                (None, None) => (LITERAL_S, "literal"),
            };
            let c = a.c.unwrap_or(LITERAL_C);
            let p = AsBrandesParams { cutoff_override: a.cutoff, ..AsBrandesParams::new(c, s, a.seed) };
            let cutoff = p.cutoff(n).map_err(core_err)?;
            // the freeze rule depends on pivot order, so this always runs sequentially
            manifest.workers = 1;
            let params = json!({ "c": c, "s": s, "s_source": source, "kpath_speedup": prior, "cutoff": cutoff });
            (Box::new(move |g| as_brandes(g, &p)), params)
        }
        ComputeAlgo::RaKpath => {
            let defaults = default_kpath_params(&g, a.seed);
            let mut p = KPathParams::new(a.kappa.unwrap_or(defaults.kappa), a.alpha.unwrap_or(DEFAULT_ALPHA), a.seed);
            p.iterations_override = a.iterations;
            let t = p.iterations(n).map_err(core_err)?;
            let params = json!({ "kappa": p.kappa, "alpha": p.alpha, "iterations": t });
            (Box::new(move |g| ra_kpath_run(g, &p, workers).map(|r| r.scores)), params)
        }
        ComputeAlgo::KpathOracle => {
            let kappa = a.kappa.unwrap_or(default_kpath_params(&g, 0).kappa);
            let cap = a.max_paths.unwrap_or(ORACLE_MAX_PATHS);
            manifest.workers = 1;
            (Box::new(move |g| exact_kpath_oracle_limited(g, kappa, cap)), json!({ "kappa": kappa, "max_paths": cap }))
        }
    };
    manifest.params = params;

    let started = Instant::now();
    let scores = within_budget(a.output.budget_secs, move || job(&g).map_err(core_err))?;
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    write_scores(&scores, &loaded.ids, a.output.out.as_deref(), a.ids_out.as_deref(), manifest)
}

fn oracle(a: OracleArgs, manifest: &mut Manifest) -> Result<(), CliError> {
    manifest.algorithm = Some("kpath-oracle".into());
    let loaded = load_input(&a.input, 0, manifest)?;
    let g = loaded.graph;
    let kappa = a.kappa.unwrap_or(default_kpath_params(&g, 0).kappa);
    let cap = a.max_paths;
    manifest.params = json!({ "kappa": kappa, "max_paths": cap });

    let started = Instant::now();
    let scores =
        within_budget(a.output.budget_secs, move || exact_kpath_oracle_limited(&g, kappa, cap).map_err(core_err))?;
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    write_scores(&scores, &loaded.ids, a.output.out.as_deref(), a.ids_out.as_deref(), manifest)
}

fn generate(a: GenerateArgs, manifest: &mut Manifest) -> Result<(), CliError> {
    let params = GenParams { n: a.n, edges_per_new_vertex: a.m, triad_probability: a.p, seed: a.seed };
    manifest.seed = Some(a.seed);
    manifest.params = json!(params);

    let started = Instant::now();
    let job_params = params.clone();
    let loaded = within_budget(a.output.budget_secs, move || source::generated(&job_params))?;
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    manifest.inputs.push(Origin::Generated { params });
    manifest.graphs.push(GraphInfo::of(&loaded.graph, &loaded.report));
    let stats = graph_stats(&loaded.graph);
    manifest.results = json!({
        "average_clustering": stats.average_clustering,
        "components": stats.components,
        "max_degree": stats.max_degree,
        "median_degree": stats.median_degree,
        "degree_histogram": stats.degree_histogram,
    });

    let out = a.output.out.as_deref();
    write_output(out, |w| kpath::graph::write_snap_edge_list(&loaded.graph, &loaded.ids, w))?;
    manifest.outputs.extend(out.map(Path::to_path_buf));
    Ok(())
}

fn compare(a: CompareArgs, manifest: &mut Manifest) -> Result<(), CliError> {
    manifest.seed = Some(a.seed);
    manifest.algorithm = Some(a.algos.iter().map(|x| x.name()).collect::<Vec<_>>().join(","));
    if a.algos.is_empty() {
        return Err(CliError::Usage("--algos must name at least one algorithm".into()));
    }
    if a.reps == 0 || a.graphs == 0 {
        return Err(CliError::Usage("--reps and --graphs must be at least 1".into()));
    }
    if a.kappa.is_none() && (a.alpha.is_some() || a.iterations.is_some()) {
        return Err(CliError::Usage("--alpha and --iterations need --kappa in compare".into()));
    }

    let baselines = match (a.epsilon, a.s) {
        (Some(epsilon), Some(s)) => BaselinePolicy::Fixed { epsilon, s },
        _ if a.literal_baselines => BaselinePolicy::Literal,
        _ => BaselinePolicy::Matched { fallback_speedup: prior_speedup(a.kpath_speedup, a.prior_manifest.as_deref())? },
    };
    let top = if a.top.is_empty() { DEFAULT_TOP_PERCENTS.to_vec() } else { a.top.clone() };
    if top.iter().any(|&p| !(p > 0.0 && p <= 100.0)) {
        return Err(CliError::Usage("--top values must lie in (0, 100]".into()));
    }
    let kpath = a.kappa.map(|kappa| {
        let mut p = KPathParams::new(kappa, a.alpha.unwrap_or(DEFAULT_ALPHA), a.seed);
        p.iterations_override = a.iterations;
        p
    });
    if let Some(p) = &kpath {
        p.validate().map_err(core_err)?;
    }

    let mut graphs = Vec::with_capacity(a.graphs);
    for i in 0..a.graphs {
        let loaded = match &a.input.generate {
            Some(spec) if a.graphs > 1 => {
                let base = spec.params(a.seed);
                let spec = GenSpec { seed: Some(base.seed + i as u64), ..spec.clone() };
                let input = InputArgs { generate: Some(spec), ..a.input.clone() };
                load_input(&input, a.seed, manifest)?
            }
            _ => load_input(&a.input, a.seed, manifest)?,
        };
        let network = match (&a.network, &a.input.input) {
            (Some(name), _) => name.clone(),
            (None, Some(path)) => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            (None, None) => format!("synth-{}", loaded.graph.n()),
        };
        let mut config = ComparisonConfig::new(network, a.algos.clone(), a.reps, a.seed);
        config.kpath = kpath.clone();
        config.baselines = baselines;
        config.c = a.c;
        config.top_percents = top.clone();
        graphs.push((loaded.graph, config));
    }
    manifest.params = json!({
        "repetitions": a.reps,
        "graphs": a.graphs,
        "kpath": kpath,
        "baselines": baselines,
        "c": a.c,
        "top_percents": top,
    });

    let started = Instant::now();
    let comparisons = within_budget(a.output.budget_secs, move || {
        graphs
            .iter()
            .map(|(g, config)| run_comparison(g, config).map_err(core_err))
            .collect::<Result<Vec<Comparison>, CliError>>()
    })?;
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();

    let kpath_speedups: Vec<f64> =
        comparisons.iter().filter_map(|c| c.summary(Algorithm::RaKpath).map(|s| s.speedup.mean)).collect();
    manifest.results = json!({
        "kpath_speedup": MeanStd::of(&kpath_speedups).map(|m| m.mean),
        "matched": comparisons.iter().map(|c| c.matched).collect::<Vec<_>>(),
        "exact_runtime": comparisons.iter().map(|c| c.exact_runtime).collect::<Vec<_>>(),
    });

    let report = json!({ "comparisons": comparisons });
    let out = a.output.out.as_deref();
    write_output(out, |w| {
        serde_json::to_writer_pretty(&mut *w, &report).map_err(io::Error::from)?;
        writeln!(w)?;
        Ok(())
    })?;
    manifest.outputs.extend(out.map(Path::to_path_buf));
    if let Some(p) = a.overlap_csv.as_deref() {
        write_output(Some(p), |w| write_overlap_csv(&comparisons, w))?;
        manifest.outputs.push(p.to_path_buf());
    }
    if let Some(p) = a.correlation_csv.as_deref() {
        write_output(Some(p), |w| write_correlation_csv(&comparisons, w))?;
        manifest.outputs.push(p.to_path_buf());
    }
    Ok(())
}
