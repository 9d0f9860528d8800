//! Accuracy and speed of the estimators against exact betweenness: correlation,
//! top-N% overlap, speedup, the default κ-path parameters, and speedup matching of
//! the pivot-sampling baselines.

use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::brandes_betweenness;
use crate::graph::Graph;
use crate::kpath::{exact_kpath_oracle, ra_kpath_run, KPathParams};
use crate::sampled::{as_brandes, ra_brandes, AsBrandesParams, RaBrandesParams};
use crate::scores::CentralityScores;

/// α used when none is given.
pub const DEFAULT_ALPHA: f64 = 0.2;
/// Literal baseline settings used when no κ-path speedup is available to match.
pub const LITERAL_EPSILON: f64 = 0.5;
pub const LITERAL_S: f64 = 20.0;
pub const LITERAL_C: f64 = 5.0;
pub const DEFAULT_TOP_PERCENTS: [f64; 3] = [1.0, 5.0, 10.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
}

/// Pearson or Spearman correlation. Constant input makes either coefficient
/// undefined and is reported as [`Error::UndefinedCorrelation`].
pub fn correlation(exact: &[f64], approx: &[f64], method: CorrelationMethod) -> Result<f64> {
    if exact.len() != approx.len() {
        return Err(Error::LengthMismatch(exact.len(), approx.len()));
    }
    if exact.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two values"));
    }
    match method {
        CorrelationMethod::Pearson => pearson(exact, approx),
        CorrelationMethod::Spearman => pearson(&average_ranks(exact), &average_ranks(approx)),
    }
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant score vector"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks in ascending order; tied values share the mean of their ranks.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Indices of the `k` largest scores; ties go to the smaller index, which is also the
/// smaller external id.
pub fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// Percentage of the exact top-⌈N·n/100⌉ vertices that are also in the approximate top set.
pub fn top_n_overlap(exact: &[f64], approx: &[f64], n_percent: f64) -> Result<f64> {
    if exact.len() != approx.len() {
        return Err(Error::LengthMismatch(exact.len(), approx.len()));
    }
    if !(n_percent > 0.0 && n_percent <= 100.0) {
        return Err(Error::InvalidParam(format!("N% must lie in (0, 100], got {n_percent}")));
    }
    if exact.is_empty() {
        return Err(Error::InvalidParam("cannot rank an empty score vector".into()));
    }
    let k = ((n_percent * exact.len() as f64 / 100.0).ceil() as usize).clamp(1, exact.len());
    let mut in_exact = vec![false; exact.len()];
    top_k(exact, k).into_iter().for_each(|v| in_exact[v] = true);
    let shared = top_k(approx, k).into_iter().filter(|&v| in_exact[v]).count();
    Ok(100.0 * shared as f64 / k as f64)
}

/// α = 0.2 and κ = round(ln(n + m)), at least 1.
pub fn default_kpath_params(g: &Graph, seed: u64) -> KPathParams {
    let size = (g.n() + g.m()).max(1) as f64;
    let kappa = (size.ln().round() as usize).max(1);
    KPathParams::new(kappa, DEFAULT_ALPHA, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpeedupMatch {
    pub kpath_speedup: f64,
    pub epsilon: f64,
    pub s: f64,
    /// ε came out above 1 and was clamped.
    pub clamped: bool,
}

/// Baseline parameters whose speedups track a measured κ-path speedup:
/// `ε = 2 (speedup · ln n / n)^(1/2)` clamped to (0, 1], and `s = 2 · speedup`.
pub fn match_speedup_params(kpath_speedup: f64, n: usize) -> Result<SpeedupMatch> {
    if !(kpath_speedup > 0.0 && kpath_speedup.is_finite()) {
        return Err(Error::InvalidParam(format!("speedup must be positive, got {kpath_speedup}")));
    }
    if n < 2 {
        return Err(Error::InvalidParam("speedup matching needs n >= 2".into()));
    }
    let nf = n as f64;
    let raw = 2.0 * (kpath_speedup * nf.ln() / nf).sqrt();
    Ok(SpeedupMatch { kpath_speedup, epsilon: raw.min(1.0), s: 2.0 * kpath_speedup, clamped: raw > 1.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Brandes,
    RaKpath,
    RaBrandes,
    AsBrandes,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Brandes => "brandes",
            Algorithm::RaKpath => "ra-kpath",
            Algorithm::RaBrandes => "ra-brandes",
            Algorithm::AsBrandes => "as-brandes",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brandes" => Ok(Algorithm::Brandes),
            "ra-kpath" => Ok(Algorithm::RaKpath),
            "ra-brandes" => Ok(Algorithm::RaBrandes),
            "as-brandes" => Ok(Algorithm::AsBrandes),
            other => Err(Error::InvalidParam(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Parameters an algorithm actually ran with.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunParams {
    Exact,
    Kpath { kappa: usize, alpha: f64, iterations: u64 },
    RaBrandes { epsilon: f64, pivots: usize },
    AsBrandes { c: f64, s: f64, cutoff: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TopOverlap {
    pub n_percent: f64,
    pub overlap: f64,
}

/// One approximation run compared against the reference scores.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub params: RunParams,
    /// `None` when undefined (constant scores).
    pub correlation_pearson: Option<f64>,
    pub correlation_spearman: Option<f64>,
    pub top_overlap: Vec<TopOverlap>,
    pub exact_runtime: f64,
    pub approx_runtime: f64,
    pub speedup: f64,
}

/// Compares `approx` against `reference`; runtimes are in seconds.
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    algorithm: Algorithm,
    seed: u64,
    params: RunParams,
    reference: &[f64],
    approx: &[f64],
    top_percents: &[f64],
    exact_runtime: f64,
    approx_runtime: f64,
) -> Result<EvalReport> {
    let top_overlap = top_percents
        .iter()
        .map(|&p| Ok(TopOverlap { n_percent: p, overlap: top_n_overlap(reference, approx, p)? }))
        .collect::<Result<Vec<_>>>()?;
    let defined = |r: Result<f64>| match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::UndefinedCorrelation(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(EvalReport {
        algorithm,
        seed,
        params,
        correlation_pearson: defined(correlation(reference, approx, CorrelationMethod::Pearson))?,
        correlation_spearman: defined(correlation(reference, approx, CorrelationMethod::Spearman))?,
        top_overlap,
        exact_runtime,
        approx_runtime,
        speedup: speedup(exact_runtime, approx_runtime),
    })
}

/// `exact / approx`, with the approximate time floored at one nanosecond.
pub fn speedup(exact_secs: f64, approx_secs: f64) -> f64 {
    exact_secs.max(1e-9) / approx_secs.max(1e-9)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BaselinePolicy {
    /// Match the κ-path speedup measured in the same comparison, falling back to
    /// `fallback_speedup` and then to the literal settings.
    Matched {
        fallback_speedup: Option<f64>,
    },
    Literal,
    Fixed {
        epsilon: f64,
        s: f64,
    },
}

/// Scores the approximations are ranked against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Reference {
    Betweenness,
    /// Exact κ-path centrality with the given κ (small graphs only).
    KPathOracle {
        kappa: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonConfig {
    pub network: String,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    /// Repetition `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    /// Defaults to [`default_kpath_params`] when absent.
    pub kpath: Option<KPathParams>,
    pub baselines: BaselinePolicy,
    pub c: f64,
    pub top_percents: Vec<f64>,
    pub reference: Reference,
    pub time_budget: Option<Duration>,
}

impl ComparisonConfig {
    pub fn new(network: impl Into<String>, algorithms: Vec<Algorithm>, repetitions: usize, base_seed: u64) -> Self {
        ComparisonConfig {
            network: network.into(),
            algorithms,
            repetitions,
            base_seed,
            kpath: None,
            baselines: BaselinePolicy::Matched { fallback_speedup: None },
            c: LITERAL_C,
            top_percents: DEFAULT_TOP_PERCENTS.to_vec(),
            reference: Reference::Betweenness,
            time_budget: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Mean and sample standard deviation (0 for a single value); `None` when empty.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(MeanStd { mean, std })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapSummary {
    pub n_percent: f64,
    pub overlap: MeanStd,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub params: RunParams,
    pub correlation_spearman: Option<MeanStd>,
    pub correlation_pearson: Option<MeanStd>,
    pub speedup: MeanStd,
    pub top_overlap: Vec<OverlapSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub network: String,
    pub n: usize,
    pub m: usize,
    pub exact_runtime: f64,
    pub matched: Option<SpeedupMatch>,
    pub reports: Vec<EvalReport>,
    pub summaries: Vec<Summary>,
    /// The time budget ran out before every run finished.
    pub incomplete: bool,
}

impl Comparison {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Runs exact Brandes once and every selected approximation `repetitions` times.
///
/// RA-κpath runs first so its mean speedup can set the baseline parameters. Each
/// algorithm is timed alone on a single thread; graph construction is not timed.
pub fn run_comparison(g: &Graph, config: &ComparisonConfig) -> Result<Comparison> {
    let started = Instant::now();
    let over_budget = || config.time_budget.is_some_and(|b| started.elapsed() > b);
    let n = g.n();
    let mut comparison = Comparison {
        network: config.network.clone(),
        n,
        m: g.m(),
        exact_runtime: 0.0,
        matched: None,
        reports: Vec::new(),
        summaries: Vec::new(),
        incomplete: false,
    };

    let (exact, exact_runtime) = timed(|| brandes_betweenness(g));
    comparison.exact_runtime = exact_runtime;
    let reference: CentralityScores = match config.reference {
        Reference::Betweenness => exact.clone(),
        Reference::KPathOracle { kappa } => exact_kpath_oracle(g, kappa)?,
    };

    let seeds = (0..config.repetitions as u64).map(|i| config.base_seed + i);
    let mut ordered: Vec<Algorithm> = Vec::new();
    for algo in [Algorithm::RaKpath, Algorithm::Brandes, Algorithm::RaBrandes, Algorithm::AsBrandes] {
        if config.algorithms.contains(&algo) {
            ordered.push(algo);
        }
    }

    'outer: for algo in ordered {
        if matches!(algo, Algorithm::RaBrandes | Algorithm::AsBrandes) && comparison.matched.is_none() {
            comparison.matched = baseline_match(config, &comparison.reports, n)?;
        }
        for seed in seeds.clone() {
            if over_budget() {
                comparison.incomplete = true;
                break 'outer;
            }
            let (scores, params, runtime) = match algo {
                Algorithm::Brandes => {
                    let (s, t) = timed(|| brandes_betweenness(g));
                    (s, RunParams::Exact, t)
                }
                Algorithm::RaKpath => {
                    let base = config.kpath.clone().unwrap_or_else(|| default_kpath_params(g, seed));
                    let p = KPathParams { seed, ..base };
                    let (run, t) = timed(|| ra_kpath_run(g, &p, 1));
                    let run = run?;
                    let params = RunParams::Kpath { kappa: p.kappa, alpha: p.alpha, iterations: run.iterations };
                    (run.scores, params, t)
                }
                Algorithm::RaBrandes => {
                    let epsilon = baseline_epsilon(config, comparison.matched);
                    let p = RaBrandesParams::new(epsilon, seed);
                    let pivots = p.pivot_count(n)?;
                    let (s, t) = timed(|| ra_brandes(g, &p));
                    (s?, RunParams::RaBrandes { epsilon, pivots }, t)
                }
                Algorithm::AsBrandes => {
                    let s_param = baseline_s(config, comparison.matched);
                    let p = AsBrandesParams::new(config.c, s_param, seed);
                    let cutoff = p.cutoff(n)?;
                    let (s, t) = timed(|| as_brandes(g, &p));
                    (s?, RunParams::AsBrandes { c: config.c, s: s_param, cutoff }, t)
                }
            };
            if n == 0 {
                continue;
            }
            comparison.reports.push(evaluate(
                algo,
                seed,
                params,
                &reference.values,
                &scores.values,
                &config.top_percents,
                exact_runtime,
                runtime,
            )?);
        }
    }
    comparison.summaries = summarize(&comparison.reports, &config.top_percents);
    Ok(comparison)
}

fn baseline_match(config: &ComparisonConfig, reports: &[EvalReport], n: usize) -> Result<Option<SpeedupMatch>> {
    let BaselinePolicy::Matched { fallback_speedup } = config.baselines else {
        return Ok(None);
    };
    let measured: Vec<f64> = reports.iter().filter(|r| r.algorithm == Algorithm::RaKpath).map(|r| r.speedup).collect();
    let speedup = MeanStd::of(&measured).map(|m| m.mean).or(fallback_speedup);
    match speedup {
        Some(s) if n >= 2 => Ok(Some(match_speedup_params(s, n)?)),
        _ => Ok(None),
    }
}

fn baseline_epsilon(config: &ComparisonConfig, matched: Option<SpeedupMatch>) -> f64 {
    match (config.baselines, matched) {
        (BaselinePolicy::Fixed { epsilon, .. }, _) => epsilon,
        (_, Some(m)) => m.epsilon,
        _ => LITERAL_EPSILON,
    }
}

fn baseline_s(config: &ComparisonConfig, matched: Option<SpeedupMatch>) -> f64 {
    match (config.baselines, matched) {
        (BaselinePolicy::Fixed { s, .. }, _) => s,
        (_, Some(m)) => m.s,
        _ => LITERAL_S,
    }
}

/// Mean ± standard deviation per algorithm, in first-seen order.
pub fn summarize(reports: &[EvalReport], top_percents: &[f64]) -> Vec<Summary> {
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for r in reports {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm);
        }
    }
    algorithms
        .into_iter()
        .map(|algo| {
            let runs: Vec<&EvalReport> = reports.iter().filter(|r| r.algorithm == algo).collect();
            let collect = |f: &dyn Fn(&EvalReport) -> Option<f64>| -> Option<MeanStd> {
                let vals: Option<Vec<f64>> = runs.iter().map(|r| f(r)).collect();
                vals.and_then(|v| MeanStd::of(&v))
            };
            let top_overlap = top_percents
                .iter()
                .map(|&p| {
                    let vals: Vec<f64> = runs
                        .iter()
                        .filter_map(|r| r.top_overlap.iter().find(|o| o.n_percent == p).map(|o| o.overlap))
                        .collect();
                    OverlapSummary {
                        n_percent: p,
                        overlap: MeanStd::of(&vals).unwrap_or(MeanStd { mean: 0.0, std: 0.0 }),
                    }
                })
                .collect();
            Summary {
                algorithm: algo,
                runs: runs.len(),
                params: runs[0].params.clone(),
                correlation_spearman: collect(&|r| r.correlation_spearman),
                correlation_pearson: collect(&|r| r.correlation_pearson),
                speedup: collect(&|r| Some(r.speedup)).expect("at least one run"),
                top_overlap,
            }
        })
        .collect()
}

/// Mean top-N% overlaps: `network,size,algorithm,n_percent,overlap,overlap_std`.
pub fn write_overlap_csv<W: Write>(comparisons: &[Comparison], mut out: W) -> Result<()> {
    writeln!(out, "network,size,algorithm,n_percent,overlap,overlap_std")?;
    for c in comparisons {
        for s in &c.summaries {
            for o in &s.top_overlap {
                writeln!(
                    out,
                    "{},{},{},{},{:.4},{:.4}",
                    c.network,
                    c.n,
                    s.algorithm.name(),
                    o.n_percent,
                    o.overlap.mean,
                    o.overlap.std
                )?;
            }
        }
    }
    Ok(())
}

/// Mean correlation and speedup: `network,algorithm,kappa,alpha,correlation,pearson,speedup`.
/// `correlation` is Spearman; κ and α are blank for non-κ-path rows.
pub fn write_correlation_csv<W: Write>(comparisons: &[Comparison], mut out: W) -> Result<()> {
    writeln!(out, "network,algorithm,kappa,alpha,correlation,pearson,speedup")?;
    let fmt = |m: Option<MeanStd>| m.map(|m| format!("{:.6}", m.mean)).unwrap_or_default();
    for c in comparisons {
        for s in &c.summaries {
            let (kappa, alpha) = match s.params {
                RunParams::Kpath { kappa, alpha, .. } => (kappa.to_string(), alpha.to_string()),
                _ => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{:.6}",
                c.network,
                s.algorithm.name(),
                kappa,
                alpha,
                fmt(s.correlation_spearman),
                fmt(s.correlation_pearson),
                s.speedup.mean
            )?;
        }
    }
    Ok(())
}
