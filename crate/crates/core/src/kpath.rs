//! κ-path centrality: the probability-weighted count of random simple walks of at most
//! κ edges that pass through a vertex, summed over all sources.
//!
//! A walk from `s` moves to an unvisited neighbor chosen with probability proportional
//! to `1 / W(u, v)` (uniformly when unweighted) and stops when none is left.
//! [`exact_kpath_oracle`] enumerates every such simple path; [`ra_kpath`] estimates the
//! same quantity from `T` sampled walks as `κ · n · count[v] / T`.

use std::thread;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, split_work, SeededRng};
use crate::scores::CentralityScores;

pub const KPATH: &str = "kpath";
pub const RA_KPATH: &str = "ra_kpath";

/// Path cap for [`exact_kpath_oracle`].
pub const ORACLE_MAX_PATHS: u64 = 20_000_000;

/// Rejection draws attempted before falling back to a scan of the unvisited list.
const REJECTION_TRIES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KPathParams {
    pub kappa: usize,
    pub alpha: f64,
    pub iterations_override: Option<u64>,
    pub seed: u64,
}

impl KPathParams {
    pub fn new(kappa: usize, alpha: f64, seed: u64) -> Self {
        KPathParams { kappa, alpha, iterations_override: None, seed }
    }

    pub fn with_iterations(mut self, t: u64) -> Self {
        self.iterations_override = Some(t);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa == 0 {
            return Err(Error::InvalidParam("kappa must be at least 1".into()));
        }
        if !(-0.5..=0.5).contains(&self.alpha) {
            return Err(Error::InvalidParam(format!("alpha must lie in [-0.5, 0.5], got {}", self.alpha)));
        }
        Ok(())
    }

    /// The override when set, otherwise [`default_iterations`].
    pub fn iterations(&self, n: usize) -> Result<u64> {
        self.validate()?;
        Ok(self.iterations_override.unwrap_or_else(|| default_iterations(self.kappa, self.alpha, n)))
    }
}

/// `T = ceil(2 κ² n^(1 - 2α) ln n)`; zero for `n <= 1`, where every score is zero anyway.
pub fn default_iterations(kappa: usize, alpha: f64, n: usize) -> u64 {
    if n <= 1 {
        return 0;
    }
    let n = n as f64;
    let k = kappa as f64;
    let t = 2.0 * k * k * n.powf(1.0 - 2.0 * alpha) * n.ln();
    (t.ceil() as u64).max(1)
}

/// Probability that a walk from `path[0]` follows exactly `path`.
pub fn walk_probability(g: &Graph, path: &[usize]) -> Result<f64> {
    if path.len() < 2 {
        return Err(Error::InvalidPath("a path needs at least one edge".into()));
    }
    let n = g.n();
    let mut visited = vec![false; n];
    for &v in path {
        if v >= n {
            return Err(Error::InvalidPath(format!("vertex {v} outside [0, {n})")));
        }
        if visited[v] {
            return Err(Error::InvalidPath(format!("vertex {v} repeats")));
        }
        visited[v] = true;
    }
    visited.iter_mut().for_each(|x| *x = false);
    let mut prob = 1.0;
    for step in path.windows(2) {
        let (u, v) = (step[0], step[1]);
        visited[u] = true;
        let w = g.edge_weight(u, v).ok_or_else(|| Error::InvalidPath(format!("no edge ({u}, {v})")))?;
        let norm: f64 = g.neighbors(u).filter(|&(x, _)| !visited[x]).map(|(_, wx)| 1.0 / wx).sum();
        prob *= (1.0 / w) / norm;
    }
    Ok(prob)
}

/// Exact κ-path centrality by enumerating every simple path of 1..=κ edges.
pub fn exact_kpath_oracle(g: &Graph, kappa: usize) -> Result<CentralityScores> {
    exact_kpath_oracle_limited(g, kappa, ORACLE_MAX_PATHS)
}

/// [`exact_kpath_oracle`] failing once more than `max_paths` paths have been visited.
pub fn exact_kpath_oracle_limited(g: &Graph, kappa: usize, max_paths: u64) -> Result<CentralityScores> {
    if kappa == 0 {
        return Err(Error::InvalidParam("kappa must be at least 1".into()));
    }
    let n = g.n();
    let mut search = PathEnumeration {
        g,
        kappa,
        visited: vec![false; n],
        path: Vec::with_capacity(kappa + 1),
        scores: vec![0.0; n],
        paths: 0,
        max_paths,
    };
    for s in 0..n {
        search.visited[s] = true;
        search.path.push(s);
        search.extend(1.0)?;
        search.path.pop();
        search.visited[s] = false;
    }
    Ok(CentralityScores::new(KPATH, search.scores))
}

struct PathEnumeration<'g> {
    g: &'g Graph,
    kappa: usize,
    visited: Vec<bool>,
    path: Vec<usize>,
    scores: Vec<f64>,
    paths: u64,
    max_paths: u64,
}

impl PathEnumeration<'_> {
    fn extend(&mut self, prob: f64) -> Result<()> {
        let g = self.g;
        let u = *self.path.last().expect("non-empty path");
        let norm: f64 = g.neighbors(u).filter(|&(v, _)| !self.visited[v]).map(|(_, w)| 1.0 / w).sum();
        if norm == 0.0 {
            return Ok(());
        }
        for (v, w) in g.neighbors(u) {
            if self.visited[v] {
                continue;
            }
            self.paths += 1;
            if self.paths > self.max_paths {
                return Err(Error::PathLimitExceeded { cap: self.max_paths });
            }
            let p = prob * (1.0 / w) / norm;
            self.path.push(v);
            for &x in &self.path[1..] {
                self.scores[x] += p;
            }
            if self.path.len() <= self.kappa {
                self.visited[v] = true;
                self.extend(p)?;
                self.visited[v] = false;
            }
            self.path.pop();
        }
        Ok(())
    }
}

/// Supplies the random draws of a walk: its source, its target length, and each step.
pub trait WalkDriver {
    fn source(&mut self, n: usize) -> Result<usize>;

    /// Target edge count in `[1, kappa]`.
    fn length(&mut self, kappa: usize) -> Result<usize>;

    /// Next vertex among the unvisited neighbors of `current`, or `None` when there is
    /// none. `step` counts edges already taken in this walk.
    fn next(&mut self, g: &Graph, current: usize, explored: &[bool], step: usize) -> Result<Option<usize>>;
}

/// Draws from a seeded generator; neighbor choice is proportional to inverse weight.
pub struct RandomDriver {
    rng: SeededRng,
    scratch: Vec<(usize, f64)>,
}

impl RandomDriver {
    pub fn new(rng: SeededRng) -> Self {
        RandomDriver { rng, scratch: Vec::new() }
    }
}

impl WalkDriver for RandomDriver {
    fn source(&mut self, n: usize) -> Result<usize> {
        Ok(self.rng.random_range(0..n))
    }

    fn length(&mut self, kappa: usize) -> Result<usize> {
        Ok(self.rng.random_range(1..=kappa))
    }

    fn next(&mut self, g: &Graph, current: usize, explored: &[bool], _step: usize) -> Result<Option<usize>> {
        let ids = g.neighbor_ids(current);
        if ids.is_empty() {
            return Ok(None);
        }
        if !g.is_weighted() {
            // uniform proposals, accepted only when unvisited, are uniform over the
            // unvisited set; the scan below handles mostly-visited neighborhoods
            for _ in 0..REJECTION_TRIES {
                let v = ids[self.rng.random_range(0..ids.len())];
                if !explored[v] {
                    return Ok(Some(v));
                }
            }
            let free = ids.iter().filter(|&&v| !explored[v]).count();
            if free == 0 {
                return Ok(None);
            }
            let pick = self.rng.random_range(0..free);
            return Ok(ids.iter().copied().filter(|&v| !explored[v]).nth(pick));
        }
        g.neighbors_unvisited_into(current, explored, &mut self.scratch);
        if self.scratch.is_empty() {
            return Ok(None);
        }
        let total: f64 = self.scratch.iter().map(|&(_, w)| 1.0 / w).sum();
        let mut target = self.rng.random::<f64>() * total;
        for &(v, w) in &self.scratch {
            target -= 1.0 / w;
            if target < 0.0 {
                return Ok(Some(v));
            }
        }
        Ok(self.scratch.last().map(|&(v, _)| v))
    }
}

/// One scripted walk: its source, target length, and the neighbor taken at each step.
///
/// A script with fewer choices than `length` asserts that the walk gets stuck after
/// the last choice; it is rejected if an unvisited neighbor is still available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptedWalk {
    pub source: usize,
    pub length: usize,
    pub choices: Vec<usize>,
}

/// Replays a list of [`ScriptedWalk`]s in place of random draws.
pub struct ScriptedDriver<'s> {
    script: &'s [ScriptedWalk],
    walk: usize,
}

impl<'s> ScriptedDriver<'s> {
    pub fn new(script: &'s [ScriptedWalk]) -> Self {
        ScriptedDriver { script, walk: 0 }
    }

    fn current(&self) -> Result<&'s ScriptedWalk> {
        self.walk
            .checked_sub(1)
            .and_then(|i| self.script.get(i))
            .ok_or_else(|| Error::Script("no scripted walk left".into()))
    }
}

impl WalkDriver for ScriptedDriver<'_> {
    fn source(&mut self, n: usize) -> Result<usize> {
        self.walk += 1;
        let entry = self.current()?;
        if entry.source >= n {
            return Err(Error::Script(format!("source {} outside [0, {n})", entry.source)));
        }
        Ok(entry.source)
    }

    fn length(&mut self, kappa: usize) -> Result<usize> {
        let entry = self.current()?;
        if entry.length == 0 || entry.length > kappa {
            return Err(Error::Script(format!("length {} outside [1, {kappa}]", entry.length)));
        }
        if entry.choices.len() > entry.length {
            return Err(Error::Script(format!(
                "{} choices for a walk of length {}",
                entry.choices.len(),
                entry.length
            )));
        }
        Ok(entry.length)
    }

    fn next(&mut self, g: &Graph, current: usize, explored: &[bool], step: usize) -> Result<Option<usize>> {
        let entry = self.current()?;
        match entry.choices.get(step) {
            Some(&v) => {
                if g.edge_weight(current, v).is_none() {
                    return Err(Error::Script(format!("step {step}: {v} is not a neighbor of {current}")));
                }
                if explored[v] {
                    return Err(Error::Script(format!("step {step}: {v} was already visited")));
                }
                Ok(Some(v))
            }
            None => {
                if g.neighbor_ids(current).iter().any(|&v| !explored[v]) {
                    return Err(Error::Script(format!(
                        "script stops after {step} steps but {current} still has unvisited neighbors"
                    )));
                }
                Ok(None)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkOutcome {
    /// All `length` edges were taken; the visits stay counted.
    Completed { length: usize },
    /// The walk got stuck after `steps < length` edges; its visits were rolled back.
    RolledBack { length: usize, steps: usize },
}

/// Per-walk bookkeeping plus the visit tally accumulated across walks.
#[derive(Clone, Debug)]
pub struct WalkState {
    explored: Vec<bool>,
    stack: Vec<usize>,
    count: Vec<u64>,
}

impl WalkState {
    pub fn new(n: usize) -> Self {
        WalkState { explored: vec![false; n], stack: Vec::new(), count: vec![0; n] }
    }

    pub fn counts(&self) -> &[u64] {
        &self.count
    }

    /// No vertex is marked explored and the visit stack is empty.
    pub fn is_clean(&self) -> bool {
        self.stack.is_empty() && self.explored.iter().all(|&e| !e)
    }

    /// Performs one walk. Every non-source vertex pushed is counted once; if the walk
    /// stops short of its drawn length those increments are undone. Explored flags
    /// are cleared before returning, including on error.
    pub fn walk<D: WalkDriver>(&mut self, g: &Graph, kappa: usize, driver: &mut D) -> Result<WalkOutcome> {
        let result = self.walk_inner(g, kappa, driver);
        let rollback = !matches!(result, Ok(WalkOutcome::Completed { .. }));
        // the source sits at the bottom of the stack and was never counted
        let mut pushed = self.stack.drain(..);
        if let Some(source) = pushed.next() {
            self.explored[source] = false;
        }
        for v in pushed {
            self.explored[v] = false;
            if rollback {
                self.count[v] -= 1;
            }
        }
        result
    }

    fn walk_inner<D: WalkDriver>(&mut self, g: &Graph, kappa: usize, driver: &mut D) -> Result<WalkOutcome> {
        let source = driver.source(g.n())?;
        self.explored[source] = true;
        self.stack.push(source);
        let length = driver.length(kappa)?;
        let mut current = source;
        let mut steps = 0;
        while steps < length {
            match driver.next(g, current, &self.explored, steps)? {
                Some(v) => {
                    self.explored[v] = true;
                    self.stack.push(v);
                    self.count[v] += 1;
                    current = v;
                    steps += 1;
                }
                None => return Ok(WalkOutcome::RolledBack { length, steps }),
            }
        }
        Ok(WalkOutcome::Completed { length })
    }
}

/// Counts and scores of an RA-κpath run.
#[derive(Clone, Debug, PartialEq)]
pub struct KPathRun {
    pub scores: CentralityScores,
    pub counts: Vec<u64>,
    pub iterations: u64,
}

/// Scales visit counts: `κ · n · count[v] / T`, all zero when `T == 0`.
pub fn scale_counts(counts: &[u64], kappa: usize, iterations: u64) -> CentralityScores {
    let n = counts.len();
    if iterations == 0 {
        return CentralityScores::zeros(RA_KPATH, n);
    }
    let scale = (kappa * n) as f64 / iterations as f64;
    CentralityScores::new(RA_KPATH, counts.iter().map(|&c| c as f64 * scale).collect())
}

/// Accumulates walks over a graph; runs may be issued in several batches.
pub struct KPathEstimator<'g> {
    g: &'g Graph,
    kappa: usize,
    state: WalkState,
    iterations: u64,
}

impl<'g> KPathEstimator<'g> {
    pub fn new(g: &'g Graph, kappa: usize) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidParam("kappa must be at least 1".into()));
        }
        Ok(KPathEstimator { g, kappa, state: WalkState::new(g.n()), iterations: 0 })
    }

    pub fn run<D: WalkDriver>(&mut self, driver: &mut D, walks: u64) -> Result<()> {
        if self.g.n() == 0 {
            self.iterations += walks;
            return Ok(());
        }
        for _ in 0..walks {
            self.state.walk(self.g, self.kappa, driver)?;
            self.iterations += 1;
        }
        Ok(())
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn finish(self) -> KPathRun {
        let scores = scale_counts(&self.state.count, self.kappa, self.iterations);
        KPathRun { scores, counts: self.state.count, iterations: self.iterations }
    }
}

/// RA-κpath, single worker.
pub fn ra_kpath(g: &Graph, p: &KPathParams) -> Result<CentralityScores> {
    Ok(ra_kpath_run(g, p, 1)?.scores)
}

/// RA-κpath with the `T` walks split over `workers` threads. Worker `i` draws from
/// stream `i` of the seed, so `workers == 1` is the reference sequential run.
pub fn ra_kpath_run(g: &Graph, p: &KPathParams, workers: usize) -> Result<KPathRun> {
    let n = g.n();
    let iterations = p.iterations(n)?;
    if n <= 1 && p.iterations_override.is_none() {
        return Ok(KPathRun { scores: CentralityScores::zeros(RA_KPATH, n), counts: vec![0; n], iterations: 0 });
    }
    let shares = split_work(iterations, workers);
    let partials: Vec<Result<Vec<u64>>> = if shares.len() == 1 {
        vec![run_share(g, p.kappa, p.seed, 0, iterations)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = shares
                .iter()
                .enumerate()
                .map(|(i, &walks)| scope.spawn(move || run_share(g, p.kappa, p.seed, i as u64, walks)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("walk worker panicked")).collect()
        })
    };
    let mut counts = vec![0u64; n];
    for part in partials {
        counts.iter_mut().zip(part?).for_each(|(c, x)| *c += x);
    }
    let scores = scale_counts(&counts, p.kappa, iterations);
    Ok(KPathRun { scores, counts, iterations })
}

fn run_share(g: &Graph, kappa: usize, seed: u64, worker: u64, walks: u64) -> Result<Vec<u64>> {
    let mut estimator = KPathEstimator::new(g, kappa)?;
    let mut driver = RandomDriver::new(rng::worker_stream(seed, worker));
    estimator.run(&mut driver, walks)?;
    Ok(estimator.finish().counts)
}

/// Runs the estimator with every draw taken from `script`; `T` is the script length.
pub fn scripted_walk_hook(g: &Graph, p: &KPathParams, script: &[ScriptedWalk]) -> Result<CentralityScores> {
    p.validate()?;
    let mut estimator = KPathEstimator::new(g, p.kappa)?;
    estimator.run(&mut ScriptedDriver::new(script), script.len() as u64)?;
    Ok(estimator.finish().scores)
}
