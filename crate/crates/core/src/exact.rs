//! Exact betweenness: Brandes' dependency accumulation, its bounded-distance variant,
//! and a path-enumerating oracle used by the tests.
//!
//! Scores are unnormalized and count ordered pairs, so on undirected graphs both
//! `(s, t)` and `(t, s)` contribute.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::thread;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scores::CentralityScores;

pub const BETWEENNESS: &str = "betweenness";
pub const BOUNDED_BETWEENNESS: &str = "bounded_betweenness";

/// Default vertex limit for [`brute_force_betweenness`].
pub const BRUTE_FORCE_MAX_N: usize = 64;

#[derive(Clone, Copy, Debug)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // min-heap on distance, ties by vertex id
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Per-source scratch for one shortest-path search and its dependency accumulation.
///
/// After [`SsspState::run`] from `s`: `dist[s] = 0`, `sigma[s] = 1`, every settled `t`
/// has `sigma[t]` equal to the sum of `sigma` over `preds[t]`, and `dist[t] = dist[p] +
/// W(p, t)` for each `p` in `preds[t]`. `order` lists settled vertices by
/// nondecreasing distance; `delta` holds the dependency of `s` on each of them.
#[derive(Clone, Debug)]
pub struct SsspState {
    pub dist: Vec<f64>,
    pub sigma: Vec<f64>,
    pub preds: Vec<Vec<usize>>,
    pub delta: Vec<f64>,
    pub order: Vec<usize>,
    queue: VecDeque<usize>,
    heap: BinaryHeap<HeapEntry>,
}

impl SsspState {
    pub fn new(n: usize) -> Self {
        SsspState {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            preds: vec![Vec::new(); n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        self.dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        self.sigma.iter_mut().for_each(|x| *x = 0.0);
        self.delta.iter_mut().for_each(|x| *x = 0.0);
        self.preds.iter_mut().for_each(Vec::clear);
        self.order.clear();
        self.queue.clear();
        self.heap.clear();
    }

    /// Search from `s` then accumulate dependencies. Vertices farther than `bound`
    /// (when given) are never settled and so receive no dependency.
    pub fn run(&mut self, g: &Graph, s: usize, bound: Option<f64>) {
        self.reset();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        if g.is_weighted() {
            self.dijkstra(g, s, bound);
        } else {
            self.bfs(g, s, bound);
        }
        self.accumulate();
    }

    fn bfs(&mut self, g: &Graph, s: usize, bound: Option<f64>) {
        let limit = bound.unwrap_or(f64::INFINITY);
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1.0;
            if next > limit {
                continue;
            }
            for &w in g.neighbor_ids(v) {
                if self.dist[w].is_infinite() {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn dijkstra(&mut self, g: &Graph, s: usize, bound: Option<f64>) {
        let limit = bound.unwrap_or(f64::INFINITY);
        let mut settled = vec![false; g.n()];
        self.heap.push(HeapEntry { dist: 0.0, vertex: s });
        while let Some(HeapEntry { dist, vertex: v }) = self.heap.pop() {
            if settled[v] || dist > self.dist[v] {
                continue;
            }
            if dist > limit {
                break;
            }
            settled[v] = true;
            self.order.push(v);
            for (w, weight) in g.neighbors(v) {
                let candidate = dist + weight;
                if candidate < self.dist[w] {
                    self.dist[w] = candidate;
                    self.sigma[w] = self.sigma[v];
                    self.preds[w].clear();
                    self.preds[w].push(v);
                    self.heap.push(HeapEntry { dist: candidate, vertex: w });
                } else if candidate == self.dist[w] {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn accumulate(&mut self) {
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
        }
    }

    /// Adds `delta[v]` into `acc[v]` for every settled `v` other than the source.
    pub fn add_dependencies(&self, acc: &mut [f64]) {
        for &v in self.order.iter().skip(1) {
            acc[v] += self.delta[v];
        }
    }
}

fn betweenness_over_sources(g: &Graph, bound: Option<f64>, workers: usize) -> Vec<f64> {
    let n = g.n();
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        let mut acc = vec![0.0; n];
        let mut state = SsspState::new(n);
        for s in 0..n {
            state.run(g, s, bound);
            state.add_dependencies(&mut acc);
        }
        return acc;
    }
    let chunk = n.div_ceil(workers);
    let partials: Vec<Vec<f64>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let sources = (i * chunk).min(n)..((i + 1) * chunk).min(n);
                scope.spawn(move || {
                    let mut acc = vec![0.0; n];
                    let mut state = SsspState::new(n);
                    for s in sources {
                        state.run(g, s, bound);
                        state.add_dependencies(&mut acc);
                    }
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("betweenness worker panicked")).collect()
    });
    let mut acc = vec![0.0; n];
    for part in partials {
        acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
    }
    acc
}

/// Exact betweenness of every vertex, single worker.
pub fn brandes_betweenness(g: &Graph) -> CentralityScores {
    brandes_betweenness_with_workers(g, 1)
}

/// Exact betweenness with sources split over `workers` threads. Partial sums are merged
/// in worker order, so results only differ from the single-worker run by float
/// summation order.
pub fn brandes_betweenness_with_workers(g: &Graph, workers: usize) -> CentralityScores {
    CentralityScores::new(BETWEENNESS, betweenness_over_sources(g, None, workers))
}

/// Betweenness restricted to pairs with `d(s, t) <= k`.
pub fn bounded_distance_betweenness(g: &Graph, k: f64) -> Result<CentralityScores> {
    bounded_distance_betweenness_with_workers(g, k, 1)
}

pub fn bounded_distance_betweenness_with_workers(g: &Graph, k: f64, workers: usize) -> Result<CentralityScores> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidParam(format!("distance bound k must be positive, got {k}")));
    }
    Ok(CentralityScores::new(BOUNDED_BETWEENNESS, betweenness_over_sources(g, Some(k), workers)))
}

/// Betweenness by literal enumeration of every shortest path (test oracle).
///
/// Distances come from Floyd–Warshall; each shortest path is then walked explicitly and
/// the pair fractions of the betweenness definition are summed. Exact ties are
/// required, so weights should be exactly representable (e.g. small integers).
pub fn brute_force_betweenness(g: &Graph) -> Result<CentralityScores> {
    brute_force_betweenness_limited(g, BRUTE_FORCE_MAX_N, None)
}

/// [`brute_force_betweenness`] with an explicit vertex limit and optional distance bound.
#[allow(clippy::needless_range_loop)]
pub fn brute_force_betweenness_limited(g: &Graph, max_n: usize, bound: Option<f64>) -> Result<CentralityScores> {
    let n = g.n();
    if n > max_n {
        return Err(Error::GraphTooLarge { n, limit: max_n });
    }
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (u, row) in dist.iter_mut().enumerate() {
        row[u] = 0.0;
        for (v, w) in g.neighbors(u) {
            row[v] = row[v].min(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }

    let limit = bound.unwrap_or(f64::INFINITY);
    let mut scores = vec![0.0; n];
    let mut path_count = vec![0.0; n];
    let mut through = vec![vec![0.0; n]; n];
    let mut path = Vec::with_capacity(n);
    for s in 0..n {
        path_count.iter_mut().for_each(|c| *c = 0.0);
        through.iter_mut().for_each(|row| row.iter_mut().for_each(|c| *c = 0.0));
        path.clear();
        path.push(s);
        enumerate_shortest(g, &dist[s], 0.0, &mut path, &mut path_count, &mut through);
        for t in 0..n {
            if t == s || path_count[t] == 0.0 || dist[s][t] > limit {
                continue;
            }
            for v in 0..n {
                if v != s && v != t {
                    scores[v] += through[t][v] / path_count[t];
                }
            }
        }
    }
    Ok(CentralityScores::new(BETWEENNESS, scores))
}

fn enumerate_shortest(
    g: &Graph,
    dist_from_source: &[f64],
    length: f64,
    path: &mut Vec<usize>,
    path_count: &mut [f64],
    through: &mut [Vec<f64>],
) {
    let u = *path.last().expect("path starts at the source");
    for (v, w) in g.neighbors(u) {
        let extended = length + w;
        if extended != dist_from_source[v] || path.contains(&v) {
            continue;
        }
        path.push(v);
        path_count[v] += 1.0;
        // interior vertices exclude both endpoints
        for &x in &path[1..path.len() - 1] {
            through[v][x] += 1.0;
        }
        enumerate_shortest(g, dist_from_source, extended, path, path_count, through);
        path.pop();
    }
}
