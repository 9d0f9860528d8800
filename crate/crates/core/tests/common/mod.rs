//! Helpers shared by the integration tests and the acceptance runner.

#![allow(dead_code)]

pub mod props;

use kpath::rng::{self, SeededRng};
use kpath::{Graph, GraphKind};
use proptest::prelude::*;
use rand::Rng;

pub fn kind(directed: bool) -> GraphKind {
    if directed {
        GraphKind::Directed
    } else {
        GraphKind::Undirected
    }
}

pub fn build(n: usize, kind: GraphKind, weighted: bool, edges: &[(usize, usize, f64)]) -> Graph {
    Graph::from_edges(n, kind, weighted, edges.iter().copied()).unwrap().0
}

pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Graph {
    let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    build(n, GraphKind::Undirected, false, &e)
}

/// G(n, p) with integer weights in 1..=4 so that path lengths add up exactly.
pub fn random_graph(rng: &mut SeededRng, n: usize, p: f64, directed: bool, weighted: bool) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random_bool(p) {
                let w = if weighted { rng.random_range(1..=4) as f64 } else { 1.0 };
                edges.push((u, v, w));
            }
        }
    }
    build(n, kind(directed), weighted, &edges)
}

/// Random spanning tree plus `extra` random edges; undirected and connected.
pub fn connected_graph(rng: &mut SeededRng, n: usize, extra: usize, weighted: bool) -> Graph {
    let mut edges = Vec::new();
    let w = |rng: &mut SeededRng| if weighted { rng.random_range(1..=4) as f64 } else { 1.0 };
    for v in 1..n {
        let u = rng.random_range(0..v);
        let weight = w(rng);
        edges.push((u, v, weight));
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            let weight = w(rng);
            edges.push((u, v, weight));
        }
    }
    build(n, GraphKind::Undirected, weighted, &edges)
}

/// `core` on vertices `0..core.n()`, then 3-vertex paths and a remainder of
/// isolated vertices up to `total`.
pub fn pad(core: &Graph, total: usize) -> Graph {
    assert!(total >= core.n());
    let mut edges: Vec<(usize, usize, f64)> = core.edges().collect();
    let mut next = core.n();
    while next + 3 <= total {
        edges.push((next, next + 1, 1.0));
        edges.push((next + 1, next + 2, 1.0));
        next += 3;
    }
    build(total, core.kind(), core.is_weighted(), &edges)
}

/// Exact κ-path centrality computed walk length by walk length: for each source and
/// each `l` in `1..=kappa`, the probability that a walk drawn with target `l`
/// completes and passes through `v`.
pub fn kpath_reference(g: &Graph, kappa: usize) -> Vec<f64> {
    fn extend(g: &Graph, path: &mut Vec<usize>, prob: f64, remaining: usize, acc: &mut [f64]) {
        let current = *path.last().unwrap();
        if remaining == 0 {
            for &v in &path[1..] {
                acc[v] += prob;
            }
            return;
        }
        let open: Vec<(usize, f64)> = g.neighbors(current).filter(|(v, _)| !path.contains(v)).collect();
        let total: f64 = open.iter().map(|&(_, w)| 1.0 / w).sum();
        for (v, w) in open {
            path.push(v);
            extend(g, path, prob * (1.0 / w) / total, remaining - 1, acc);
            path.pop();
        }
    }
    let mut acc = vec![0.0; g.n()];
    for s in 0..g.n() {
        for l in 1..=kappa {
            extend(g, &mut vec![s], 1.0, l, &mut acc);
        }
    }
    acc
}

/// Total over ordered pairs of the number of interior vertices on a shortest path,
/// for unweighted graphs; equals the sum of all betweenness scores.
#[allow(clippy::needless_range_loop)]
pub fn interior_slot_total(g: &Graph) -> f64 {
    let n = g.n();
    let mut d = vec![vec![usize::MAX; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for &v in g.neighbor_ids(u) {
            d[u][v] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != usize::MAX && d[k][j] != usize::MAX && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j && d[i][j] != usize::MAX {
                total += (d[i][j] - 1) as f64;
            }
        }
    }
    total
}

pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn seeded(seed: u64) -> SeededRng {
    rng::seeded(seed)
}

/// Graph with up to `max_n` vertices; directedness and weights vary, weights are
/// small integers.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<bool>(), any::<bool>()).prop_flat_map(|(n, directed, weighted)| {
        proptest::collection::vec((0..n, 0..n, 1u8..=4), 0..=3 * n).prop_map(move |raw| {
            let edges: Vec<_> = raw.into_iter().map(|(u, v, w)| (u, v, w as f64)).collect();
            build(n, kind(directed), weighted, &edges)
        })
    })
}

/// Score vector with plenty of ties (values drawn from a small range).
pub fn arb_scores(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec((0u32..20).prop_map(f64::from), len)
}
