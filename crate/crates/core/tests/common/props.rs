//! Invariants checked over generated inputs. Each check runs a deterministic
//! proptest runner so failures reproduce, and reports the minimal failing case.

use std::time::Instant;

use kpath::eval::{correlation, speedup, top_n_overlap, CorrelationMethod};
use kpath::exact::{
    bounded_distance_betweenness, brandes_betweenness, brandes_betweenness_with_workers, brute_force_betweenness,
};
use kpath::graph::{load_snap_edge_list, write_snap_edge_list};
use kpath::kpath::{
    exact_kpath_oracle, ra_kpath, ra_kpath_run, scale_counts, scripted_walk_hook, KPathEstimator, KPathParams,
    RandomDriver, ScriptedWalk, WalkDriver, WalkOutcome, WalkState,
};
use kpath::rng;
use kpath::sampled::{as_brandes, ra_brandes, AsBrandesParams, RaBrandesParams};
use kpath::synth::{generate, graph_stats, GenParams};
use kpath::{Graph, GraphKind};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use super::{arb_graph, arb_scores, interior_slot_total, kpath_reference};

pub type Check = fn() -> Result<(), String>;

/// Every property, by name.
pub const ALL: &[(&str, Check)] = &[
    ("snap round trip", snap_round_trip),
    ("undirected adjacency symmetry", undirected_symmetry),
    ("adjacency length sum", adjacency_sum),
    ("brandes equals brute force", brandes_matches_brute_force),
    ("betweenness nonnegative, leaves zero", nonnegative_and_leaves_zero),
    ("betweenness sum rule", sum_rule),
    ("bounded betweenness monotone in k", bound_monotone),
    ("sampled estimators deterministic per seed", sampled_determinism),
    ("walk hygiene and rollback", walk_hygiene),
    ("scripted replay reproduces random walks", scripted_replay),
    ("k-path scaling identity", scaling_identity),
    ("k-path deterministic per seed", kpath_determinism),
    ("k-path oracle matches per-length reference", kpath_oracle_reference),
    ("generator deterministic and connected", generator_shape),
    ("correlation symmetric", correlation_symmetry),
    ("spearman invariant under monotone maps", spearman_monotone),
    ("overlap invariant under rescaling", overlap_rescaling),
    ("self comparison is perfect", self_comparison),
    ("speedup against itself near 1", self_speedup),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn snap_round_trip() -> Result<(), String> {
    let edges = proptest::collection::vec((0u64..40, 0u64..40, 1u32..100), 0..60);
    check(200, (edges, any::<bool>(), any::<bool>()), |(raw, directed, weighted)| {
        let text: String =
            raw.iter().map(|(u, v, w)| format!("{} {} {}\n", u * 7, v * 7, f64::from(*w) / 4.0)).collect();
        let kind = if directed { GraphKind::Directed } else { GraphKind::Undirected };
        let first = load_snap_edge_list(text.as_bytes(), kind, weighted).unwrap();
        let mut buf = Vec::new();
        write_snap_edge_list(&first.graph, &first.ids, &mut buf).unwrap();
        let again = load_snap_edge_list(buf.as_slice(), kind, weighted).unwrap();
        prop_assert_eq!(&again.graph, &first.graph);
        prop_assert_eq!(&again.ids, &first.ids);
        Ok(())
    })
}

pub fn undirected_symmetry() -> Result<(), String> {
    check(200, arb_graph(20), |g| {
        if g.is_directed() {
            return Ok(());
        }
        for u in 0..g.n() {
            for (v, w) in g.neighbors(u) {
                prop_assert_eq!(g.edge_weight(v, u), Some(w));
            }
        }
        Ok(())
    })
}

pub fn adjacency_sum() -> Result<(), String> {
    check(200, arb_graph(20), |g| {
        let total: usize = (0..g.n()).map(|u| g.degree(u)).sum();
        prop_assert_eq!(total, if g.is_directed() { g.m() } else { 2 * g.m() });
        Ok(())
    })
}

pub fn brandes_matches_brute_force() -> Result<(), String> {
    check(150, arb_graph(10), |g| {
        let fast = brandes_betweenness(&g);
        let slow = brute_force_betweenness(&g).unwrap();
        for v in 0..g.n() {
            prop_assert!((fast[v] - slow[v]).abs() <= 1e-9, "vertex {}: {} vs {}", v, fast[v], slow[v]);
        }
        Ok(())
    })
}

pub fn nonnegative_and_leaves_zero() -> Result<(), String> {
    check(200, arb_graph(16), |g| {
        let b = brandes_betweenness(&g);
        for v in 0..g.n() {
            prop_assert!(b[v] >= 0.0);
            if !g.is_directed() && g.degree(v) == 1 {
                prop_assert_eq!(b[v], 0.0);
            }
        }
        Ok(())
    })
}

pub fn sum_rule() -> Result<(), String> {
    check(200, arb_graph(16).prop_map(Graph::into_unweighted), |g| {
        let total: f64 = brandes_betweenness(&g).values.iter().sum();
        let expected = interior_slot_total(&g);
        prop_assert!(close(total, expected, 1e-9), "{} vs {}", total, expected);
        Ok(())
    })
}

pub fn bound_monotone() -> Result<(), String> {
    check(150, (arb_graph(12), 1u32..8, 0u32..8), |(g, k1, extra)| {
        let (k1, k2) = (f64::from(k1) / 2.0, f64::from(k1 + extra) / 2.0);
        let low = bounded_distance_betweenness(&g, k1).unwrap();
        let high = bounded_distance_betweenness(&g, k2).unwrap();
        for v in 0..g.n() {
            prop_assert!(
                low[v] <= high[v] + 1e-9,
                "vertex {}: C(k={}) = {} > C(k={}) = {}",
                v,
                k1,
                low[v],
                k2,
                high[v]
            );
        }
        // a bound past every path length is no bound at all
        let total_weight: f64 = g.edges().map(|(_, _, w)| w).sum();
        let unbounded = bounded_distance_betweenness(&g, total_weight + 1.0).unwrap();
        let exact = brandes_betweenness(&g);
        for v in 0..g.n() {
            prop_assert!((unbounded[v] - exact[v]).abs() <= 1e-9);
        }
        Ok(())
    })
}

pub fn sampled_determinism() -> Result<(), String> {
    check(100, (arb_graph(16), any::<u64>()), |(g, seed)| {
        let ra = RaBrandesParams { pivot_count_override: Some(5), ..RaBrandesParams::new(0.5, seed) };
        prop_assert_eq!(ra_brandes(&g, &ra).unwrap(), ra_brandes(&g, &ra).unwrap());
        let as_p = AsBrandesParams::new(0.5, 2.0, seed);
        prop_assert_eq!(as_brandes(&g, &as_p).unwrap(), as_brandes(&g, &as_p).unwrap());
        Ok(())
    })
}

/// Wraps a driver, checking each step against the graph and recording the walk.
struct Recorder<D> {
    inner: D,
    walk: Vec<usize>,
    length: usize,
    violation: Option<String>,
}

impl<D: WalkDriver> WalkDriver for Recorder<D> {
    fn source(&mut self, n: usize) -> kpath::Result<usize> {
        let s = self.inner.source(n)?;
        self.walk = vec![s];
        Ok(s)
    }

    fn length(&mut self, kappa: usize) -> kpath::Result<usize> {
        self.length = self.inner.length(kappa)?;
        if !(1..=kappa).contains(&self.length) {
            self.violation = Some(format!("length {} outside [1, {kappa}]", self.length));
        }
        Ok(self.length)
    }

    fn next(&mut self, g: &Graph, current: usize, explored: &[bool], step: usize) -> kpath::Result<Option<usize>> {
        let chosen = self.inner.next(g, current, explored, step)?;
        match chosen {
            Some(v) => {
                if self.walk.contains(&v) || explored[v] {
                    self.violation = Some(format!("walk {:?} revisits {v}", self.walk));
                }
                if g.edge_weight(current, v).is_none() {
                    self.violation = Some(format!("{v} is not a neighbor of {current}"));
                }
                self.walk.push(v);
            }
            None => {
                if g.neighbor_ids(current).iter().any(|&v| !explored[v]) {
                    self.violation = Some(format!("stopped at {current} with unvisited neighbors"));
                }
            }
        }
        Ok(chosen)
    }
}

/// Each walk as visited, its drawn length, and how it ended.
type WalkLog = Vec<(Vec<usize>, usize, WalkOutcome)>;

fn recorded_walks(g: &Graph, kappa: usize, seed: u64, walks: usize) -> Result<(WalkState, WalkLog), TestCaseError> {
    let mut state = WalkState::new(g.n());
    let mut driver =
        Recorder { inner: RandomDriver::new(rng::seeded(seed)), walk: Vec::new(), length: 0, violation: None };
    let mut log = Vec::new();
    for _ in 0..walks {
        let outcome = state.walk(g, kappa, &mut driver).unwrap();
        if let Some(v) = driver.violation.take() {
            return Err(TestCaseError::fail(v));
        }
        prop_assert!(state.is_clean(), "explored flags left set after a walk");
        log.push((driver.walk.clone(), driver.length, outcome));
    }
    Ok((state, log))
}

pub fn walk_hygiene() -> Result<(), String> {
    check(150, (arb_graph(12), 1usize..6, any::<u64>()), |(g, kappa, seed)| {
        let (state, log) = recorded_walks(&g, kappa, seed, 200)?;
        // counts hold exactly the non-source vertices of completed walks
        let mut expected = vec![0u64; g.n()];
        for (walk, length, outcome) in &log {
            let steps = walk.len() - 1;
            match outcome {
                WalkOutcome::Completed { length: l } => {
                    prop_assert_eq!(*l, *length);
                    prop_assert_eq!(steps, *length);
                    walk[1..].iter().for_each(|&v| expected[v] += 1);
                }
                WalkOutcome::RolledBack { length: l, steps: s } => {
                    prop_assert_eq!(*l, *length);
                    prop_assert_eq!(*s, steps);
                    prop_assert!(steps < *length);
                }
            }
        }
        prop_assert_eq!(state.counts(), expected.as_slice());
        Ok(())
    })
}

pub fn scripted_replay() -> Result<(), String> {
    check(100, (arb_graph(10), 1usize..5, any::<u64>()), |(g, kappa, seed)| {
        let walks = 50;
        let (state, log) = recorded_walks(&g, kappa, seed, walks)?;
        let script: Vec<ScriptedWalk> = log
            .iter()
            .map(|(walk, length, _)| ScriptedWalk { source: walk[0], length: *length, choices: walk[1..].to_vec() })
            .collect();
        let p = KPathParams::new(kappa, 0.2, seed);
        let replayed = scripted_walk_hook(&g, &p, &script).unwrap();
        let direct = scale_counts(state.counts(), kappa, walks as u64);
        prop_assert_eq!(replayed.values, direct.values);
        Ok(())
    })
}

pub fn scaling_identity() -> Result<(), String> {
    check(100, (arb_graph(12), 1usize..5, any::<u64>(), 1u64..200), |(g, kappa, seed, t)| {
        // two batches pooled in one estimator
        let mut pooled = KPathEstimator::new(&g, kappa).unwrap();
        pooled.run(&mut RandomDriver::new(rng::worker_stream(seed, 0)), t).unwrap();
        pooled.run(&mut RandomDriver::new(rng::worker_stream(seed, 1)), t).unwrap();
        let pooled = pooled.finish();

        // the same batches run separately, counts concatenated
        let mut separate = vec![0u64; g.n()];
        for stream in 0..2 {
            let mut e = KPathEstimator::new(&g, kappa).unwrap();
            e.run(&mut RandomDriver::new(rng::worker_stream(seed, stream)), t).unwrap();
            separate.iter_mut().zip(e.finish().counts).for_each(|(a, b)| *a += b);
        }
        prop_assert_eq!(&pooled.counts, &separate);
        prop_assert_eq!(pooled.iterations, 2 * t);

        // doubling T over two workers draws exactly those two streams
        let doubled = ra_kpath_run(&g, &KPathParams::new(kappa, 0.2, seed).with_iterations(2 * t), 2).unwrap();
        prop_assert_eq!(&doubled.counts, &separate);
        prop_assert_eq!(doubled.scores.values, scale_counts(&separate, kappa, 2 * t).values);
        Ok(())
    })
}

pub fn kpath_determinism() -> Result<(), String> {
    check(100, (arb_graph(16), 1usize..5, any::<u64>()), |(g, kappa, seed)| {
        let p = KPathParams::new(kappa, 0.2, seed).with_iterations(300);
        prop_assert_eq!(ra_kpath(&g, &p).unwrap(), ra_kpath(&g, &p).unwrap());
        Ok(())
    })
}

pub fn kpath_oracle_reference() -> Result<(), String> {
    check(150, (arb_graph(7), 1usize..5), |(g, kappa)| {
        let lib = exact_kpath_oracle(&g, kappa).unwrap();
        let reference = kpath_reference(&g, kappa);
        for v in 0..g.n() {
            prop_assert!(close(lib[v], reference[v], 1e-12), "vertex {}: {} vs {}", v, lib[v], reference[v]);
        }
        Ok(())
    })
}

pub fn generator_shape() -> Result<(), String> {
    check(60, (1usize..400, 1usize..5, 0.0f64..=1.0, any::<u64>()), |(n, m, p, seed)| {
        let params = GenParams { n, edges_per_new_vertex: m, triad_probability: p, seed };
        let g = generate(&params).unwrap();
        prop_assert_eq!(&g, &generate(&params).unwrap());
        let stats = graph_stats(&g);
        prop_assert_eq!(stats.n, n);
        prop_assert_eq!(stats.components, 1);
        let expected_m: usize = (1..n).map(|v| m.min(v)).sum();
        prop_assert_eq!(g.m(), expected_m);
        Ok(())
    })
}

fn equal_len_scores() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..60).prop_flat_map(|n| (arb_scores(n..=n), arb_scores(n..=n)))
}

pub fn correlation_symmetry() -> Result<(), String> {
    check(300, equal_len_scores(), |(x, y)| {
        for method in [CorrelationMethod::Pearson, CorrelationMethod::Spearman] {
            match (correlation(&x, &y, method), correlation(&y, &x, method)) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-12, "{:?}: {} vs {}", method, a, b),
                (Err(_), Err(_)) => {}
                (a, b) => return Err(TestCaseError::fail(format!("{method:?}: {a:?} vs {b:?}"))),
            }
        }
        Ok(())
    })
}

pub fn spearman_monotone() -> Result<(), String> {
    check(300, equal_len_scores(), |(x, y)| {
        let Ok(base) = correlation(&x, &y, CorrelationMethod::Spearman) else {
            return Ok(());
        };
        let up: Vec<f64> = x.iter().map(|v| v.powi(3) + (v / 3.0).exp()).collect();
        let down: Vec<f64> = y.iter().map(|v| -2.0 * v + 7.0).collect();
        let a = correlation(&up, &y, CorrelationMethod::Spearman).unwrap();
        let b = correlation(&x, &down, CorrelationMethod::Spearman).unwrap();
        prop_assert!((a - base).abs() <= 1e-12, "{} vs {}", a, base);
        prop_assert!((b + base).abs() <= 1e-12, "{} vs {}", b, -base);
        Ok(())
    })
}

pub fn overlap_rescaling() -> Result<(), String> {
    check(300, (equal_len_scores(), 0.01f64..100.0, -50.0f64..50.0, 0.5f64..100.0), |((x, y), a, b, pct)| {
        let base = top_n_overlap(&x, &y, pct).unwrap();
        let sx: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let sy: Vec<f64> = y.iter().map(|v| v.powi(3) + v).collect();
        prop_assert_eq!(top_n_overlap(&sx, &y, pct).unwrap(), base);
        prop_assert_eq!(top_n_overlap(&x, &sy, pct).unwrap(), base);
        Ok(())
    })
}

pub fn self_comparison() -> Result<(), String> {
    check(200, (arb_scores(1..=60), 0.5f64..100.0), |(x, pct)| {
        prop_assert_eq!(top_n_overlap(&x, &x, pct).unwrap(), 100.0);
        if let Ok(r) = correlation(&x, &x, CorrelationMethod::Spearman) {
            prop_assert!((r - 1.0).abs() <= 1e-12);
        }
        Ok(())
    })
}

pub fn self_speedup() -> Result<(), String> {
    let g = generate(&GenParams::new(1500, 3)).unwrap();
    let timed = || {
        let start = Instant::now();
        std::hint::black_box(brandes_betweenness_with_workers(&g, 1));
        start.elapsed().as_secs_f64()
    };
    timed();
    let ratios: Vec<f64> = (0..3).map(|_| speedup(timed(), timed())).collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[1];
    if speedup(1.5, 1.5) != 1.0 || !(0.5..=2.0).contains(&median) {
        return Err(format!("self speedups {ratios:?}"));
    }
    Ok(())
}
