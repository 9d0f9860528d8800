//! Pivot-sampling betweenness estimators: uniform pivots (RA-Brandes) and adaptive
//! sampling with a per-vertex stopping threshold (AS-Brandes).

use std::thread;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::SsspState;
use crate::graph::Graph;
use crate::rng::{self, split_work};
use crate::scores::CentralityScores;

pub const RA_BRANDES: &str = "ra_brandes";
pub const AS_BRANDES: &str = "as_brandes";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RaBrandesParams {
    pub epsilon: f64,
    pub pivot_count_override: Option<usize>,
    pub seed: u64,
}

impl RaBrandesParams {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        RaBrandesParams { epsilon, pivot_count_override: None, seed }
    }

    /// `ceil(ln n / epsilon^2)`, at least one pivot.
    pub fn pivot_count(&self, n: usize) -> Result<usize> {
        if let Some(k) = self.pivot_count_override {
            if k == 0 {
                return Err(Error::InvalidParam("pivot count override must be at least 1".into()));
            }
            return Ok(k);
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParam(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        let raw = (n.max(1) as f64).ln() / (self.epsilon * self.epsilon);
        Ok((raw.ceil() as usize).max(1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsBrandesParams {
    /// Threshold multiplier: a vertex stops sampling once its running sum exceeds `c * n`.
    pub c: f64,
    /// Speed parameter; the pivot cutoff is `ceil(n / s)`.
    pub s: f64,
    pub cutoff_override: Option<usize>,
    pub seed: u64,
}

impl AsBrandesParams {
    pub fn new(c: f64, s: f64, seed: u64) -> Self {
        AsBrandesParams { c, s, cutoff_override: None, seed }
    }

    pub fn cutoff(&self, n: usize) -> Result<usize> {
        if let Some(t) = self.cutoff_override {
            if t == 0 {
                return Err(Error::InvalidParam("cutoff override must be at least 1".into()));
            }
            return Ok(t);
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParam(format!("speed parameter s must be positive, got {}", self.s)));
        }
        Ok(((n as f64 / self.s).ceil() as usize).max(1))
    }

    fn check(&self) -> Result<()> {
        if self.c.is_nan() || self.c <= 0.0 {
            return Err(Error::InvalidParam(format!("threshold multiplier c must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// Uniform pivots with replacement.
pub fn draw_pivots(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = rng::seeded(seed);
    (0..count).map(|_| rng.random_range(0..n)).collect()
}

/// RA-Brandes: `n / |S|` times the summed dependencies of `|S|` random pivots.
pub fn ra_brandes(g: &Graph, p: &RaBrandesParams) -> Result<CentralityScores> {
    let n = g.n();
    if n == 0 {
        return Ok(CentralityScores::zeros(RA_BRANDES, 0));
    }
    let pivots = draw_pivots(n, p.pivot_count(n)?, p.seed);
    ra_brandes_with_pivots(g, &pivots, 1)
}

/// RA-Brandes over an explicit pivot multiset, split over `workers` threads.
pub fn ra_brandes_with_pivots(g: &Graph, pivots: &[usize], workers: usize) -> Result<CentralityScores> {
    let n = g.n();
    if pivots.is_empty() {
        return Err(Error::InvalidParam("at least one pivot is required".into()));
    }
    if let Some(&bad) = pivots.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidParam(format!("pivot {bad} outside [0, {n})")));
    }
    let shares = split_work(pivots.len() as u64, workers.min(pivots.len()));
    let mut chunks = Vec::with_capacity(shares.len());
    let mut start = 0;
    for share in shares {
        let end = start + share as usize;
        chunks.push(&pivots[start..end]);
        start = end;
    }
    let partials: Vec<Vec<f64>> = if chunks.len() == 1 {
        vec![sum_dependencies(g, chunks[0])]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = chunks.iter().map(|c| scope.spawn(move || sum_dependencies(g, c))).collect();
            handles.into_iter().map(|h| h.join().expect("pivot worker panicked")).collect()
        })
    };
    let mut acc = vec![0.0; n];
    for part in partials {
        acc.iter_mut().zip(part).for_each(|(a, x)| *a += x);
    }
    let scale = n as f64 / pivots.len() as f64;
    acc.iter_mut().for_each(|x| *x *= scale);
    Ok(CentralityScores::new(RA_BRANDES, acc))
}

fn sum_dependencies(g: &Graph, pivots: &[usize]) -> Vec<f64> {
    let mut acc = vec![0.0; g.n()];
    let mut state = SsspState::new(g.n());
    for &s in pivots {
        state.run(g, s, None);
        state.add_dependencies(&mut acc);
    }
    acc
}

/// AS-Brandes: adaptive sampling with cutoff `T`, estimate `n * RS[v] / k[v]`.
pub fn as_brandes(g: &Graph, p: &AsBrandesParams) -> Result<CentralityScores> {
    p.check()?;
    let n = g.n();
    if n == 0 {
        return Ok(CentralityScores::zeros(AS_BRANDES, 0));
    }
    let pivots = draw_pivots(n, p.cutoff(n)?, p.seed);
    as_brandes_with_pivots(g, p.c, &pivots)
}

/// AS-Brandes over an explicit pivot sequence; the cutoff `T` is `pivots.len()`.
///
/// Pivots are consumed in order. The first time `RS[v]` exceeds `c * n`, both `RS[v]`
/// and `k[v]` (the number of pivots consumed so far) are frozen; vertices that never
/// cross keep their full sum with `k[v] = T`. Sampling stops early once every vertex
/// has frozen.
pub fn as_brandes_with_pivots(g: &Graph, c: f64, pivots: &[usize]) -> Result<CentralityScores> {
    let n = g.n();
    if pivots.is_empty() {
        return Err(Error::InvalidParam("at least one pivot is required".into()));
    }
    if let Some(&bad) = pivots.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidParam(format!("pivot {bad} outside [0, {n})")));
    }
    let threshold = c * n as f64;
    let cutoff = pivots.len();
    let mut running = vec![0.0; n];
    let mut samples: Vec<Option<usize>> = vec![None; n];
    let mut active = n;
    let mut state = SsspState::new(n);
    for (i, &s) in pivots.iter().enumerate() {
        if active == 0 {
            break;
        }
        state.run(g, s, None);
        for &v in state.order.iter().skip(1) {
            if samples[v].is_some() {
                continue;
            }
            running[v] += state.delta[v];
            if running[v] > threshold {
                samples[v] = Some(i + 1);
                active -= 1;
            }
        }
    }
    let values = running.iter().zip(&samples).map(|(&rs, k)| rs * (n as f64 / k.unwrap_or(cutoff) as f64)).collect();
    Ok(CentralityScores::new(AS_BRANDES, values))
}
