//! Betweenness-oriented centrality toolkit.
//!
//! Exact Brandes betweenness and its bounded-distance variant, the RA-Brandes and
//! AS-Brandes pivot-sampling estimators, κ-path centrality with its exhaustive oracle
//! and the RA-κpath random simple-walk estimator, a synthetic social-network
//! generator, and the evaluation metrics used to compare them.
//!
//! All per-vertex arrays are indexed by the dense ids assigned by [`graph::Graph`];
//! loaders keep the mapping back to the ids found in the input file.

pub mod error;
pub mod eval;
pub mod exact;
pub mod graph;
pub mod kpath;
pub mod rng;
pub mod sampled;
pub mod scores;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Graph, GraphKind, IdMap, Loaded};
pub use scores::CentralityScores;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
