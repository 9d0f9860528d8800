//! Where a command's graph comes from: a file in one of the supported formats, or the
//! synthetic generator.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use kpath::graph::{load_pajek, load_snap_edge_list, BuildReport, IdMap};
use kpath::synth::{generate, GenParams};
use kpath::{Graph, GraphKind, Loaded};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Snap,
    Pajek,
}

/// Parsed `--generate` spec, e.g. `n=1000,m=3,p=0.6,seed=7`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenSpec {
    pub n: usize,
    pub m: Option<usize>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
}

impl std::str::FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut spec = GenSpec { n: 0, m: None, p: None, seed: None };
        let mut have_n = false;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let bad = |e: &dyn std::fmt::Display| format!("bad value for `{key}`: {e}");
            match key.trim() {
                "n" => {
                    spec.n = value.trim().parse().map_err(|e| bad(&e))?;
                    have_n = true;
                }
                "m" => spec.m = Some(value.trim().parse().map_err(|e| bad(&e))?),
                "p" => spec.p = Some(value.trim().parse().map_err(|e| bad(&e))?),
                "seed" => spec.seed = Some(value.trim().parse().map_err(|e| bad(&e))?),
                other => return Err(format!("unknown generator key `{other}` (expected n, m, p or seed)")),
            }
        }
        if !have_n {
            return Err("generator spec needs n=<vertices>".into());
        }
        Ok(spec)
    }
}

impl GenSpec {
    /// Generator parameters; `fallback_seed` applies when the spec names none.
    pub fn params(&self, fallback_seed: u64) -> GenParams {
        let mut p = GenParams::new(self.n, self.seed.unwrap_or(fallback_seed));
        if let Some(m) = self.m {
            p.edges_per_new_vertex = m;
        }
        if let Some(prob) = self.p {
            p.triad_probability = prob;
        }
        p
    }
}

/// How the graph was obtained, as recorded in the manifest.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Origin {
    File { path: PathBuf, format: Format, directed: bool, weighted: bool },
    Generated { params: GenParams },
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphInfo {
    pub n: usize,
    pub m: usize,
    pub kind: GraphKind,
    pub weighted: bool,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl GraphInfo {
    pub fn of(g: &Graph, report: &BuildReport) -> Self {
        GraphInfo {
            n: g.n(),
            m: g.m(),
            kind: g.kind(),
            weighted: g.is_weighted(),
            duplicate_edges: report.duplicate_edges,
            self_loops: report.self_loops,
        }
    }
}

/// Reads a graph file. SNAP input is weighted only with `--weighted`; Pajek input
/// carries its own directedness and weights, which `--unweighted` discards.
pub fn load_file(
    path: &Path,
    format: Format,
    directed: bool,
    weighted: bool,
    unweighted: bool,
) -> Result<Loaded, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    let loaded = match format {
        Format::Snap => {
            let kind = if directed { GraphKind::Directed } else { GraphKind::Undirected };
            load_snap_edge_list(reader, kind, weighted)
        }
        Format::Pajek => {
            if directed {
                return Err(CliError::Usage(
                    "--directed does not apply to Pajek input (use *Arcs or *Edges in the file)".into(),
                ));
            }
            load_pajek(reader).map(|l| if unweighted { Loaded { graph: l.graph.into_unweighted(), ..l } } else { l })
        }
    };
    loaded.map_err(|e| CliError::from_core(e, Some(path)))
}

pub fn generated(p: &GenParams) -> Result<Loaded, CliError> {
    let graph = generate(p).map_err(|e| CliError::from_core(e, None))?;
    let ids = IdMap::identity(graph.n());
    Ok(Loaded { graph, ids, report: BuildReport::default() })
}
