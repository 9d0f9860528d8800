//! Immutable adjacency structure and the edge-list / Pajek loaders.
//!
//! Invariants every constructed [`Graph`] upholds:
//! - neighbor ids lie in `[0, n)`, adjacency lists are sorted by neighbor id;
//! - no self-loops and no duplicate `(u, v)` entries;
//! - weights are finite and strictly positive, and exactly `1.0` when unweighted;
//! - undirected edges are stored in both endpoint lists and counted once in `m`.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Directed,
    Undirected,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Directed => f.write_str("directed"),
            GraphKind::Undirected => f.write_str("undirected"),
        }
    }
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    kind: GraphKind,
    weighted: bool,
    m: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

/// Counts of input edges that were discarded while building a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize, kind: GraphKind) -> Self {
        Graph { kind, weighted: false, m: 0, offsets: vec![0; n + 1], targets: Vec::new(), weights: Vec::new() }
    }

    /// Builds a graph from `(u, v, weight)` triples.
    ///
    /// Duplicates keep the first weight seen (for undirected graphs `(v, u)` duplicates
    /// `(u, v)`), self-loops are dropped; both are counted in the returned report. When
    /// `weighted` is false the supplied weights are ignored and every edge gets weight 1.
    pub fn from_edges<I>(n: usize, kind: GraphKind, weighted: bool, edges: I) -> Result<(Self, BuildReport)>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut report = BuildReport::default();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) references a vertex outside [0, {n})")));
            }
            let w = if weighted { w } else { 1.0 };
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) has non-positive or non-finite weight {w}")));
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            let key = match kind {
                GraphKind::Directed => (u, v),
                GraphKind::Undirected => (u.min(v), u.max(v)),
            };
            if !seen.insert(key) {
                report.duplicate_edges += 1;
                continue;
            }
            kept.push((u, v, w));
        }

        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in &kept {
            lists[u].push((v, w));
            if kind == GraphKind::Undirected {
                lists[v].push((u, w));
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable_by_key(|&(v, _)| v);
            for &(v, w) in list.iter() {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        let graph = Graph { kind, weighted, m: kept.len(), offsets, targets, weights };
        Ok((graph, report))
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_directed(&self) -> bool {
        self.kind == GraphKind::Directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Out-degree for directed graphs, degree for undirected ones.
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn neighbor_ids(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn neighbor_weights(&self, u: usize) -> &[f64] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }

    /// `(neighbor, weight)` pairs of `u` in ascending neighbor order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbor_ids(u).iter().copied().zip(self.neighbor_weights(u).iter().copied())
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let ids = self.neighbor_ids(u);
        ids.binary_search(&v).ok().map(|i| self.neighbor_weights(u)[i])
    }

    /// Every edge once: `u < v` for undirected graphs, each arc for directed ones.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let directed = self.is_directed();
        (0..self.n())
            .flat_map(move |u| self.neighbors(u).filter(move |&(v, _)| directed || u < v).map(move |(v, w)| (u, v, w)))
    }

    /// Same topology with every weight forced to 1.
    pub fn into_unweighted(mut self) -> Self {
        self.weights.iter_mut().for_each(|w| *w = 1.0);
        self.weighted = false;
        self
    }

    /// The adjacency entries of `u` whose endpoints are not marked in `visited`.
    pub fn neighbors_unvisited(&self, u: usize, visited: &[bool]) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        self.neighbors_unvisited_into(u, visited, &mut out);
        out
    }

    /// Buffer-reusing form of [`Graph::neighbors_unvisited`].
    pub fn neighbors_unvisited_into(&self, u: usize, visited: &[bool], out: &mut Vec<(usize, f64)>) {
        out.clear();
        out.extend(self.neighbors(u).filter(|&(v, _)| !visited[v]));
    }
}

/// Dense index to external id mapping, strictly ascending in the external id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdMap {
    external: Vec<u64>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap { external: (0..n as u64).collect() }
    }

    /// Dense ids are assigned in ascending external-id order.
    pub fn from_external(mut ids: Vec<u64>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        IdMap { external: ids }
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    pub fn external(&self, internal: usize) -> u64 {
        self.external[internal]
    }

    pub fn internal(&self, external: u64) -> Option<usize> {
        self.external.binary_search(&external).ok()
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external
    }

    /// Two-column CSV `internal_id,external_id`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "internal_id,external_id")?;
        for (i, e) in self.external.iter().enumerate() {
            writeln!(out, "{i},{e}")?;
        }
        Ok(())
    }
}

/// A loaded graph together with its id mapping and the loader's warning counts.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub graph: Graph,
    pub ids: IdMap,
    pub report: BuildReport,
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    let w: f64 = tok.parse().map_err(|_| Error::Parse { line, reason: format!("weight `{tok}` is not a number") })?;
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::Parse { line, reason: format!("weight {w} is not strictly positive") });
    }
    Ok(w)
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse().map_err(|_| Error::Parse { line, reason: format!("vertex id `{tok}` is not a non-negative integer") })
}

/// Reads a SNAP-style edge list: `#` comments, one `u v` or `u v w` edge per line.
///
/// With `weighted == false` a third column is still validated but then ignored, which
/// gives the unit-weight reading of a weighted file. External ids are remapped to
/// dense indices in ascending order.
pub fn load_snap_edge_list<R: BufRead>(reader: R, kind: GraphKind, weighted: bool) -> Result<Loaded> {
    let mut raw = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        let expected_ok = if weighted { toks.len() == 3 } else { toks.len() == 2 || toks.len() == 3 };
        if !expected_ok {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected {} tokens, found {}", if weighted { "3" } else { "2 or 3" }, toks.len()),
            });
        }
        let u = parse_id(toks[0], line_no)?;
        let v = parse_id(toks[1], line_no)?;
        let w = match toks.get(2) {
            Some(t) => parse_weight(t, line_no)?,
            None => 1.0,
        };
        raw.push((u, v, w));
    }

    let ids = IdMap::from_external(raw.iter().flat_map(|&(u, v, _)| [u, v]).collect());
    let edges = raw.into_iter().map(|(u, v, w)| {
        // every endpoint was registered above
        (ids.internal(u).unwrap(), ids.internal(v).unwrap(), w)
    });
    let (graph, report) = Graph::from_edges(ids.len(), kind, weighted, edges)?;
    Ok(Loaded { graph, ids, report })
}

/// Writes `g` as an edge list the SNAP loader reads back into an identical graph.
///
/// A vertex without any edge is written as a self-loop line: the loader drops the
/// loop but still registers the vertex.
pub fn write_snap_edge_list<W: Write>(g: &Graph, ids: &IdMap, mut out: W) -> Result<()> {
    writeln!(out, "# {} {} graph", g.kind(), if g.is_weighted() { "weighted" } else { "unweighted" })?;
    writeln!(out, "# Nodes: {} Edges: {}", g.n(), g.m())?;
    let mut touched = vec![false; g.n()];
    for (u, v, w) in g.edges() {
        touched[u] = true;
        touched[v] = true;
        if g.is_weighted() {
            writeln!(out, "{} {} {}", ids.external(u), ids.external(v), w)?;
        } else {
            writeln!(out, "{} {}", ids.external(u), ids.external(v))?;
        }
    }
    for v in (0..g.n()).filter(|&v| !touched[v]) {
        let x = ids.external(v);
        if g.is_weighted() {
            writeln!(out, "{x} {x} 1")?;
        } else {
            writeln!(out, "{x} {x}")?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PajekSection {
    Vertices,
    Edges,
    Arcs,
}

/// Reads the `*Vertices N` / `*Edges` / `*Arcs` subset of the Pajek `.net` format.
///
/// Ids are 1-based. `*Edges` yields an undirected graph and `*Arcs` a directed one;
/// the graph is weighted when any edge line carries a third column.
pub fn load_pajek<R: BufRead>(reader: R) -> Result<Loaded> {
    let mut n: Option<usize> = None;
    let mut section = None;
    let mut kind: Option<GraphKind> = None;
    let mut weighted = false;
    let mut raw = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        if let Some(directive) = text.strip_prefix('*') {
            let mut toks = directive.split_whitespace();
            let keyword = toks.next().unwrap_or("").to_ascii_lowercase();
            match keyword.as_str() {
                "vertices" => {
                    if n.is_some() {
                        return Err(Error::Parse { line: line_no, reason: "repeated *Vertices header".into() });
                    }
                    let count = toks
                        .next()
                        .ok_or_else(|| Error::Parse { line: line_no, reason: "*Vertices without a count".into() })?;
                    n = Some(count.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        reason: format!("vertex count `{count}` is not an integer"),
                    })?);
                    section = Some(PajekSection::Vertices);
                }
                "edges" | "arcs" => {
                    if n.is_none() {
                        return Err(Error::MissingHeader);
                    }
                    let (s, k) = if keyword == "edges" {
                        (PajekSection::Edges, GraphKind::Undirected)
                    } else {
                        (PajekSection::Arcs, GraphKind::Directed)
                    };
                    if kind.is_some_and(|existing| existing != k) {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: "mixing *Edges and *Arcs sections is not supported".into(),
                        });
                    }
                    kind = Some(k);
                    section = Some(s);
                }
                other => {
                    return Err(Error::Parse { line: line_no, reason: format!("unsupported section `*{other}`") });
                }
            }
            continue;
        }

        let vertex_count = n.ok_or(Error::MissingHeader)?;
        match section {
            Some(PajekSection::Vertices) | None => continue,
            Some(PajekSection::Edges) | Some(PajekSection::Arcs) => {
                let toks: Vec<&str> = text.split_whitespace().collect();
                if toks.len() != 2 && toks.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: format!("expected 2 or 3 tokens, found {}", toks.len()),
                    });
                }
                let endpoint = |tok: &str| -> Result<usize> {
                    let id = parse_id(tok, line_no)?;
                    if id == 0 || id > vertex_count as u64 {
                        return Err(Error::VertexOutOfRange { line: line_no, id, n: vertex_count });
                    }
                    Ok((id - 1) as usize)
                };
                let u = endpoint(toks[0])?;
                let v = endpoint(toks[1])?;
                let w = match toks.get(2) {
                    Some(t) => {
                        weighted = true;
                        parse_weight(t, line_no)?
                    }
                    None => 1.0,
                };
                raw.push((u, v, w));
            }
        }
    }

    let n = n.ok_or(Error::MissingHeader)?;
    let kind = kind.unwrap_or(GraphKind::Undirected);
    let (graph, report) = Graph::from_edges(n, kind, weighted, raw)?;
    let ids = IdMap { external: (1..=n as u64).collect() };
    Ok(Loaded { graph, ids, report })
}
