//! File formats.
//!
//! Hypergraph files are UTF-8 text with one hyperedge per line: node labels
//! separated by whitespace or commas, an optional trailing `# m=<int>`
//! multiplicity annotation (default 1) and an optional `@t=<int>` instance
//! timestamp. Lines starting with `%` are comments.
//!
//! Projected-graph files carry one edge per line as `u v w` with a positive
//! integer weight. Id-map sidecars record `<original-label> <dense-id>` per
//! line.
//!
//! Loaders remap arbitrary string labels to dense ids (first-seen order) and
//! return the mapping; savers can write either original labels or raw dense
//! ids. Round trips preserve the labeled hypergraph exactly, modulo canonical
//! ordering of lines.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::ProjectedGraph;
use crate::hypergraph::{Hypergraph, NodeId};

/// Bidirectional label <-> dense-id mapping produced by the loaders.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl IdMap {
    pub fn new() -> Self {
        IdMap::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Returns the dense id for `label`, allocating the next id if new.
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.labels.get(id.index()).map(String::as_str)
    }

    fn render(&self, id: NodeId) -> String {
        match self.label(id) {
            Some(l) => l.to_string(),
            None => id.to_string(),
        }
    }
}

/// Options controlling hypergraph parsing.
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Downgrade invalid hyperedges (fewer than two distinct nodes) from a
    /// hard error to a warning; real datasets contain stray singletons.
    pub skip_invalid: bool,
}

/// A parsed hypergraph with its label mapping, optional per-instance
/// timestamps (aligned with [`Hypergraph::instances`] order), and any
/// warnings produced while skipping invalid lines.
#[derive(Clone, Debug)]
pub struct LoadedHypergraph {
    pub hypergraph: Hypergraph,
    pub id_map: IdMap,
    pub timestamps: Option<Vec<i64>>,
    pub warnings: Vec<String>,
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_string(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.display().to_string(),
                source,
            })?;
        }
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

struct ParsedLine {
    labels: Vec<String>,
    multiplicity: u64,
    timestamp: Option<i64>,
}

fn parse_hyperedge_line(path: &Path, lineno: usize, line: &str) -> Result<Option<ParsedLine>> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('%') {
        return Ok(None);
    }
    let (body, annotation) = match line.split_once('#') {
        Some((b, a)) => (b, a),
        None => (line, ""),
    };
    let mut multiplicity = 1u64;
    let mut timestamp = None;
    for token in annotation.split_whitespace() {
        if let Some(v) = token.strip_prefix("m=") {
            multiplicity = v.parse::<u64>().ok().filter(|&m| m >= 1).ok_or_else(|| {
                parse_err(
                    path,
                    lineno,
                    format!("bad multiplicity annotation {token:?}"),
                )
            })?;
        } else if let Some(v) = token.strip_prefix("@t=") {
            timestamp = Some(v.parse::<i64>().map_err(|_| {
                parse_err(path, lineno, format!("bad timestamp annotation {token:?}"))
            })?);
        } else {
            return Err(parse_err(
                path,
                lineno,
                format!("unknown annotation {token:?}"),
            ));
        }
    }
    let mut labels = Vec::new();
    for token in body.split(|c: char| c.is_whitespace() || c == ',') {
        if token.is_empty() {
            continue;
        }
        if let Some(v) = token.strip_prefix("@t=") {
            timestamp = Some(v.parse::<i64>().map_err(|_| {
                parse_err(path, lineno, format!("bad timestamp annotation {token:?}"))
            })?);
        } else {
            labels.push(token.to_string());
        }
    }
    if labels.is_empty() {
        return Err(parse_err(path, lineno, "no node labels on line"));
    }
    Ok(Some(ParsedLine {
        labels,
        multiplicity,
        timestamp,
    }))
}

/// Loads a hypergraph file, remapping labels to dense ids.
pub fn load_hypergraph(path: impl AsRef<Path>, options: LoadOptions) -> Result<LoadedHypergraph> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut id_map = IdMap::new();
    let mut warnings = Vec::new();
    // (canonical nodes, timestamp) per instance; hypergraph built afterwards
    // so ids can stay first-seen while edges end up canonical.
    let mut instances: Vec<(Vec<NodeId>, Option<i64>)> = Vec::new();
    let mut timestamped = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let Some(parsed) = parse_hyperedge_line(path, lineno, raw)? else {
            continue;
        };
        let mut nodes: Vec<NodeId> = parsed.labels.iter().map(|l| id_map.intern(l)).collect();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() < 2 {
            let msg = format!(
                "{}:{}: hyperedge has fewer than 2 distinct nodes; skipped",
                path.display(),
                lineno
            );
            if options.skip_invalid {
                warnings.push(msg);
                continue;
            }
            return Err(Error::Validation(format!(
                "{}:{}: hyperedge has fewer than 2 distinct nodes (use skip-invalid to ignore)",
                path.display(),
                lineno
            )));
        }
        if parsed.timestamp.is_some() {
            timestamped += parsed.multiplicity as usize;
        }
        for _ in 0..parsed.multiplicity {
            instances.push((nodes.clone(), parsed.timestamp));
        }
    }
    let timestamps = if timestamped == 0 {
        None
    } else if timestamped == instances.len() {
        // align with canonical instance order: sort by (edge, time)
        let mut keyed: Vec<&(Vec<NodeId>, Option<i64>)> = instances.iter().collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        Some(keyed.iter().map(|(_, t)| t.unwrap()).collect())
    } else {
        return Err(Error::Validation(format!(
            "{}: {} of {} instances carry @t= timestamps; timestamps must cover every instance or none",
            path.display(),
            timestamped,
            instances.len()
        )));
    };
    let mut hypergraph = Hypergraph::new(id_map.len());
    for (nodes, _) in &instances {
        hypergraph.insert(nodes, 1)?;
    }
    Ok(LoadedHypergraph {
        hypergraph,
        id_map,
        timestamps,
        warnings,
    })
}

/// Writes a hypergraph in canonical order. Labels come from `id_map` when
/// given, otherwise dense ids are written directly. Multiplicities above 1
/// are recorded with the `# m=` annotation.
pub fn save_hypergraph(
    path: impl AsRef<Path>,
    h: &Hypergraph,
    id_map: Option<&IdMap>,
) -> Result<()> {
    let mut out = String::new();
    for (nodes, m) in h.edges() {
        let rendered: Vec<String> = nodes
            .iter()
            .map(|&n| match id_map {
                Some(map) => map.render(n),
                None => n.to_string(),
            })
            .collect();
        out.push_str(&rendered.join(" "));
        if m > 1 {
            let _ = write!(out, " # m={m}");
        }
        out.push('\n');
    }
    write_string(path.as_ref(), &out)
}

/// A parsed projected graph with its label mapping.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: ProjectedGraph,
    pub id_map: IdMap,
}

fn parse_graph_lines(path: &Path, text: &str) -> Result<Vec<(String, String, u64)>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 3 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected \"u v w\", got {line:?}"),
            ));
        }
        let w: u64 = tokens[2].parse().ok().filter(|&w| w >= 1).ok_or_else(|| {
            parse_err(
                path,
                lineno,
                format!(
                    "edge weight must be a positive integer, got {:?}",
                    tokens[2]
                ),
            )
        })?;
        if tokens[0] == tokens[1] {
            return Err(parse_err(
                path,
                lineno,
                format!("self-loop on {:?}", tokens[0]),
            ));
        }
        edges.push((tokens[0].to_string(), tokens[1].to_string(), w));
    }
    Ok(edges)
}

/// Loads a projected-graph file, remapping labels to dense ids.
pub fn load_graph(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let edges = parse_graph_lines(path, &read_to_string(path)?)?;
    let mut id_map = IdMap::new();
    let resolved: Vec<(NodeId, NodeId, u64)> = edges
        .iter()
        .map(|(u, v, w)| (id_map.intern(u), id_map.intern(v), *w))
        .collect();
    let mut graph = ProjectedGraph::new(id_map.len());
    for (u, v, w) in resolved {
        graph.add_weight(u, v, w);
    }
    Ok(LoadedGraph { graph, id_map })
}

/// Loads a projected-graph file against an existing label mapping; every
/// label in the file must already be present in `id_map`.
pub fn load_graph_with(path: impl AsRef<Path>, id_map: &IdMap) -> Result<ProjectedGraph> {
    let path = path.as_ref();
    let edges = parse_graph_lines(path, &read_to_string(path)?)?;
    let mut graph = ProjectedGraph::new(id_map.len());
    for (u, v, w) in &edges {
        let (u, v) = match (id_map.get(u), id_map.get(v)) {
            (Some(u), Some(v)) => (u, v),
            _ => {
                return Err(Error::Validation(format!(
                    "{}: node label {:?} does not appear in the companion hypergraph",
                    path.display(),
                    if id_map.get(u).is_none() { u } else { v }
                )))
            }
        };
        graph.add_weight(u, v, *w);
    }
    Ok(graph)
}

/// Writes a projected graph as `u v w` lines in canonical edge order.
pub fn save_graph(
    path: impl AsRef<Path>,
    g: &ProjectedGraph,
    id_map: Option<&IdMap>,
) -> Result<()> {
    let mut out = String::new();
    for (u, v, w) in g.edges() {
        match id_map {
            Some(map) => {
                let _ = writeln!(out, "{} {} {w}", map.render(u), map.render(v));
            }
            None => {
                let _ = writeln!(out, "{u} {v} {w}");
            }
        }
    }
    write_string(path.as_ref(), &out)
}

/// Writes the `<original-label> <dense-id>` sidecar.
pub fn save_id_map(path: impl AsRef<Path>, id_map: &IdMap) -> Result<()> {
    let mut out = String::new();
    for (i, label) in id_map.labels.iter().enumerate() {
        let _ = writeln!(out, "{label} {i}");
    }
    write_string(path.as_ref(), &out)
}

/// Reads an id-map sidecar written by [`save_id_map`].
pub fn load_id_map(path: impl AsRef<Path>) -> Result<IdMap> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut entries: Vec<(String, u32)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let (label, id) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| parse_err(path, i + 1, "expected \"<label> <dense-id>\""))?;
        let id: u32 = id
            .trim()
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("bad dense id {id:?}")))?;
        entries.push((label.trim().to_string(), id));
    }
    entries.sort_by_key(|&(_, id)| id);
    let mut map = IdMap::new();
    for (expected, (label, id)) in entries.iter().enumerate() {
        if *id as usize != expected {
            return Err(Error::Validation(format!(
                "{}: dense ids must be contiguous from 0, found {id}",
                path.display()
            )));
        }
        map.intern(label);
    }
    Ok(map)
}

/// Loads two hypergraph files into one shared label space, so hyperedges can
/// be compared node-for-node. Returns both hypergraphs (with node_count set
/// to the union label count) and the joint mapping.
pub fn load_hypergraphs_joint(
    a: impl AsRef<Path>,
    b: impl AsRef<Path>,
    options: LoadOptions,
) -> Result<(Hypergraph, Hypergraph, IdMap, Vec<String>)> {
    let mut id_map = IdMap::new();
    let mut warnings = Vec::new();
    let mut load = |path: &Path| -> Result<Vec<(Vec<NodeId>, u64)>> {
        let text = read_to_string(path)?;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let Some(parsed) = parse_hyperedge_line(path, lineno, raw)? else {
                continue;
            };
            let mut nodes: Vec<NodeId> = parsed.labels.iter().map(|l| id_map.intern(l)).collect();
            nodes.sort_unstable();
            nodes.dedup();
            if nodes.len() < 2 {
                if options.skip_invalid {
                    warnings.push(format!(
                        "{}:{}: hyperedge has fewer than 2 distinct nodes; skipped",
                        path.display(),
                        lineno
                    ));
                    continue;
                }
                return Err(Error::Validation(format!(
                    "{}:{}: hyperedge has fewer than 2 distinct nodes (use skip-invalid to ignore)",
                    path.display(),
                    lineno
                )));
            }
            edges.push((nodes, parsed.multiplicity));
        }
        Ok(edges)
    };
    let edges_a = load(a.as_ref())?;
    let edges_b = load(b.as_ref())?;
    let n = id_map.len();
    let ha = Hypergraph::from_edges(n, edges_a)?;
    let hb = Hypergraph::from_edges(n, edges_b)?;
    Ok((ha, hb, id_map, warnings))
}
