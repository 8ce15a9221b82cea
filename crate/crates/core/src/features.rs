//! Multiplicity-aware clique features.
//!
//! Each clique is summarized by a fixed 23-entry vector: node-level weighted
//! degrees, edge-level weights, edge-level `mhh` values and `mhh`/weight
//! ratios (each block aggregated as sum, average, minimum, maximum, standard
//! deviation), followed by the clique size, the cut ratio, and a maximality
//! indicator. The layout is versioned; serialized models refuse to score
//! vectors from a different layout.

use std::fmt::Write as _;
use std::path::Path;

use crate::cliques::{is_clique, is_maximal_in, Clique};
use crate::error::{Error, Result};
use crate::filtering::mhh_of_edge;
use crate::graph::ProjectedGraph;
use crate::hypergraph::NodeId;

pub const FEATURE_LEN: usize = 23;
pub const FEATURE_LAYOUT_VERSION: u32 = 1;

/// Entry offsets of the fixed layout.
pub mod layout {
    /// Aggregates of weighted node degree.
    pub const DEGREE: usize = 0;
    /// Aggregates of intra-clique edge weight.
    pub const WEIGHT: usize = 5;
    /// Aggregates of per-edge `mhh`.
    pub const MHH: usize = 10;
    /// Aggregates of per-edge `mhh / weight`.
    pub const MHH_RATIO: usize = 15;
    pub const SIZE: usize = 20;
    pub const CUT_RATIO: usize = 21;
    pub const MAXIMAL: usize = 22;
}

/// Feature vector for one clique, in the fixed layout above.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CliqueFeatures {
    pub values: [f64; FEATURE_LEN],
}

impl CliqueFeatures {
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Sum of the weights of edges incident to `u`; 0 for isolated nodes.
pub fn weighted_degree(g: &ProjectedGraph, u: NodeId) -> u64 {
    g.weighted_degree(u)
}

/// Weight inside the clique divided by the total weight of edges touching
/// at least one clique node (each edge counted once). 1.0 when the clique's
/// connected component is the clique itself.
pub fn clique_cut_ratio(g: &ProjectedGraph, q: &Clique) -> Result<f64> {
    if !is_clique(g, q) {
        return Err(Error::Validation(format!(
            "{q} is not a clique of the graph"
        )));
    }
    let intra: u64 = q
        .pairs()
        .map(|(u, v)| g.weight(u, v).expect("clique edge"))
        .sum();
    let mut external = 0u64;
    for &u in q.nodes() {
        for (v, w) in g.neighbors(u) {
            if !q.contains(v) {
                external += w;
            }
        }
    }
    Ok(intra as f64 / (intra + external) as f64)
}

/// (sum, average, minimum, maximum, population standard deviation).
fn aggregate(values: &[f64]) -> [f64; 5] {
    if values.is_empty() {
        return [0.0; 5];
    }
    let n = values.len() as f64;
    let sum: f64 = values.iter().sum();
    let mean = sum / n;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut var = 0.0;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
        var += (v - mean) * (v - mean);
    }
    [sum, mean, min, max, (var / n).sqrt()]
}

/// Extracts the 23-entry feature vector for `q`.
///
/// Multiplicity-dependent entries are evaluated on `current` (the graph the
/// clique was enumerated from, possibly after removals); the maximality
/// indicator is evaluated on `original`, the untouched input graph of the
/// reconstruction run. Errors when `q` is not a clique of `current`.
pub fn extract_features(
    current: &ProjectedGraph,
    original: &ProjectedGraph,
    q: &Clique,
) -> Result<CliqueFeatures> {
    if !is_clique(current, q) {
        return Err(Error::Validation(format!(
            "{q} is not a clique of the current graph"
        )));
    }
    let degrees: Vec<f64> = q
        .nodes()
        .iter()
        .map(|&u| weighted_degree(current, u) as f64)
        .collect();
    let mut weights = Vec::with_capacity(q.len() * (q.len() - 1) / 2);
    let mut mhhs = Vec::with_capacity(weights.capacity());
    let mut ratios = Vec::with_capacity(weights.capacity());
    for (u, v) in q.pairs() {
        let w = current.weight(u, v).expect("clique edge") as f64;
        let m = mhh_of_edge(current, u, v) as f64;
        weights.push(w);
        mhhs.push(m);
        ratios.push(m / w);
    }

    let maximal = is_clique(original, q) && is_maximal_in(original, q).expect("checked clique");

    let mut values = [0.0; FEATURE_LEN];
    values[layout::DEGREE..layout::DEGREE + 5].copy_from_slice(&aggregate(&degrees));
    values[layout::WEIGHT..layout::WEIGHT + 5].copy_from_slice(&aggregate(&weights));
    values[layout::MHH..layout::MHH + 5].copy_from_slice(&aggregate(&mhhs));
    values[layout::MHH_RATIO..layout::MHH_RATIO + 5].copy_from_slice(&aggregate(&ratios));
    values[layout::SIZE] = q.len() as f64;
    values[layout::CUT_RATIO] = clique_cut_ratio(current, q)?;
    values[layout::MAXIMAL] = if maximal { 1.0 } else { 0.0 };
    Ok(CliqueFeatures { values })
}

/// Writes one clique per line: the 23 tab-separated feature values followed
/// by the 0/1 label.
pub fn write_feature_dump(path: impl AsRef<Path>, rows: &[(CliqueFeatures, bool)]) -> Result<()> {
    let mut out = String::new();
    for (features, label) in rows {
        for v in features.values.iter() {
            let _ = write!(out, "{v}\t");
        }
        let _ = writeln!(out, "{}", u8::from(*label));
    }
    std::fs::write(path.as_ref(), out).map_err(|source| Error::Io {
        path: path.as_ref().display().to_string(),
        source,
    })
}
