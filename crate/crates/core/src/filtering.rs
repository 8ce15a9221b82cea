//! Guaranteed size-2 hyperedge extraction.
//!
//! For an edge `{u, v}` of the projected graph, `mhh(u, v)` bounds from
//! above the number of hyperedges of size >= 3 that can contain both `u`
//! and `v`, so any weight beyond it — the residual — can only come from
//! size-2 hyperedges. [`filter_guaranteed`] emits those residuals as
//! hyperedges and removes them from the graph in a single pass.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ProjectedGraph;
use crate::hypergraph::{Hypergraph, NodeId};
use crate::parallel;

/// Maximum possible number of size->=3 hyperedges containing both `u` and
/// `v`: the sum over common neighbors `z` of `min(w(u,z), w(v,z))`. Errors
/// when `{u, v}` is not an edge of `g`.
pub fn mhh(g: &ProjectedGraph, u: NodeId, v: NodeId) -> Result<u64> {
    if !g.has_edge(u, v) {
        return Err(Error::Validation(format!(
            "edge {{{u},{v}}} is not in the graph"
        )));
    }
    Ok(mhh_of_edge(g, u, v))
}

/// `mhh` without the edge-existence check; used where the edge is known to
/// exist (intra-clique pairs, the filtering pass itself).
pub(crate) fn mhh_of_edge(g: &ProjectedGraph, u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if g.degree(u) <= g.degree(v) {
        (u, v)
    } else {
        (v, u)
    };
    let mut sum = 0;
    for (z, w_az) in g.neighbors(a) {
        if z == b {
            continue;
        }
        if let Some(w_bz) = g.weight(b, z) {
            sum += w_az.min(w_bz);
        }
    }
    sum
}

/// Residual edge multiplicity `w(u,v) - mhh(u,v)`. A positive residual is a
/// guaranteed count of size-2 hyperedges `{u, v}`; negative residuals carry
/// no guarantee.
pub fn residual(g: &ProjectedGraph, u: NodeId, v: NodeId) -> Result<i64> {
    let w = g
        .weight(u, v)
        .ok_or_else(|| Error::Validation(format!("edge {{{u},{v}}} is not in the graph")))?;
    Ok(w as i64 - mhh(g, u, v)? as i64)
}

/// Summary of one filtering pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterReport {
    /// Emitted guaranteed size-2 hyperedges: pair -> residual count.
    pub guaranteed: BTreeMap<(NodeId, NodeId), u64>,
    /// Edges whose weight dropped to zero and were deleted.
    pub edges_removed: usize,
    /// Total weight taken out of the graph (= total emitted multiplicity).
    pub total_multiplicity_removed: u64,
    /// Edges whose residual was negative (diagnostic only; never emitted).
    pub negative_residual_edges: usize,
}

impl fmt::Display for FilterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "guaranteed-pairs={}", self.guaranteed.len())?;
        writeln!(
            f,
            "multiplicity-removed={}",
            self.total_multiplicity_removed
        )?;
        writeln!(f, "edges-removed={}", self.edges_removed)?;
        write!(
            f,
            "negative-residual-edges={}",
            self.negative_residual_edges
        )
    }
}

/// Contiguous adjacency snapshot used by the bulk filtering pass; neighbor
/// slices are sorted by node id. Weights are stored as `u32` when every
/// weight fits (the bandwidth-light common case) and as exact `u64`
/// otherwise.
struct AdjacencySnapshot<W> {
    offsets: Vec<usize>,
    neighbors: Vec<(u32, W)>,
}

impl<W: Copy + Ord + Into<u64> + TryFrom<u64>> AdjacencySnapshot<W> {
    fn build(g: &ProjectedGraph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for u in 0..n {
            neighbors.extend(g.neighbors(NodeId(u as u32)).map(|(v, w)| {
                let w = W::try_from(w).unwrap_or_else(|_| unreachable!("weight checked to fit"));
                (v.0, w)
            }));
            offsets.push(neighbors.len());
        }
        AdjacencySnapshot { offsets, neighbors }
    }

    fn row(&self, u: u32) -> &[(u32, W)] {
        &self.neighbors[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    /// Eq.-style mhh: walk the shorter sorted row, binary-search the longer.
    fn mhh(&self, u: u32, v: u32) -> u64 {
        let (mut short, mut long) = (self.row(u), self.row(v));
        let mut other = v;
        if short.len() > long.len() {
            std::mem::swap(&mut short, &mut long);
            other = u;
        }
        let mut sum = 0u64;
        for &(z, w_short) in short {
            if z == other {
                continue;
            }
            if let Ok(i) = long.binary_search_by_key(&z, |&(n, _)| n) {
                sum += w_short.min(long[i].1).into();
            }
        }
        sum
    }
}

/// Runs the single-pass guaranteed filter. All `mhh` values are evaluated
/// against the original input weights; removals are applied afterwards.
/// Returns the reduced graph, the emitted size-2 hyperedges as a hypergraph
/// delta, and the report.
pub fn filter_guaranteed(g: &ProjectedGraph) -> (ProjectedGraph, Hypergraph, FilterReport) {
    let edges: Vec<(NodeId, NodeId, u64)> = g.edges().collect();
    let compute = |mhh: &(dyn Fn(u32, u32) -> u64 + Sync)| -> Vec<i64> {
        parallel::pool().install(|| {
            edges
                .par_iter()
                .map(|&(u, v, w)| w as i64 - mhh(u.0, v.0) as i64)
                .collect()
        })
    };
    let residuals: Vec<i64> = if edges.iter().all(|&(_, _, w)| w <= u64::from(u32::MAX)) {
        let snapshot = AdjacencySnapshot::<u32>::build(g);
        compute(&|u, v| snapshot.mhh(u, v))
    } else {
        let snapshot = AdjacencySnapshot::<u64>::build(g);
        compute(&|u, v| snapshot.mhh(u, v))
    };

    let mut out = g.clone();
    let mut delta = Hypergraph::new(g.node_count());
    let mut report = FilterReport::default();
    for (&(u, v, _), &r) in edges.iter().zip(&residuals) {
        if r > 0 {
            let r = r as u64;
            report.guaranteed.insert((u, v), r);
            report.total_multiplicity_removed += r;
            delta.insert(&[u, v], r).expect("pair is a valid hyperedge");
            if out.subtract_weight(u, v, r) == Some(0) {
                report.edges_removed += 1;
            }
        } else if r < 0 {
            report.negative_residual_edges += 1;
        }
    }
    (out, delta, report)
}
