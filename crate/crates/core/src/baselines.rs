//! Clique-decomposition reference baselines: every maximal clique as a
//! hyperedge, and a greedy edge clique cover.

use std::collections::BTreeSet;

use crate::cliques::maximal_cliques;
use crate::graph::ProjectedGraph;
use crate::hypergraph::{Hypergraph, NodeId};

/// Every maximal clique of `g` becomes a multiplicity-1 hyperedge.
pub fn max_clique_baseline(g: &ProjectedGraph) -> Hypergraph {
    let mut out = Hypergraph::new(g.node_count());
    for q in maximal_cliques(g) {
        out.insert(q.nodes(), 1)
            .expect("maximal cliques are valid hyperedges");
    }
    out
}

/// Greedy edge clique cover: repeatedly emit the maximal clique covering the
/// most not-yet-covered edges (ties broken by canonical clique order) until
/// every edge of `g` is covered. Each emitted clique covers at least one new
/// edge.
pub fn clique_cover_baseline(g: &ProjectedGraph) -> Hypergraph {
    let cliques = maximal_cliques(g);
    let mut uncovered: BTreeSet<(NodeId, NodeId)> = g.edges().map(|(u, v, _)| (u, v)).collect();
    let mut gains: Vec<usize> = cliques
        .iter()
        .map(|q| q.len() * (q.len() - 1) / 2)
        .collect();
    let mut out = Hypergraph::new(g.node_count());
    while !uncovered.is_empty() {
        let best = (0..cliques.len())
            .max_by(|&a, &b| {
                gains[a]
                    .cmp(&gains[b])
                    .then_with(|| cliques[b].cmp(&cliques[a]))
            })
            .expect("maximal cliques cover every edge");
        debug_assert!(gains[best] > 0);
        out.insert(cliques[best].nodes(), 1)
            .expect("cliques are valid hyperedges");
        for (u, v) in cliques[best].pairs() {
            if uncovered.remove(&(u, v)) {
                // keep gains exact so emitted cliques always add new coverage
                for (i, q) in cliques.iter().enumerate() {
                    if q.contains(u) && q.contains(v) {
                        gains[i] -= 1;
                    }
                }
            }
        }
    }
    out
}
