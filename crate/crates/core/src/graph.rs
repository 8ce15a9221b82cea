//! Undirected weighted projected graph with positive integer edge weights.

use smallvec::SmallVec;

use crate::hypergraph::NodeId;

// Low-degree nodes keep their adjacency inline; sparse graphs with millions
// of nodes then cost no per-node heap allocation.
type AdjRow = SmallVec<[(NodeId, u64); 4]>;

/// Weighted projected graph. Edge weights are always >= 1; an edge whose
/// weight reaches 0 is removed. Adjacency is symmetric and kept sorted by
/// neighbor id, so edge iteration is canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectedGraph {
    adj: Vec<AdjRow>,
    edge_count: usize,
    total_weight: u64,
}

impl ProjectedGraph {
    pub fn new(node_count: usize) -> Self {
        ProjectedGraph {
            adj: vec![AdjRow::new(); node_count],
            edge_count: 0,
            total_weight: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn has_edges(&self) -> bool {
        self.edge_count > 0
    }

    fn slot(&self, u: NodeId, v: NodeId) -> Result<usize, usize> {
        self.adj[u.index()].binary_search_by_key(&v, |&(n, _)| n)
    }

    /// Adds `w` to the weight of `{u, v}`, creating the edge if absent.
    ///
    /// # Panics
    /// Panics on self-loops, zero weight, or out-of-range ids; callers
    /// construct graphs from already-validated hypergraphs or loaders.
    pub fn add_weight(&mut self, u: NodeId, v: NodeId, w: u64) {
        assert!(u != v, "self-loop {u}");
        assert!(w > 0, "zero edge weight");
        assert!(u.index() < self.adj.len() && v.index() < self.adj.len());
        match self.slot(u, v) {
            Ok(i) => {
                self.adj[u.index()][i].1 += w;
                let j = self.slot(v, u).expect("adjacency is symmetric");
                self.adj[v.index()][j].1 += w;
            }
            Err(i) => {
                self.adj[u.index()].insert(i, (v, w));
                let j = self.slot(v, u).unwrap_err();
                self.adj[v.index()].insert(j, (u, w));
                self.edge_count += 1;
            }
        }
        self.total_weight += w;
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        let row = self.adj.get(u.index())?;
        row.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.weight(u, v).is_some()
    }

    /// Neighbors of `u` with edge weights, in increasing node-id order.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        self.adj[u.index()].iter().copied()
    }

    /// Number of neighbors of `u`.
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u.index()].len()
    }

    /// Sum of the weights of edges incident to `u`; 0 for isolated nodes.
    pub fn weighted_degree(&self, u: NodeId) -> u64 {
        self.adj[u.index()].iter().map(|&(_, w)| w).sum()
    }

    /// All edges `(u, v, w)` with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            let u = NodeId(u as u32);
            let start = row.partition_point(|&(v, _)| v <= u);
            row[start..].iter().map(move |&(v, w)| (u, v, w))
        })
    }

    fn remove_slot(&mut self, u: NodeId, v: NodeId, i: usize) {
        self.adj[u.index()].remove(i);
        let j = self.slot(v, u).expect("adjacency is symmetric");
        self.adj[v.index()].remove(j);
        self.edge_count -= 1;
    }

    /// Decrements the weight of `{u, v}` by one, removing the edge when it
    /// reaches zero. Returns the remaining weight, or `None` if the edge was
    /// not present.
    pub fn decrement_edge(&mut self, u: NodeId, v: NodeId) -> Option<u64> {
        let i = self.slot(u, v).ok()?;
        let w = self.adj[u.index()][i].1;
        if w == 1 {
            self.remove_slot(u, v, i);
        } else {
            self.adj[u.index()][i].1 = w - 1;
            let j = self.slot(v, u).expect("adjacency is symmetric");
            self.adj[v.index()][j].1 = w - 1;
        }
        self.total_weight -= 1;
        Some(w - 1)
    }

    /// Subtracts `amount` from the weight of `{u, v}`, removing the edge if
    /// the weight is exhausted. Returns the remaining weight.
    pub fn subtract_weight(&mut self, u: NodeId, v: NodeId, amount: u64) -> Option<u64> {
        let i = self.slot(u, v).ok()?;
        let w = self.adj[u.index()][i].1;
        let take = amount.min(w);
        if take == w {
            self.remove_slot(u, v, i);
        } else {
            self.adj[u.index()][i].1 = w - take;
            let j = self.slot(v, u).expect("adjacency is symmetric");
            self.adj[v.index()][j].1 = w - take;
        }
        self.total_weight -= take;
        Some(w - take)
    }
}
