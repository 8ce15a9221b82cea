//! Maximal clique enumeration (pivoted Bron-Kerbosch over a degeneracy
//! ordering) and the sub-clique sampling used by the search.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::ProjectedGraph;
use crate::hypergraph::NodeId;

/// A clique candidate: a canonically ordered node set of size >= 2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Clique {
    nodes: Vec<NodeId>,
}

impl Clique {
    /// Canonicalizes `nodes` (sorted, deduplicated); at least two distinct
    /// nodes are required.
    pub fn new(nodes: Vec<NodeId>) -> Result<Self> {
        let mut nodes = nodes;
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() < 2 {
            return Err(Error::Validation(format!(
                "clique needs at least 2 distinct nodes, got {nodes:?}"
            )));
        }
        Ok(Clique { nodes })
    }

    /// Wraps nodes already in strictly increasing order.
    pub(crate) fn from_sorted(nodes: Vec<NodeId>) -> Self {
        debug_assert!(nodes.len() >= 2 && nodes.windows(2).all(|w| w[0] < w[1]));
        Clique { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.nodes.binary_search(&n).is_ok()
    }

    /// All unordered node pairs of the clique.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(move |(i, &u)| self.nodes[i + 1..].iter().map(move |&v| (u, v)))
    }
}

impl std::fmt::Display for Clique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rendered: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", rendered.join(","))
    }
}

/// True iff every pair of `q` is an edge of `g`.
pub fn is_clique(g: &ProjectedGraph, q: &Clique) -> bool {
    q.nodes().last().is_some_and(|n| n.index() < g.node_count())
        && q.pairs().all(|(u, v)| g.has_edge(u, v))
}

/// True iff no node outside `q` is adjacent to all of `q`. Errors when `q`
/// is not a clique of `g`.
pub fn is_maximal_in(g: &ProjectedGraph, q: &Clique) -> Result<bool> {
    if !is_clique(g, q) {
        return Err(Error::Validation(format!(
            "{q} is not a clique of the graph"
        )));
    }
    // Extension candidates are limited to neighbors of the lowest-degree member.
    let probe = *q
        .nodes()
        .iter()
        .min_by_key(|&&n| g.degree(n))
        .expect("clique is non-empty");
    for (z, _) in g.neighbors(probe) {
        if q.contains(z) {
            continue;
        }
        if q.nodes().iter().all(|&u| u == z || g.has_edge(u, z)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exactly one uniformly sampled size-k subset of `q` for each
/// k in `{2, ..., |q| - 1}`, in canonical form. `|q| - 2` cliques total;
/// deterministic given the generator state.
pub fn sample_subcliques<R: Rng>(q: &Clique, rng: &mut R) -> Vec<Clique> {
    let n = q.len();
    let mut out = Vec::with_capacity(n.saturating_sub(2));
    for k in 2..n {
        let mut nodes: Vec<NodeId> = sample(rng, n, k)
            .into_iter()
            .map(|i| q.nodes()[i])
            .collect();
        nodes.sort_unstable();
        out.push(Clique::from_sorted(nodes));
    }
    out
}

/// All maximal cliques of size >= 2 in the unweighted skeleton of `g`,
/// canonically sorted.
pub fn maximal_cliques(g: &ProjectedGraph) -> Vec<Clique> {
    let n = g.node_count();
    let adj: Vec<Vec<u32>> = (0..n)
        .map(|u| g.neighbors(NodeId(u as u32)).map(|(v, _)| v.0).collect())
        .collect();
    let order = degeneracy_order(&adj);
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i;
    }

    let mut out = Vec::new();
    let mut r = Vec::new();
    for &v in &order {
        let nbrs = &adj[v as usize];
        let mut p: Vec<u32> = nbrs
            .iter()
            .copied()
            .filter(|&w| rank[w as usize] > rank[v as usize])
            .collect();
        let mut x: Vec<u32> = nbrs
            .iter()
            .copied()
            .filter(|&w| rank[w as usize] < rank[v as usize])
            .collect();
        p.sort_unstable();
        x.sort_unstable();
        r.push(v);
        bron_kerbosch(&adj, &mut r, p, x, &mut out);
        r.pop();
    }
    out.sort_unstable();
    out
}

fn bron_kerbosch(
    adj: &[Vec<u32>],
    r: &mut Vec<u32>,
    p: Vec<u32>,
    mut x: Vec<u32>,
    out: &mut Vec<Clique>,
) {
    if p.is_empty() {
        if x.is_empty() && r.len() >= 2 {
            let mut nodes: Vec<NodeId> = r.iter().map(|&v| NodeId(v)).collect();
            nodes.sort_unstable();
            out.push(Clique::from_sorted(nodes));
        }
        return;
    }
    // Pivot on the candidate covering most of P; ties fall to the lowest id.
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .min_by_key(|&u| (usize::MAX - intersect_count(&adj[u as usize], &p), u))
        .expect("P is non-empty");
    let pivot_nbrs = &adj[pivot as usize];
    let candidates: Vec<u32> = p
        .iter()
        .copied()
        .filter(|&v| pivot_nbrs.binary_search(&v).is_err())
        .collect();
    let mut p = p;
    for v in candidates {
        let nbrs = &adj[v as usize];
        let next_p = intersect(&p, nbrs);
        let next_x = intersect(&x, nbrs);
        r.push(v);
        bron_kerbosch(adj, r, next_p, next_x, out);
        r.pop();
        let i = p.binary_search(&v).expect("candidate still in P");
        p.remove(i);
        let j = x.binary_search(&v).unwrap_err();
        x.insert(j, v);
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersect_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Degeneracy (smallest-degree-first) vertex ordering via the linear-time
/// bucket algorithm. Deterministic for a given graph.
fn degeneracy_order(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    // vertices sorted by degree, with per-vertex positions and bucket starts
    let mut bucket_start = vec![0usize; max_deg + 2];
    for &d in &degree {
        bucket_start[d + 1] += 1;
    }
    for d in 1..bucket_start.len() {
        bucket_start[d] += bucket_start[d - 1];
    }
    let mut vert = vec![0u32; n];
    let mut pos = vec![0usize; n];
    {
        let mut cursor = bucket_start.clone();
        for v in 0..n {
            let d = degree[v];
            vert[cursor[d]] = v as u32;
            pos[v] = cursor[d];
            cursor[d] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    for i in 0..n {
        let v = vert[i];
        order.push(v);
        for &w in &adj[v as usize] {
            let wi = w as usize;
            if pos[wi] > i {
                // swap w to the front of its bucket, then shrink its degree
                let dw = degree[wi];
                let front = bucket_start[dw].max(i + 1);
                let other = vert[front];
                vert.swap(pos[wi], front);
                pos[other as usize] = pos[wi];
                pos[wi] = front;
                bucket_start[dw] = front + 1;
                degree[wi] -= 1;
            }
        }
    }
    order
}
