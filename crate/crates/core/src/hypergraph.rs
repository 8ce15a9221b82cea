//! Core hypergraph data model: node identifiers, the multiset of hyperedges,
//! clique expansion, multiplicity reduction, and dataset splitting.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::ProjectedGraph;
use crate::seeds::sub_seed;

/// Dense node index. Loaders remap arbitrary input labels to dense ids in
/// `[0, node_count)` and keep the mapping alongside.
#[derive(
    Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A hypergraph stored as unique hyperedge -> multiplicity.
///
/// Hyperedges are kept in canonical form (strictly increasing node ids,
/// length >= 2) and the multiset of hyperedge instances is recoverable as
/// each unique hyperedge repeated `multiplicity` times, in canonical order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    node_count: usize,
    edges: BTreeMap<Vec<NodeId>, u64>,
}

impl Hypergraph {
    pub fn new(node_count: usize) -> Self {
        Hypergraph {
            node_count,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a hypergraph from an iterator of (node set, multiplicity) pairs.
    /// Node sets are canonicalized; repeated sets accumulate multiplicity.
    pub fn from_edges<I, E>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, u64)>,
        E: AsRef<[NodeId]>,
    {
        let mut h = Hypergraph::new(node_count);
        for (nodes, m) in edges {
            h.insert(nodes.as_ref(), m)?;
        }
        Ok(h)
    }

    /// Adds `multiplicity` instances of the hyperedge over `nodes`.
    ///
    /// Duplicated node ids collapse; a hyperedge must span at least two
    /// distinct nodes and all ids must be below `node_count`.
    pub fn insert(&mut self, nodes: &[NodeId], multiplicity: u64) -> Result<()> {
        if multiplicity == 0 {
            return Err(Error::Validation(
                "hyperedge multiplicity must be >= 1".into(),
            ));
        }
        let canon = canonical_nodes(nodes);
        if canon.len() < 2 {
            return Err(Error::Validation(format!(
                "hyperedge must contain at least 2 distinct nodes, got {:?}",
                nodes
            )));
        }
        if let Some(max) = canon.last() {
            if max.index() >= self.node_count {
                return Err(Error::Validation(format!(
                    "node id {} out of range (node_count = {})",
                    max, self.node_count
                )));
            }
        }
        *self.edges.entry(canon).or_insert(0) += multiplicity;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of unique hyperedges.
    pub fn unique_count(&self) -> usize {
        self.edges.len()
    }

    /// Total number of hyperedge instances (sum of multiplicities).
    pub fn instance_count(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn multiplicity(&self, nodes: &[NodeId]) -> u64 {
        self.edges
            .get(&canonical_nodes(nodes))
            .copied()
            .unwrap_or(0)
    }

    pub fn contains(&self, nodes: &[NodeId]) -> bool {
        self.multiplicity(nodes) > 0
    }

    /// Unique hyperedges with multiplicities, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (&[NodeId], u64)> {
        self.edges.iter().map(|(e, &m)| (e.as_slice(), m))
    }

    /// The instance multiset, expanded in canonical order.
    pub fn instances(&self) -> impl Iterator<Item = &[NodeId]> {
        self.edges
            .iter()
            .flat_map(|(e, &m)| std::iter::repeat_n(e.as_slice(), m as usize))
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Same unique hyperedge set with every multiplicity forced to 1.
    pub fn reduce_multiplicity(&self) -> Hypergraph {
        Hypergraph {
            node_count: self.node_count,
            edges: self.edges.keys().map(|e| (e.clone(), 1)).collect(),
        }
    }

    /// Weighted projected graph of this hypergraph: `{u, v}` is an edge iff
    /// some hyperedge contains both, with weight equal to the number of
    /// instances containing both.
    pub fn clique_expansion(&self) -> ProjectedGraph {
        let mut g = ProjectedGraph::new(self.node_count);
        for (nodes, m) in self.edges() {
            for i in 0..nodes.len() {
                for j in (i + 1)..nodes.len() {
                    g.add_weight(nodes[i], nodes[j], m);
                }
            }
        }
        g
    }
}

fn canonical_nodes(nodes: &[NodeId]) -> Vec<NodeId> {
    let mut v = nodes.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// How to split a hypergraph's instance multiset into source/target halves.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SplitMode {
    RandomHalves,
    TimestampHalves,
}

/// Split configuration. Timestamps, when given, are aligned with the
/// canonical instance enumeration of the hypergraph being split (the order
/// produced by [`Hypergraph::instances`]).
#[derive(Clone, Debug)]
pub struct SplitSpec {
    pub mode: SplitMode,
    pub seed: u64,
    pub timestamps: Option<Vec<i64>>,
}

impl SplitSpec {
    pub fn random(seed: u64) -> Self {
        SplitSpec {
            mode: SplitMode::RandomHalves,
            seed,
            timestamps: None,
        }
    }

    pub fn by_timestamps(timestamps: Vec<i64>) -> Self {
        SplitSpec {
            mode: SplitMode::TimestampHalves,
            seed: 0,
            timestamps: Some(timestamps),
        }
    }
}

/// Partitions the instance multiset into two halves whose sizes differ by at
/// most one; the source receives the extra instance when the count is odd.
///
/// Random mode shuffles instances with a seeded generator; timestamp mode
/// puts the earliest instances in the source. Both halves keep the full
/// node count.
pub fn split_hyperedges(h: &Hypergraph, spec: &SplitSpec) -> Result<(Hypergraph, Hypergraph)> {
    if h.is_empty() {
        return Err(Error::Validation("cannot split an empty hypergraph".into()));
    }
    let instances: Vec<&[NodeId]> = h.instances().collect();
    let n = instances.len();
    let mut order: Vec<usize> = (0..n).collect();
    match spec.mode {
        SplitMode::RandomHalves => {
            let mut rng = ChaCha12Rng::seed_from_u64(sub_seed(spec.seed, "split"));
            order.shuffle(&mut rng);
        }
        SplitMode::TimestampHalves => {
            let ts = spec.timestamps.as_ref().ok_or_else(|| {
                Error::Config(
                    "timestamp split requires one timestamp per hyperedge instance".into(),
                )
            })?;
            if ts.len() != n {
                return Err(Error::Config(format!(
                    "timestamp count {} does not match instance count {}",
                    ts.len(),
                    n
                )));
            }
            order.sort_by_key(|&i| (ts[i], i));
        }
    }
    let cut = n.div_ceil(2);
    let mut source = Hypergraph::new(h.node_count());
    let mut target = Hypergraph::new(h.node_count());
    for (rank, &i) in order.iter().enumerate() {
        let side = if rank < cut { &mut source } else { &mut target };
        side.insert(instances[i], 1)?;
    }
    Ok((source, target))
}
