//! Reconstruction of hypergraphs from their weighted projected graphs.
//!
//! The pipeline mirrors the supervised multiplicity-aware approach: a
//! preprocessing pass extracts size-2 hyperedges that the edge weights
//! guarantee ([`filtering`]), a small feed-forward scorer trained on
//! source-graph cliques ranks candidates ([`classifier`]), and a
//! bidirectional search over maximal cliques and sampled sub-cliques
//! consumes the graph until every unit of edge weight is explained
//! ([`search`]). [`metrics`] and [`baselines`] provide the evaluation
//! machinery.

pub mod baselines;
pub mod classifier;
pub mod cliques;
pub mod error;
pub mod features;
pub mod filtering;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod metrics;
pub mod parallel;
pub mod search;
pub mod seeds;
pub mod synth;

pub use classifier::{build_training_set, load_model, save_model, train, ScorerModel, TrainConfig};
pub use cliques::{is_clique, is_maximal_in, maximal_cliques, sample_subcliques, Clique};
pub use error::{Error, Result};
pub use features::{clique_cut_ratio, extract_features, weighted_degree, CliqueFeatures};
pub use filtering::{filter_guaranteed, mhh, residual, FilterReport};
pub use graph::ProjectedGraph;
pub use hypergraph::{split_hyperedges, Hypergraph, NodeId, SplitMode, SplitSpec};
pub use metrics::{
    jaccard, ks_statistic, multi_jaccard, normalized_difference, property_report, PropertyReport,
};
pub use search::{bidirectional_search, reconstruct, ReconstructionTrace, SearchConfig};
pub use synth::{generate_synthetic, SynthConfig};
