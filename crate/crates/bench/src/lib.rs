//! Shared fixtures for the criterion benchmarks.

use hyperrec_core::classifier::{self, ScorerModel, TrainConfig};
use hyperrec_core::synth::{generate_synthetic, SynthConfig};
use hyperrec_core::{Hypergraph, ProjectedGraph};

/// A synthetic hypergraph with roughly `edges` projection edges (sizes 2-5,
/// 5% duplicates, node count proportional to instances).
pub fn synthetic_with_edges(edges: usize, seed: u64) -> Hypergraph {
    let instances = edges / 5;
    generate_synthetic(&SynthConfig {
        n_nodes: 2 * instances,
        n_hyperedges: instances,
        min_size: 2,
        max_size: 5,
        duplicate_prob: 0.05,
        seed,
    })
    .expect("feasible synthetic configuration")
}

/// A scorer trained on the projection of a small synthetic source, for
/// benchmarks that need realistic model weights.
pub fn trained_model(seed: u64) -> (ScorerModel, Hypergraph, ProjectedGraph) {
    let source = synthetic_with_edges(2_000, seed);
    let graph = source.clique_expansion();
    let cfg = TrainConfig {
        epochs: 20,
        seed,
        ..TrainConfig::default()
    };
    let examples = classifier::build_training_set(&graph, &source, &cfg).expect("consistent pair");
    let model = classifier::train(&examples, &cfg).expect("two-class data");
    (model, source, graph)
}
