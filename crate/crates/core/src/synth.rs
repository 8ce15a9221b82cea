//! Synthetic hypergraph generator for tests and scaling studies.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::seeds::sub_seed;

/// Parameters for [`generate_synthetic`].
#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub n_nodes: usize,
    /// Number of hyperedge instances to draw.
    pub n_hyperedges: usize,
    /// Inclusive size range; sizes are drawn uniformly.
    pub min_size: usize,
    pub max_size: usize,
    /// Probability that an instance duplicates a previously drawn one,
    /// raising its multiplicity.
    pub duplicate_prob: f64,
    pub seed: u64,
}

/// Draws a random hypergraph: each instance is either a duplicate of an
/// earlier instance (with probability `duplicate_prob`) or a fresh uniform
/// node subset of uniform size in `[min_size, max_size]`. Deterministic for
/// a given seed.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<Hypergraph> {
    if cfg.min_size < 2 {
        return Err(Error::Config("minimum hyperedge size must be >= 2".into()));
    }
    if cfg.max_size < cfg.min_size {
        return Err(Error::Config(format!(
            "max_size {} below min_size {}",
            cfg.max_size, cfg.min_size
        )));
    }
    if cfg.n_hyperedges > 0 && cfg.n_nodes < cfg.max_size {
        return Err(Error::Config(format!(
            "n_nodes {} cannot host hyperedges of size {}",
            cfg.n_nodes, cfg.max_size
        )));
    }
    if !(0.0..=1.0).contains(&cfg.duplicate_prob) {
        return Err(Error::Config("duplicate_prob must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(sub_seed(cfg.seed, "synth"));
    let mut instances: Vec<Vec<NodeId>> = Vec::with_capacity(cfg.n_hyperedges);
    for _ in 0..cfg.n_hyperedges {
        if !instances.is_empty() && rng.gen_bool(cfg.duplicate_prob) {
            let i = rng.gen_range(0..instances.len());
            instances.push(instances[i].clone());
            continue;
        }
        let size = rng.gen_range(cfg.min_size..=cfg.max_size);
        let mut nodes: Vec<NodeId> = sample(&mut rng, cfg.n_nodes, size)
            .into_iter()
            .map(|i| NodeId(i as u32))
            .collect();
        nodes.sort_unstable();
        instances.push(nodes);
    }
    let mut h = Hypergraph::new(cfg.n_nodes);
    for nodes in &instances {
        h.insert(nodes, 1)?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_hyperedges_gives_empty_hypergraph() {
        let cfg = SynthConfig {
            n_nodes: 5,
            n_hyperedges: 0,
            min_size: 2,
            max_size: 4,
            duplicate_prob: 0.0,
            seed: 0,
        };
        let h = generate_synthetic(&cfg).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.node_count(), 5);
    }

    #[test]
    fn same_seed_is_reproducible() {
        let cfg = SynthConfig {
            n_nodes: 50,
            n_hyperedges: 80,
            min_size: 2,
            max_size: 5,
            duplicate_prob: 0.2,
            seed: 11,
        };
        assert_eq!(
            generate_synthetic(&cfg).unwrap(),
            generate_synthetic(&cfg).unwrap()
        );
        let mut other = cfg.clone();
        other.seed = 12;
        assert_ne!(
            generate_synthetic(&cfg).unwrap(),
            generate_synthetic(&other).unwrap()
        );
    }

    #[test]
    fn projection_weight_matches_pair_count_identity() {
        let cfg = SynthConfig {
            n_nodes: 100,
            n_hyperedges: 200,
            min_size: 2,
            max_size: 5,
            duplicate_prob: 0.1,
            seed: 7,
        };
        let h = generate_synthetic(&cfg).unwrap();
        let g = h.clique_expansion();
        let expected: u64 = h
            .edges()
            .map(|(nodes, m)| m * (nodes.len() as u64 * (nodes.len() as u64 - 1) / 2))
            .sum();
        assert_eq!(g.total_weight(), expected);
    }

    #[test]
    fn infeasible_parameters_are_config_errors() {
        let cfg = SynthConfig {
            n_nodes: 3,
            n_hyperedges: 10,
            min_size: 2,
            max_size: 5,
            duplicate_prob: 0.0,
            seed: 0,
        };
        assert!(matches!(generate_synthetic(&cfg), Err(Error::Config(_))));
    }
}
