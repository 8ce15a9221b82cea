//! The reconstruction engine: a guaranteed filtering pass followed by
//! iterated bidirectional search over maximal cliques with an adaptively
//! decaying acceptance threshold.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::classifier::ScorerModel;
use crate::cliques::{is_clique, maximal_cliques, sample_subcliques, Clique};
use crate::error::{Error, Result};
use crate::features::extract_features;
use crate::filtering::{filter_guaranteed, FilterReport};
use crate::graph::ProjectedGraph;
use crate::hypergraph::Hypergraph;
use crate::parallel;
use crate::seeds::sub_seed;

/// Knobs of the outer reconstruction loop.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Initial classification threshold, in (0, 1].
    pub theta_init: f64,
    /// Share of below-threshold cliques whose sub-cliques are explored,
    /// in (0, 100].
    pub r_percent: f64,
    /// Per-iteration threshold decay, as a fraction of `theta_init`.
    pub alpha: f64,
    /// Safety cap on scored iterations; 0 means `10 * ceil(1 / alpha)`.
    pub max_iterations: usize,
    pub seed: u64,
    /// After the cap, keep accepting remaining maximal cliques at threshold
    /// zero until the graph empties. Disabling turns exhaustion into an
    /// error carrying the partial reconstruction.
    pub exhaustion_fallback: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            theta_init: 0.9,
            r_percent: 10.0,
            alpha: 1.0 / 20.0,
            max_iterations: 0,
            seed: 42,
            exhaustion_fallback: true,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if !(self.theta_init > 0.0 && self.theta_init <= 1.0) {
            return Err(Error::Config("theta_init must lie in (0, 1]".into()));
        }
        if !(self.r_percent > 0.0 && self.r_percent <= 100.0) {
            return Err(Error::Config("r_percent must lie in (0, 100]".into()));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Config("alpha must be positive".into()));
        }
        Ok(())
    }

    fn iteration_cap(&self) -> usize {
        if self.max_iterations > 0 {
            self.max_iterations
        } else {
            10 * (1.0 / self.alpha).ceil() as usize
        }
    }
}

/// Counters from one bidirectional pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseStats {
    pub cliques: usize,
    pub promising: usize,
    pub unpromising_examined: usize,
    pub subcliques_scored: usize,
    pub accepted_phase1: usize,
    pub accepted_phase2: usize,
}

/// One row of the reconstruction trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub theta: f64,
    pub stats: PhaseStats,
    /// Total projection weight left after the iteration.
    pub remaining_weight: u64,
    /// True for sweeps run by the exhaustion fallback.
    pub fallback: bool,
}

/// Diagnostics of a full reconstruction run.
#[derive(Clone, Debug, Default)]
pub struct ReconstructionTrace {
    pub filter: FilterReport,
    pub records: Vec<IterationRecord>,
}

impl fmt::Display for ReconstructionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "% guaranteed-pairs={} filtered-multiplicity={}",
            self.filter.guaranteed.len(),
            self.filter.total_multiplicity_removed
        )?;
        writeln!(
            f,
            "iter\ttheta\tcliques\tpromising\texamined\taccepted1\taccepted2\tremaining\tfallback"
        )?;
        for r in &self.records {
            writeln!(
                f,
                "{}\t{:.6}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.iteration,
                r.theta,
                r.stats.cliques,
                r.stats.promising,
                r.stats.unpromising_examined,
                r.stats.accepted_phase1,
                r.stats.accepted_phase2,
                r.remaining_weight,
                u8::from(r.fallback),
            )?;
        }
        Ok(())
    }
}

/// Scores every maximal clique of `g` against the frozen iteration
/// snapshot, then runs the two acceptance phases:
///
/// 1. cliques scoring above `theta`, in descending score order, each
///    accepted only while all of its pairs still exist in `g`; accepted
///    cliques decrement their intra-clique weights by one;
/// 2. one random sub-clique per size of the lowest-scored `r_percent` of
///    the below-threshold cliques, filtered by the same threshold and
///    processed with the same guard and decrement rule.
///
/// Returns the accepted cliques in acceptance order. `original` is the
/// untouched input graph of the run (used only by the maximality feature).
pub fn bidirectional_search<R: Rng>(
    g: &mut ProjectedGraph,
    original: &ProjectedGraph,
    model: &ScorerModel,
    theta: f64,
    r_percent: f64,
    rng: &mut R,
) -> Result<(Vec<Clique>, PhaseStats)> {
    let mut stats = PhaseStats::default();
    let cliques = maximal_cliques(g);
    stats.cliques = cliques.len();
    if cliques.is_empty() {
        return Ok((Vec::new(), stats));
    }
    let scores = score_cliques(g, original, model, &cliques)?;

    let mut order: Vec<usize> = (0..cliques.len()).collect();
    order.sort_by(|&a, &b| rank_key(scores[a], &cliques[a], scores[b], &cliques[b]));
    let promising: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| scores[i] > theta)
        .collect();
    stats.promising = promising.len();

    // Least promising: lowest ceil(r%) of the rest, by ascending score.
    let mut rest: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| scores[i] <= theta)
        .collect();
    rest.sort_by(|&a, &b| {
        scores[a]
            .partial_cmp(&scores[b])
            .expect("scores are finite")
            .then_with(|| cliques[a].len().cmp(&cliques[b].len()))
            .then_with(|| cliques[a].cmp(&cliques[b]))
    });
    let take = ((r_percent / 100.0) * rest.len() as f64).ceil() as usize;
    let unpromising = &rest[..take.min(rest.len())];
    stats.unpromising_examined = unpromising.len();

    // Sub-cliques are sampled and scored against the same frozen snapshot
    // before any removal happens.
    let mut sub_set: BTreeSet<Clique> = BTreeSet::new();
    for &i in unpromising {
        for sub in sample_subcliques(&cliques[i], rng) {
            sub_set.insert(sub);
        }
    }
    let subs: Vec<Clique> = sub_set.into_iter().collect();
    let sub_scores = score_cliques(g, original, model, &subs)?;
    stats.subcliques_scored = subs.len();

    let mut accepted = Vec::new();

    // Phase 1: most promising cliques.
    for &i in &promising {
        accept_if_present(g, &cliques[i], &mut accepted, &mut stats.accepted_phase1);
    }

    // Phase 2: surviving sub-cliques of the least promising cliques.
    let mut sub_order: Vec<usize> = (0..subs.len()).filter(|&i| sub_scores[i] > theta).collect();
    sub_order.sort_by(|&a, &b| rank_key(sub_scores[a], &subs[a], sub_scores[b], &subs[b]));
    for i in sub_order {
        accept_if_present(g, &subs[i], &mut accepted, &mut stats.accepted_phase2);
    }

    Ok((accepted, stats))
}

/// Descending score; ties prefer smaller cliques, then lexicographic order.
fn rank_key(sa: f64, qa: &Clique, sb: f64, qb: &Clique) -> std::cmp::Ordering {
    sb.partial_cmp(&sa)
        .expect("scores are finite")
        .then_with(|| qa.len().cmp(&qb.len()))
        .then_with(|| qa.cmp(qb))
}

fn score_cliques(
    current: &ProjectedGraph,
    original: &ProjectedGraph,
    model: &ScorerModel,
    cliques: &[Clique],
) -> Result<Vec<f64>> {
    let features = parallel::pool().install(|| {
        cliques
            .par_iter()
            .map(|q| extract_features(current, original, q))
            .collect::<Result<Vec<_>>>()
    })?;
    model.score_batch(&features)
}

fn accept_if_present(
    g: &mut ProjectedGraph,
    q: &Clique,
    out: &mut Vec<Clique>,
    counter: &mut usize,
) {
    if !is_clique(g, q) {
        return;
    }
    for (u, v) in q.pairs() {
        g.decrement_edge(u, v).expect("guard checked the edge");
    }
    out.push(q.clone());
    *counter += 1;
}

/// Full reconstruction: one guaranteed filtering pass, then bidirectional
/// search until the graph empties, decaying the threshold by
/// `alpha * theta_init` per iteration with a floor of zero.
///
/// Accepted node sets accumulate as a multiset: re-accepting the same set
/// raises its multiplicity in the output hypergraph.
pub fn reconstruct(
    g: &ProjectedGraph,
    model: &ScorerModel,
    cfg: &SearchConfig,
) -> Result<(Hypergraph, ReconstructionTrace)> {
    cfg.validate()?;
    let (mut current, delta, filter_report) = filter_guaranteed(g);
    let mut out = delta;
    let mut trace = ReconstructionTrace {
        filter: filter_report,
        records: Vec::new(),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(sub_seed(cfg.seed, "search"));
    let mut theta = cfg.theta_init;
    let cap = cfg.iteration_cap();
    let mut iteration = 0usize;
    while current.has_edges() && iteration < cap {
        iteration += 1;
        let (accepted, stats) =
            bidirectional_search(&mut current, g, model, theta, cfg.r_percent, &mut rng)?;
        for q in &accepted {
            out.insert(q.nodes(), 1)
                .expect("accepted cliques are valid hyperedges");
        }
        trace.records.push(IterationRecord {
            iteration,
            theta,
            stats,
            remaining_weight: current.total_weight(),
            fallback: false,
        });
        theta = (theta - cfg.alpha * cfg.theta_init).max(0.0);
    }

    if current.has_edges() {
        if !cfg.exhaustion_fallback {
            return Err(Error::Incomplete {
                iterations: iteration,
                remaining_weight: current.total_weight(),
                partial: Box::new(out),
            });
        }
        // Exhaustion fallback: at threshold zero every clique scores above
        // the bar, so each sweep strictly reduces the remaining weight.
        while current.has_edges() {
            iteration += 1;
            let (accepted, stats) =
                bidirectional_search(&mut current, g, model, 0.0, cfg.r_percent, &mut rng)?;
            debug_assert!(
                !accepted.is_empty(),
                "a zero-threshold sweep always accepts"
            );
            for q in &accepted {
                out.insert(q.nodes(), 1)
                    .expect("accepted cliques are valid hyperedges");
            }
            trace.records.push(IterationRecord {
                iteration,
                theta: 0.0,
                stats,
                remaining_weight: current.total_weight(),
                fallback: true,
            });
        }
    }
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::MlpParams;
    use crate::features::{layout, FEATURE_LEN};
    use crate::hypergraph::NodeId;

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&x| NodeId(x)).collect()
    }

    fn clique(nodes: &[u32]) -> Clique {
        Clique::new(ids(nodes)).unwrap()
    }

    /// A hand-built scorer whose output strictly decreases with clique size:
    /// logistic(0.5 * (6 - |Q|)).
    fn size_ranked_model() -> ScorerModel {
        let mut m = ScorerModel::neutral();
        let mut p = MlpParams::zeros(FEATURE_LEN, 1);
        p.w1[0][layout::SIZE] = -1.0;
        p.b1[0] = 6.0;
        p.w2[0] = 0.5;
        p.b2 = 0.0;
        m.params = p;
        m
    }

    fn seeded_rng() -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(1)
    }

    #[test]
    fn overlapping_clique_fails_the_existence_guard() {
        // K4 on {2,3,5,6} plus a triangle {5,6,7}; all weights 1. The
        // triangle outscores the K4, and accepting it deletes edge {5,6},
        // so the K4 must be rejected by the guard.
        let mut g = ProjectedGraph::new(8);
        for (u, v) in [(2u32, 3), (2, 5), (2, 6), (3, 5), (3, 6), (5, 6)] {
            g.add_weight(NodeId(u), NodeId(v), 1);
        }
        g.add_weight(NodeId(5), NodeId(7), 1);
        g.add_weight(NodeId(6), NodeId(7), 1);
        let model = size_ranked_model();
        let original = g.clone();
        let theta = 0.55; // both cliques score above this
        let (accepted, stats) =
            bidirectional_search(&mut g, &original, &model, theta, 10.0, &mut seeded_rng())
                .unwrap();
        assert_eq!(accepted, vec![clique(&[5, 6, 7])]);
        assert_eq!(stats.promising, 2);
        assert_eq!(stats.accepted_phase1, 1);
        assert!(!g.has_edge(NodeId(5), NodeId(6)));
        assert!(g.has_edge(NodeId(2), NodeId(3)));
    }

    #[test]
    fn high_threshold_and_pair_cliques_accept_nothing() {
        let mut g = ProjectedGraph::new(4);
        g.add_weight(NodeId(0), NodeId(1), 1);
        g.add_weight(NodeId(2), NodeId(3), 1);
        let model = ScorerModel::neutral(); // scores 0.5 everywhere
        let original = g.clone();
        let (accepted, stats) =
            bidirectional_search(&mut g, &original, &model, 0.99, 100.0, &mut seeded_rng())
                .unwrap();
        assert!(accepted.is_empty());
        assert_eq!(stats.unpromising_examined, 2);
        assert_eq!(stats.subcliques_scored, 0); // size-2 cliques have no sub-cliques
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn single_edge_above_threshold_empties_the_graph() {
        let mut g = ProjectedGraph::new(2);
        g.add_weight(NodeId(0), NodeId(1), 1);
        let model = ScorerModel::neutral();
        let original = g.clone();
        let (accepted, _) =
            bidirectional_search(&mut g, &original, &model, 0.4, 10.0, &mut seeded_rng()).unwrap();
        assert_eq!(accepted, vec![clique(&[0, 1])]);
        assert!(!g.has_edges());
    }

    #[test]
    fn reconstruct_disjoint_pairs_needs_no_search() {
        let mut h = Hypergraph::new(6);
        h.insert(&ids(&[0, 1]), 1).unwrap();
        h.insert(&ids(&[2, 3]), 2).unwrap();
        h.insert(&ids(&[4, 5]), 1).unwrap();
        let g = h.clique_expansion();
        let (out, trace) =
            reconstruct(&g, &ScorerModel::neutral(), &SearchConfig::default()).unwrap();
        assert_eq!(out, h);
        assert!(trace.records.is_empty());
        assert_eq!(trace.filter.total_multiplicity_removed, 4);
    }

    #[test]
    fn reconstruct_doubled_pair_keeps_multiplicity() {
        let mut h = Hypergraph::new(2);
        h.insert(&ids(&[0, 1]), 2).unwrap();
        let g = h.clique_expansion();
        let (out, _) = reconstruct(&g, &ScorerModel::neutral(), &SearchConfig::default()).unwrap();
        assert_eq!(out, h);
    }

    #[test]
    fn theta_decays_linearly_with_floor_zero() {
        // a triangle survives filtering; the neutral model (0.5) never
        // clears theta until the decay brings it below 0.5
        let mut h = Hypergraph::new(3);
        h.insert(&ids(&[0, 1, 2]), 1).unwrap();
        let g = h.clique_expansion();
        let cfg = SearchConfig {
            theta_init: 0.8,
            alpha: 1.0 / 20.0,
            ..SearchConfig::default()
        };
        let (out, trace) = reconstruct(&g, &ScorerModel::neutral(), &cfg).unwrap();
        assert_eq!(out, h);
        // theta sequence: 0.8, 0.76, 0.72, ... (0.8 - k*0.04)
        for (k, rec) in trace.records.iter().enumerate() {
            let expected = (0.8 - k as f64 * 0.04).max(0.0);
            assert!((rec.theta - expected).abs() < 1e-12, "iteration {k}");
        }
        assert!((trace.records[3].theta - 0.68).abs() < 1e-12);
        // acceptance happens on the first iteration where theta < 0.5
        let accepting = trace
            .records
            .iter()
            .find(|r| r.stats.accepted_phase1 > 0)
            .unwrap();
        assert!(accepting.theta < 0.5);
        assert_eq!(accepting.remaining_weight, 0);
    }

    #[test]
    fn reconstruction_is_deterministic() {
        let mut h = Hypergraph::new(10);
        h.insert(&ids(&[0, 1, 2]), 2).unwrap();
        h.insert(&ids(&[2, 3, 4]), 1).unwrap();
        h.insert(&ids(&[4, 5]), 3).unwrap();
        h.insert(&ids(&[6, 7, 8, 9]), 1).unwrap();
        let g = h.clique_expansion();
        let cfg = SearchConfig::default();
        let model = size_ranked_model();
        let (a, ta) = reconstruct(&g, &model, &cfg).unwrap();
        let (b, tb) = reconstruct(&g, &model, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta.records, tb.records);
    }

    #[test]
    fn every_acceptance_decrements_exactly_its_pair_weights() {
        let mut h = Hypergraph::new(9);
        h.insert(&ids(&[0, 1, 2]), 2).unwrap();
        h.insert(&ids(&[0, 1]), 1).unwrap();
        h.insert(&ids(&[3, 4, 5]), 1).unwrap();
        h.insert(&ids(&[5, 6, 7, 8]), 2).unwrap();
        let g = h.clique_expansion();
        let (out, _) = reconstruct(&g, &ScorerModel::neutral(), &SearchConfig::default()).unwrap();
        // projection consistency: the reconstruction explains every unit of weight
        let explained: u64 = out
            .edges()
            .map(|(nodes, m)| m * (nodes.len() as u64 * (nodes.len() as u64 - 1) / 2))
            .sum();
        assert_eq!(explained, g.total_weight());
        assert_eq!(out.clique_expansion(), g);
    }

    #[test]
    fn remaining_weight_is_monotone_and_theta_nonincreasing() {
        let mut h = Hypergraph::new(8);
        h.insert(&ids(&[0, 1, 2, 3]), 3).unwrap();
        h.insert(&ids(&[3, 4, 5]), 2).unwrap();
        h.insert(&ids(&[5, 6, 7]), 1).unwrap();
        let g = h.clique_expansion();
        let (_, trace) =
            reconstruct(&g, &ScorerModel::neutral(), &SearchConfig::default()).unwrap();
        let mut prev_w = g.total_weight();
        let mut prev_theta = f64::INFINITY;
        for rec in &trace.records {
            assert!(rec.theta <= prev_theta);
            assert!(rec.remaining_weight <= prev_w);
            let accepted = rec.stats.accepted_phase1 + rec.stats.accepted_phase2;
            if accepted > 0 {
                assert!(rec.remaining_weight < prev_w);
            }
            prev_w = rec.remaining_weight;
            prev_theta = rec.theta;
        }
        assert_eq!(prev_w, 0);
    }

    #[test]
    fn disabled_fallback_reports_incomplete_with_partial_result() {
        let mut h = Hypergraph::new(3);
        h.insert(&ids(&[0, 1, 2]), 1).unwrap();
        let g = h.clique_expansion();
        let cfg = SearchConfig {
            theta_init: 0.9,
            max_iterations: 1,
            exhaustion_fallback: false,
            ..SearchConfig::default()
        };
        match reconstruct(&g, &ScorerModel::neutral(), &cfg) {
            Err(Error::Incomplete {
                iterations,
                remaining_weight,
                partial,
            }) => {
                assert_eq!(iterations, 1);
                assert_eq!(remaining_weight, 3);
                assert!(partial.is_empty());
            }
            other => panic!("expected incomplete-reconstruction error, got {other:?}"),
        }
    }

    #[test]
    fn fallback_sweeps_are_flagged_in_the_trace() {
        let mut h = Hypergraph::new(3);
        h.insert(&ids(&[0, 1, 2]), 1).unwrap();
        let g = h.clique_expansion();
        let cfg = SearchConfig {
            theta_init: 0.9,
            max_iterations: 1,
            ..SearchConfig::default()
        };
        let (out, trace) = reconstruct(&g, &ScorerModel::neutral(), &cfg).unwrap();
        assert_eq!(out, h);
        assert!(trace.records.iter().any(|r| r.fallback));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let g = ProjectedGraph::new(2);
        let model = ScorerModel::neutral();
        for cfg in [
            SearchConfig {
                theta_init: 0.0,
                ..SearchConfig::default()
            },
            SearchConfig {
                theta_init: 1.5,
                ..SearchConfig::default()
            },
            SearchConfig {
                r_percent: 0.0,
                ..SearchConfig::default()
            },
            SearchConfig {
                alpha: 0.0,
                ..SearchConfig::default()
            },
        ] {
            assert!(reconstruct(&g, &model, &cfg).is_err());
        }
    }
}
