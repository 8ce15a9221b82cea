//! Reconstruction accuracy metrics (Jaccard over unique hyperedges,
//! multiset Jaccard over multiplicities) and the structure-preservation
//! report (normalized scalar differences plus Kolmogorov-Smirnov distances
//! between degree distributions).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};

/// Jaccard similarity of the unique hyperedge sets. Two empty hypergraphs
/// compare as 1.0.
pub fn jaccard(a: &Hypergraph, b: &Hypergraph) -> f64 {
    let mut intersection = 0usize;
    for (e, _) in a.edges() {
        if b.contains(e) {
            intersection += 1;
        }
    }
    let union = a.unique_count() + b.unique_count() - intersection;
    if union == 0 {
        1.0
    } else {
        intersection as f64 / union as f64
    }
}

/// Jaccard similarity generalized to the hyperedge multisets:
/// `sum min(m_a, m_b) / sum max(m_a, m_b)` over the union of unique
/// hyperedges, with multiplicity 0 on the absent side. Two empty
/// hypergraphs compare as 1.0.
pub fn multi_jaccard(a: &Hypergraph, b: &Hypergraph) -> f64 {
    let mut min_sum = 0u64;
    let mut max_sum = 0u64;
    for (e, ma) in a.edges() {
        let mb = b.multiplicity(e);
        min_sum += ma.min(mb);
        max_sum += ma.max(mb);
    }
    for (e, mb) in b.edges() {
        if !a.contains(e) {
            max_sum += mb;
        }
    }
    if max_sum == 0 {
        1.0
    } else {
        min_sum as f64 / max_sum as f64
    }
}

/// `|x - y| / max(x, y)` for non-negative scalars; 0 when both are 0.
pub fn normalized_difference(x: f64, y: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0);
    let m = x.max(y);
    if m == 0.0 {
        0.0
    } else {
        (x - y).abs() / m
    }
}

/// Two-sample Kolmogorov-Smirnov D-statistic: the sup-norm distance between
/// the empirical CDFs. Errors on empty samples.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Validation(
            "ks_statistic requires non-empty samples".into(),
        ));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite sample values"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("finite sample values"));
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d.min(1.0))
}

/// One scalar property of both hypergraphs and their normalized difference.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarEntry {
    pub name: &'static str,
    pub truth: f64,
    pub reconstruction: f64,
    pub normalized_difference: f64,
}

/// One distributional property compared by KS D-statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionEntry {
    pub name: &'static str,
    pub ks: f64,
}

/// Structure-preservation report.
///
/// Degrees count hyperedge instances: the degree of a node (pair, triple)
/// is the number of instances containing it. Density is the instance count
/// over the node count. Pair and triple degrees are compared over the union
/// support of groups co-appearing in at least one hyperedge of either side.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub scalars: Vec<ScalarEntry>,
    pub distributions: Vec<DistributionEntry>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<24} {:>14} {:>14} {:>10}",
            "scalar property", "truth", "recon", "norm.diff"
        )?;
        for s in &self.scalars {
            writeln!(
                f,
                "{:<24} {:>14.4} {:>14.4} {:>10.4}",
                s.name, s.truth, s.reconstruction, s.normalized_difference
            )?;
        }
        writeln!(f, "{:<24} {:>10}", "distributional property", "KS")?;
        for d in &self.distributions {
            writeln!(f, "{:<24} {:>10.4}", d.name, d.ks)?;
        }
        Ok(())
    }
}

fn node_degrees(h: &Hypergraph) -> Vec<f64> {
    let mut deg = vec![0u64; h.node_count()];
    for (nodes, m) in h.edges() {
        for &u in nodes {
            deg[u.index()] += m;
        }
    }
    deg.into_iter().map(|d| d as f64).collect()
}

fn pair_degrees(h: &Hypergraph) -> BTreeMap<(NodeId, NodeId), u64> {
    let mut map = BTreeMap::new();
    for (nodes, m) in h.edges() {
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                *map.entry((nodes[i], nodes[j])).or_insert(0) += m;
            }
        }
    }
    map
}

fn triple_degrees(h: &Hypergraph) -> BTreeMap<(NodeId, NodeId, NodeId), u64> {
    let mut map = BTreeMap::new();
    for (nodes, m) in h.edges() {
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                for k in (j + 1)..nodes.len() {
                    *map.entry((nodes[i], nodes[j], nodes[k])).or_insert(0) += m;
                }
            }
        }
    }
    map
}

/// Samples over the union support: groups present in either map, with
/// count 0 on the absent side.
fn union_samples<K: Ord + Copy>(
    a: &BTreeMap<K, u64>,
    b: &BTreeMap<K, u64>,
) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, &va) in a {
        xs.push(va as f64);
        ys.push(b.get(k).copied().unwrap_or(0) as f64);
    }
    for (k, &vb) in b {
        if !a.contains_key(k) {
            xs.push(0.0);
            ys.push(vb as f64);
        }
    }
    (xs, ys)
}

fn ks_or_zero(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    ks_statistic(a, b).unwrap_or(1.0)
}

/// Compares the structural properties of a reconstruction against the truth.
pub fn property_report(truth: &Hypergraph, recon: &Hypergraph) -> PropertyReport {
    let deg_t = node_degrees(truth);
    let deg_r = node_degrees(recon);
    let instances_t = truth.instance_count() as f64;
    let instances_r = recon.instance_count() as f64;
    let size_sum =
        |h: &Hypergraph| -> f64 { h.edges().map(|(e, m)| (e.len() as u64 * m) as f64).sum() };
    let non_isolated = |deg: &[f64]| deg.iter().filter(|&&d| d > 0.0).count().max(1) as f64;

    let scalar = |name, t: f64, r: f64| ScalarEntry {
        name,
        truth: t,
        reconstruction: r,
        normalized_difference: normalized_difference(t, r),
    };
    let scalars = vec![
        scalar(
            "number of nodes",
            truth.node_count() as f64,
            recon.node_count() as f64,
        ),
        scalar("number of hyperedges", instances_t, instances_r),
        scalar(
            "average node degree",
            size_sum(truth) / non_isolated(&deg_t),
            size_sum(recon) / non_isolated(&deg_r),
        ),
        scalar(
            "average hyperedge size",
            if instances_t == 0.0 {
                0.0
            } else {
                size_sum(truth) / instances_t
            },
            if instances_r == 0.0 {
                0.0
            } else {
                size_sum(recon) / instances_r
            },
        ),
        scalar(
            "hypergraph density",
            instances_t / truth.node_count().max(1) as f64,
            instances_r / recon.node_count().max(1) as f64,
        ),
    ];

    let (pt, pr) = (pair_degrees(truth), pair_degrees(recon));
    let (pair_t, pair_r) = union_samples(&pt, &pr);
    let (tt, tr) = (triple_degrees(truth), triple_degrees(recon));
    let (triple_t, triple_r) = union_samples(&tt, &tr);
    let distributions = vec![
        DistributionEntry {
            name: "node degree",
            ks: ks_or_zero(&deg_t, &deg_r),
        },
        DistributionEntry {
            name: "node-pair degree",
            ks: ks_or_zero(&pair_t, &pair_r),
        },
        DistributionEntry {
            name: "node-triple degree",
            ks: ks_or_zero(&triple_t, &triple_r),
        },
    ];
    PropertyReport {
        scalars,
        distributions,
    }
}
