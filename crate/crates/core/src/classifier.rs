//! The clique scorer: a small feed-forward binary classifier trained to
//! recognize which cliques of a source projected graph are hyperedges of the
//! source hypergraph.
//!
//! The network is input(23) -> hidden(h) with rectifier -> logistic output,
//! trained with mini-batch Adam on binary cross-entropy. Features are
//! z-normalized with statistics frozen from the training set. Training is
//! single-threaded and fully deterministic for a given seed.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cliques::{maximal_cliques, sample_subcliques, Clique};
use crate::error::{Error, Result};
use crate::features::{extract_features, CliqueFeatures, FEATURE_LAYOUT_VERSION, FEATURE_LEN};
use crate::graph::ProjectedGraph;
use crate::hypergraph::Hypergraph;
use crate::parallel;
use crate::seeds::sub_seed;

/// Training hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Negatives sampled per positive.
    pub negative_ratio: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden_size: 64,
            learning_rate: 1e-3,
            epochs: 100,
            batch_size: 128,
            negative_ratio: 5.0,
            seed: 42,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.hidden_size == 0
            || self.learning_rate <= 0.0
            || self.epochs == 0
            || self.batch_size == 0
            || self.negative_ratio <= 0.0
        {
            return Err(Error::Config(
                "every training hyperparameter must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One training example: a clique of the source graph, its feature vector,
/// and whether it is a hyperedge of the source hypergraph.
#[derive(Clone, Debug)]
pub struct LabeledExample {
    pub clique: Clique,
    pub features: CliqueFeatures,
    pub label: bool,
}

/// Raw network parameters operating on normalized feature vectors.
/// `w1[j]` holds the input weights of hidden unit `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl MlpParams {
    /// Glorot-uniform initialization, deterministic for a given generator.
    pub fn init(input: usize, hidden: usize, rng: &mut impl Rng) -> Self {
        let s1 = (6.0 / (input + hidden) as f64).sqrt();
        let s2 = (6.0 / (hidden + 1) as f64).sqrt();
        MlpParams {
            w1: (0..hidden)
                .map(|_| (0..input).map(|_| rng.gen_range(-s1..s1)).collect())
                .collect(),
            b1: vec![0.0; hidden],
            w2: (0..hidden).map(|_| rng.gen_range(-s2..s2)).collect(),
            b2: 0.0,
        }
    }

    pub fn zeros(input: usize, hidden: usize) -> Self {
        MlpParams {
            w1: vec![vec![0.0; input]; hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    pub fn hidden_size(&self) -> usize {
        self.w2.len()
    }

    /// Pre-sigmoid output for one normalized input.
    pub fn logit(&self, x: &[f64]) -> f64 {
        let mut out = self.b2;
        for (j, row) in self.w1.iter().enumerate() {
            let mut a = self.b1[j];
            for (w, &xi) in row.iter().zip(x) {
                a += w * xi;
            }
            if a > 0.0 {
                out += self.w2[j] * a;
            }
        }
        out
    }

    /// Mean binary cross-entropy over a batch of normalized inputs.
    pub fn batch_loss(&self, xs: &[&[f64]], ys: &[f64]) -> f64 {
        let total: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, &y)| {
                let l = self.logit(x);
                // log(1 + e^l) - y*l, computed stably
                l.max(0.0) - y * l + (-l.abs()).exp().ln_1p()
            })
            .sum();
        total / xs.len() as f64
    }

    /// Mean loss and its gradient with respect to every parameter.
    pub fn batch_gradients(&self, xs: &[&[f64]], ys: &[f64]) -> (f64, MlpParams) {
        let hidden = self.hidden_size();
        let input = self.w1.first().map(Vec::len).unwrap_or(0);
        let mut grad = MlpParams::zeros(input, hidden);
        let mut total_loss = 0.0;
        let scale = 1.0 / xs.len() as f64;
        let mut activations = vec![0.0; hidden];
        for (x, &y) in xs.iter().zip(ys) {
            let mut logit = self.b2;
            for (((row, &b), &w2), slot) in self
                .w1
                .iter()
                .zip(&self.b1)
                .zip(&self.w2)
                .zip(activations.iter_mut())
            {
                let mut a = b;
                for (w, &xi) in row.iter().zip(*x) {
                    a += w * xi;
                }
                let a = a.max(0.0);
                *slot = a;
                logit += w2 * a;
            }
            total_loss += logit.max(0.0) - y * logit + (-logit.abs()).exp().ln_1p();
            let dlogit = (sigmoid(logit) - y) * scale;
            grad.b2 += dlogit;
            for (j, &a) in activations.iter().enumerate() {
                grad.w2[j] += dlogit * a;
                if a > 0.0 {
                    let dh = dlogit * self.w2[j];
                    grad.b1[j] += dh;
                    for (g, &xi) in grad.w1[j].iter_mut().zip(*x) {
                        *g += dh * xi;
                    }
                }
            }
        }
        (total_loss * scale, grad)
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

// Scores stay strictly inside (0, 1) even when the logit saturates.
const SCORE_EPS: f64 = 1e-12;

/// A trained scorer with frozen normalization statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScorerModel {
    pub layout_version: u32,
    pub feature_mean: Vec<f64>,
    pub feature_std: Vec<f64>,
    pub params: MlpParams,
    pub train_config: TrainConfig,
    /// Mean training loss per epoch.
    pub epoch_losses: Vec<f64>,
}

impl ScorerModel {
    /// A zero-parameter model scoring 0.5 everywhere; handy as a neutral
    /// scorer in tests and diagnostics.
    pub fn neutral() -> Self {
        ScorerModel {
            layout_version: FEATURE_LAYOUT_VERSION,
            feature_mean: vec![0.0; FEATURE_LEN],
            feature_std: vec![1.0; FEATURE_LEN],
            params: MlpParams::zeros(FEATURE_LEN, 1),
            train_config: TrainConfig::default(),
            epoch_losses: Vec::new(),
        }
    }

    fn check_layout(&self) -> Result<()> {
        if self.layout_version != FEATURE_LAYOUT_VERSION {
            return Err(Error::Model(format!(
                "model was built for feature layout v{}, this build produces v{}; retrain the model",
                self.layout_version, FEATURE_LAYOUT_VERSION
            )));
        }
        Ok(())
    }

    fn normalize(&self, features: &CliqueFeatures) -> Vec<f64> {
        features
            .values
            .iter()
            .zip(self.feature_mean.iter().zip(&self.feature_std))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect()
    }

    /// Probability in (0, 1) that the clique is a hyperedge.
    pub fn score(&self, features: &CliqueFeatures) -> Result<f64> {
        self.check_layout()?;
        let x = self.normalize(features);
        Ok(sigmoid(self.params.logit(&x)).clamp(SCORE_EPS, 1.0 - SCORE_EPS))
    }

    /// Scores many cliques; order is preserved.
    pub fn score_batch(&self, features: &[CliqueFeatures]) -> Result<Vec<f64>> {
        self.check_layout()?;
        Ok(parallel::pool().install(|| {
            features
                .par_iter()
                .map(|f| {
                    sigmoid(self.params.logit(&self.normalize(f))).clamp(SCORE_EPS, 1.0 - SCORE_EPS)
                })
                .collect()
        }))
    }
}

/// Builds the labeled training set for a source pair.
///
/// Positives are every unique hyperedge of `h_s`. Negatives are cliques of
/// `g_s` that are not hyperedges, drawn first from maximal cliques and then
/// from random sub-cliques of maximal cliques until `negative_ratio` times
/// the positive count is reached (or the sampling budget runs out).
/// `g_s` must equal the clique expansion of `h_s`.
///
/// The negative-sampling scheme is the one deliberately replaceable piece
/// of the trainer: any source of non-hyperedge cliques labeled false will
/// do, as long as it stays deterministic for a given seed.
pub fn build_training_set(
    g_s: &ProjectedGraph,
    h_s: &Hypergraph,
    cfg: &TrainConfig,
) -> Result<Vec<LabeledExample>> {
    cfg.validate()?;
    if &h_s.clique_expansion() != g_s {
        return Err(Error::Validation(
            "source graph is not the clique expansion of the source hypergraph".into(),
        ));
    }
    let positives: Vec<Clique> = h_s
        .edges()
        .map(|(nodes, _)| Clique::new(nodes.to_vec()).expect("hyperedges have >= 2 nodes"))
        .collect();
    let quota = (cfg.negative_ratio * positives.len() as f64).ceil() as usize;
    let mut rng = ChaCha12Rng::seed_from_u64(sub_seed(cfg.seed, "negatives"));

    let mc = maximal_cliques(g_s);
    let pool: Vec<&Clique> = mc.iter().filter(|q| !h_s.contains(q.nodes())).collect();
    let mut negatives: Vec<Clique> = if pool.len() > quota {
        sample(&mut rng, pool.len(), quota)
            .into_iter()
            .map(|i| pool[i].clone())
            .collect()
    } else {
        pool.into_iter().cloned().collect()
    };
    let mut seen: BTreeSet<Clique> = negatives.iter().cloned().collect();
    let mut attempts = 0usize;
    let budget = 50 * quota.max(1);
    while negatives.len() < quota && attempts < budget && !mc.is_empty() {
        attempts += 1;
        let q = &mc[rng.gen_range(0..mc.len())];
        if q.len() < 3 {
            continue;
        }
        for sub in sample_subcliques(q, &mut rng) {
            if negatives.len() >= quota {
                break;
            }
            if !h_s.contains(sub.nodes()) && seen.insert(sub.clone()) {
                negatives.push(sub);
            }
        }
    }

    let mut examples = Vec::with_capacity(positives.len() + negatives.len());
    for (cliques, label) in [(positives, true), (negatives, false)] {
        for q in cliques {
            examples.push(LabeledExample {
                features: extract_features(g_s, g_s, &q)?,
                clique: q,
                label,
            });
        }
    }
    Ok(examples)
}

/// Trains the scorer. Errors when the dataset has a single class.
pub fn train(examples: &[LabeledExample], cfg: &TrainConfig) -> Result<ScorerModel> {
    cfg.validate()?;
    let n_pos = examples.iter().filter(|e| e.label).count();
    if n_pos == 0 || n_pos == examples.len() {
        return Err(Error::Validation(
            "training set must contain both positive and negative examples".into(),
        ));
    }

    // frozen normalization statistics; zero-variance entries keep std 1
    let n = examples.len() as f64;
    let mut mean = vec![0.0; FEATURE_LEN];
    for e in examples {
        for (m, &v) in mean.iter_mut().zip(&e.features.values) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut std = vec![0.0; FEATURE_LEN];
    for e in examples {
        for (s, (&v, &m)) in std.iter_mut().zip(e.features.values.iter().zip(&mean)) {
            *s += (v - m) * (v - m);
        }
    }
    for s in &mut std {
        *s = (*s / n).sqrt();
        if *s < 1e-12 {
            *s = 1.0;
        }
    }

    let xs: Vec<Vec<f64>> = examples
        .iter()
        .map(|e| {
            e.features
                .values
                .iter()
                .zip(mean.iter().zip(&std))
                .map(|(&v, (&m, &s))| (v - m) / s)
                .collect()
        })
        .collect();
    let ys: Vec<f64> = examples
        .iter()
        .map(|e| f64::from(u8::from(e.label)))
        .collect();

    let mut init_rng = ChaCha12Rng::seed_from_u64(sub_seed(cfg.seed, "init"));
    let mut params = MlpParams::init(FEATURE_LEN, cfg.hidden_size, &mut init_rng);
    let mut opt = Adam::new(cfg.learning_rate, &params);
    let mut shuffle_rng = ChaCha12Rng::seed_from_u64(sub_seed(cfg.seed, "shuffle"));
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        use rand::seq::SliceRandom;
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(cfg.batch_size) {
            let bx: Vec<&[f64]> = chunk.iter().map(|&i| xs[i].as_slice()).collect();
            let by: Vec<f64> = chunk.iter().map(|&i| ys[i]).collect();
            let (loss, grads) = params.batch_gradients(&bx, &by);
            opt.step(&mut params, &grads);
            epoch_loss += loss;
            batches += 1;
        }
        epoch_losses.push(epoch_loss / batches as f64);
    }

    Ok(ScorerModel {
        layout_version: FEATURE_LAYOUT_VERSION,
        feature_mean: mean,
        feature_std: std,
        params,
        train_config: cfg.clone(),
        epoch_losses,
    })
}

/// Fraction of examples the model classifies correctly at threshold 0.5.
pub fn training_accuracy(model: &ScorerModel, examples: &[LabeledExample]) -> Result<f64> {
    if examples.is_empty() {
        return Ok(1.0);
    }
    let mut correct = 0usize;
    for e in examples {
        if (model.score(&e.features)? > 0.5) == e.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / examples.len() as f64)
}

struct Adam {
    lr: f64,
    t: u64,
    m: MlpParams,
    v: MlpParams,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(lr: f64, shape: &MlpParams) -> Self {
        let zero = MlpParams::zeros(
            shape.w1.first().map(Vec::len).unwrap_or(0),
            shape.hidden_size(),
        );
        Adam {
            lr,
            t: 0,
            m: zero.clone(),
            v: zero,
        }
    }

    fn step(&mut self, params: &mut MlpParams, grads: &MlpParams) {
        self.t += 1;
        let bc1 = 1.0 - Self::BETA1.powi(self.t as i32);
        let bc2 = 1.0 - Self::BETA2.powi(self.t as i32);
        let lr = self.lr;
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *p -= lr * (*m / bc1) / ((*v / bc2).sqrt() + Self::EPS);
        };
        for j in 0..params.w1.len() {
            for i in 0..params.w1[j].len() {
                update(
                    &mut params.w1[j][i],
                    grads.w1[j][i],
                    &mut self.m.w1[j][i],
                    &mut self.v.w1[j][i],
                );
            }
            update(
                &mut params.b1[j],
                grads.b1[j],
                &mut self.m.b1[j],
                &mut self.v.b1[j],
            );
            update(
                &mut params.w2[j],
                grads.w2[j],
                &mut self.m.w2[j],
                &mut self.v.w2[j],
            );
        }
        update(&mut params.b2, grads.b2, &mut self.m.b2, &mut self.v.b2);
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    #[serde(flatten)]
    model: ScorerModel,
}

const MODEL_FORMAT: &str = "hyperrec-scorer";

/// Writes the model as self-describing JSON.
pub fn save_model(path: impl AsRef<Path>, model: &ScorerModel) -> Result<()> {
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        model: model.clone(),
    };
    let json = serde_json::to_string_pretty(&file).map_err(|e| Error::Model(e.to_string()))?;
    std::fs::write(path.as_ref(), json).map_err(|source| Error::Io {
        path: path.as_ref().display().to_string(),
        source,
    })
}

/// Reads a model written by [`save_model`], refusing unknown formats,
/// mismatched feature layouts, and malformed parameter shapes.
pub fn load_model(path: impl AsRef<Path>) -> Result<ScorerModel> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|source| Error::Io {
        path: path.as_ref().display().to_string(),
        source,
    })?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::Model(format!("{}: {e}", path.as_ref().display())))?;
    if file.format != MODEL_FORMAT {
        return Err(Error::Model(format!(
            "unrecognized model format {:?}, expected {MODEL_FORMAT:?}",
            file.format
        )));
    }
    let model = file.model;
    model.check_layout()?;
    let h = model.params.hidden_size();
    if model.params.w1.len() != h
        || model.params.b1.len() != h
        || model.params.w1.iter().any(|row| row.len() != FEATURE_LEN)
        || model.feature_mean.len() != FEATURE_LEN
        || model.feature_std.len() != FEATURE_LEN
    {
        return Err(Error::Model(
            "model parameter shapes are inconsistent".into(),
        ));
    }
    if model.feature_std.iter().any(|&s| s <= 0.0) {
        return Err(Error::Model(
            "normalization std entries must be positive".into(),
        ));
    }
    Ok(model)
}
