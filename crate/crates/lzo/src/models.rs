//! Trainable learners, the prediction contract, and loss/risk
//! evaluation.
//!
//! The linear SVM is a primal stochastic subgradient solver (Pegasos
//! schedule) so the toolkit is self-contained: regularization is
//! `lambda = 1/(C*n)`, the step size is `1/(lambda*t)`, training runs
//! `epochs * n` single-sample steps over per-epoch shuffles, and the
//! final iterate is returned. Multiclass is one-vs-rest. All tie-breaks
//! go to the lowest class id or index.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::divergence::JointDiscrete;
use crate::error::{Error, Result};
use crate::seeding::stream_rng;

/// One candidate learning configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    /// One-vs-rest hinge-loss linear classifier trained by Pegasos.
    LinearSvm { c: f64, epochs: usize },
    /// Predicts the most frequent training class everywhere.
    Majority,
    /// 1-nearest-neighbor under the Euclidean metric.
    NearestNeighbor,
}

impl LearnerSpec {
    /// Linear SVM with the default epoch budget.
    pub fn svm(c: f64) -> Self {
        LearnerSpec::LinearSvm { c, epochs: DEFAULT_SVM_EPOCHS }
    }

    pub fn validate(&self) -> Result<()> {
        if let LearnerSpec::LinearSvm { c, epochs } = self {
            if !(*c > 0.0) {
                return Err(Error::InvalidParameter(format!("SVM C must be > 0, got {c}")));
            }
            if *epochs < 1 {
                return Err(Error::InvalidParameter("SVM epochs must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// Short human-readable form used in reports.
    pub fn describe(&self) -> String {
        match self {
            LearnerSpec::LinearSvm { c, .. } => format!("svm(C={c})"),
            LearnerSpec::Majority => "majority".to_string(),
            LearnerSpec::NearestNeighbor => "nearest_neighbor".to_string(),
        }
    }
}

/// Default epoch budget for the Pegasos solver. The final (unaveraged)
/// iterate needs this many passes before its accuracy stabilizes on
/// small datasets.
pub const DEFAULT_SVM_EPOCHS: usize = 50;

/// Loss function used for validation risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossSpec {
    ZeroOne,
}

impl LossSpec {
    /// The loss interval `max - min` (the `B` of the bias bounds).
    pub fn interval(&self) -> f64 {
        match self {
            LossSpec::ZeroOne => 1.0,
        }
    }

    pub fn loss(&self, predicted: usize, truth: usize) -> f64 {
        match self {
            LossSpec::ZeroOne => {
                if predicted == truth {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

/// Learned parameters, by learner kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    LinearSvm {
        /// One weight vector of length `d` per class.
        weights: Vec<Vec<f64>>,
        /// One bias per class.
        biases: Vec<f64>,
        /// Regularization `1/(C*n)` used during training.
        lambda: f64,
    },
    Majority {
        class: usize,
    },
    NearestNeighbor {
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
    },
}

/// A trained hypothesis with a total prediction function on
/// `d`-dimensional inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub params: ModelParams,
    pub d: usize,
    pub k: usize,
    /// Hash of the sorted distinct training-sample indices the trainer
    /// touched; lets callers audit what the model was fit on.
    pub train_fingerprint: u64,
    /// Number of distinct training indices touched.
    pub train_coverage: usize,
    /// Size of the training input.
    pub train_size: usize,
}

/// Hash a sorted list of distinct sample indices.
pub fn index_fingerprint(sorted_indices: &[usize]) -> u64 {
    let mut hasher = DefaultHasher::new();
    sorted_indices.hash(&mut hasher);
    hasher.finish()
}

/// Train `spec` on `data`. Requires fully labeled data; the linear SVM
/// additionally requires every class to be present.
pub fn train(spec: &LearnerSpec, data: &Dataset, seed: u64) -> Result<TrainedModel> {
    spec.validate()?;
    if data.samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(i) = data.samples.iter().position(|s| s.label.is_none()) {
        return Err(Error::UnlabeledSample(i));
    }

    let n = data.n();
    let all_indices: Vec<usize> = (0..n).collect();
    let fingerprint = index_fingerprint(&all_indices);

    let params = match spec {
        LearnerSpec::Majority => {
            let counts = data.class_counts();
            let class = counts
                .iter()
                .enumerate()
                .max_by(|(ia, ca), (ib, cb)| ca.cmp(cb).then(ib.cmp(ia)))
                .map(|(i, _)| i)
                .unwrap_or(0);
            ModelParams::Majority { class }
        }
        LearnerSpec::NearestNeighbor => ModelParams::NearestNeighbor {
            features: data.samples.iter().map(|s| s.features.clone()).collect(),
            labels: data.samples.iter().map(|s| s.label.unwrap()).collect(),
        },
        LearnerSpec::LinearSvm { c, epochs } => {
            let counts = data.class_counts();
            if let Some(missing) = counts.iter().position(|&count| count == 0) {
                return Err(Error::MissingClass(missing));
            }
            train_pegasos(data, *c, *epochs, seed)?
        }
    };

    Ok(TrainedModel {
        params,
        d: data.d,
        k: data.k,
        train_fingerprint: fingerprint,
        train_coverage: n,
        train_size: n,
    })
}

/// One-vs-rest Pegasos. Each class runs `epochs` passes over per-epoch
/// shuffles of the data (so every sample is visited), with step
/// `1/(lambda*t)` and projection onto the `1/sqrt(lambda)` ball.
fn train_pegasos(data: &Dataset, c: f64, epochs: usize, seed: u64) -> Result<ModelParams> {
    let n = data.n();
    let d = data.d;
    let lambda = 1.0 / (c * n as f64);
    let radius = 1.0 / lambda.sqrt();

    let mut weights = Vec::with_capacity(data.k);
    let mut biases = Vec::with_capacity(data.k);

    for class in 0..data.k {
        // Bias lives in the last slot of an augmented weight vector and
        // sees a constant 1 input, so the projection bound covers it.
        let mut w = vec![0.0f64; d + 1];
        let mut rng = stream_rng(seed, class as u64);
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 0u64;

        for _ in 0..epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let sample = &data.samples[i];
                let y = if sample.label == Some(class) { 1.0 } else { -1.0 };
                let eta = 1.0 / (lambda * t as f64);

                let mut score = w[d];
                for (wj, xj) in w[..d].iter().zip(&sample.features) {
                    score += wj * xj;
                }

                let shrink = 1.0 - eta * lambda;
                for wj in w.iter_mut() {
                    *wj *= shrink;
                }
                if y * score < 1.0 {
                    let step = eta * y;
                    for (wj, xj) in w[..d].iter_mut().zip(&sample.features) {
                        *wj += step * xj;
                    }
                    w[d] += step;
                }

                let norm = w.iter().map(|wj| wj * wj).sum::<f64>().sqrt();
                if norm > radius {
                    let scale = radius / norm;
                    for wj in w.iter_mut() {
                        *wj *= scale;
                    }
                }
            }
        }
        biases.push(w[d]);
        w.truncate(d);
        weights.push(w);
    }
    Ok(ModelParams::LinearSvm { weights, biases, lambda })
}

impl TrainedModel {
    /// Predict the class of `x`. Ties resolve to the lowest class id
    /// (or lowest training index for nearest neighbor).
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, actual: x.len() });
        }
        match &self.params {
            ModelParams::Majority { class } => Ok(*class),
            ModelParams::LinearSvm { weights, biases, .. } => {
                let mut best = 0usize;
                let mut best_score = f64::NEG_INFINITY;
                for (class, (w, b)) in weights.iter().zip(biases).enumerate() {
                    let score = w.iter().zip(x).map(|(wj, xj)| wj * xj).sum::<f64>() + b;
                    if score > best_score {
                        best_score = score;
                        best = class;
                    }
                }
                Ok(best)
            }
            ModelParams::NearestNeighbor { features, labels } => {
                let mut best = 0usize;
                let mut best_dist = f64::INFINITY;
                for (i, point) in features.iter().enumerate() {
                    let dist: f64 = point.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                    if dist < best_dist {
                        best_dist = dist;
                        best = i;
                    }
                }
                Ok(labels[best])
            }
        }
    }

    /// Per-class decision values for the linear SVM, `None` otherwise.
    pub fn decision_values(&self, x: &[f64]) -> Option<Vec<f64>> {
        match &self.params {
            ModelParams::LinearSvm { weights, biases, .. } => Some(
                weights
                    .iter()
                    .zip(biases)
                    .map(|(w, b)| w.iter().zip(x).map(|(wj, xj)| wj * xj).sum::<f64>() + b)
                    .collect(),
            ),
            _ => None,
        }
    }
}

/// Mean loss of `model` over a fully labeled dataset.
pub fn empirical_risk(model: &TrainedModel, data: &Dataset, loss: LossSpec) -> Result<f64> {
    if data.samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut total = 0.0;
    for (i, s) in data.samples.iter().enumerate() {
        let truth = s.label.ok_or(Error::UnlabeledSample(i))?;
        total += loss.loss(model.predict(&s.features)?, truth);
    }
    Ok(total / data.n() as f64)
}

/// Exact expected risk under a finite joint: sums
/// `joint(x, y) * loss(predict(x), y)` over the whole support.
pub fn exact_expected_risk(
    model: &TrainedModel,
    joint: &JointDiscrete,
    support_points: &[Vec<f64>],
    loss: LossSpec,
) -> Result<f64> {
    if support_points.len() != joint.support_size() {
        return Err(Error::SupportMismatch(support_points.len(), joint.support_size()));
    }
    let predictions: Vec<usize> = support_points
        .iter()
        .map(|x| model.predict(x))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for (y, row) in joint.table().iter().enumerate() {
        for (s, &p) in row.iter().enumerate() {
            total += p * loss.loss(predictions[s], y);
        }
    }
    Ok(total)
}

/// Regularized hinge objective of a linear SVM at its own `lambda`,
/// summed over the one-vs-rest subproblems. Diagnostic only.
pub fn svm_hinge_objective(model: &TrainedModel, data: &Dataset) -> Option<f64> {
    let ModelParams::LinearSvm { weights, biases, lambda } = &model.params else {
        return None;
    };
    let n = data.n() as f64;
    let mut objective = 0.0;
    for (class, (w, b)) in weights.iter().zip(biases).enumerate() {
        let norm_sq: f64 = w.iter().map(|wj| wj * wj).sum::<f64>() + b * b;
        let mut hinge = 0.0;
        for s in &data.samples {
            let y = if s.label == Some(class) { 1.0 } else { -1.0 };
            let score = w.iter().zip(&s.features).map(|(wj, xj)| wj * xj).sum::<f64>() + b;
            hinge += (1.0 - y * score).max(0.0);
        }
        objective += lambda / 2.0 * norm_sq + hinge / n;
    }
    Some(objective)
}

// ─── Versioned JSON serialization ────────────────────────────────────

/// Flat, versioned on-disk form of a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub version: u32,
    pub kind: String,
    pub d: usize,
    pub k: usize,
    /// Kind-specific flattened parameters:
    /// - `linear_svm`: k rows of d weights, then k biases, then lambda;
    /// - `majority`: the class id;
    /// - `nearest_neighbor`: n, then n rows of d features, then n labels.
    pub parameters: Vec<f64>,
}

pub const MODEL_DOCUMENT_VERSION: u32 = 1;

impl TrainedModel {
    pub fn to_document(&self) -> ModelDocument {
        let (kind, parameters) = match &self.params {
            ModelParams::LinearSvm { weights, biases, lambda } => {
                let mut flat: Vec<f64> = weights.iter().flatten().copied().collect();
                flat.extend_from_slice(biases);
                flat.push(*lambda);
                ("linear_svm", flat)
            }
            ModelParams::Majority { class } => ("majority", vec![*class as f64]),
            ModelParams::NearestNeighbor { features, labels } => {
                let mut flat = vec![features.len() as f64];
                flat.extend(features.iter().flatten().copied());
                flat.extend(labels.iter().map(|&l| l as f64));
                ("nearest_neighbor", flat)
            }
        };
        ModelDocument {
            version: MODEL_DOCUMENT_VERSION,
            kind: kind.to_string(),
            d: self.d,
            k: self.k,
            parameters,
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<TrainedModel> {
        if doc.version != MODEL_DOCUMENT_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported model document version {}",
                doc.version
            )));
        }
        let params = match doc.kind.as_str() {
            "linear_svm" => {
                let expected = doc.k * doc.d + doc.k + 1;
                if doc.parameters.len() != expected {
                    return Err(Error::ShapeMismatch(format!(
                        "linear_svm document needs {expected} parameters, got {}",
                        doc.parameters.len()
                    )));
                }
                let weights = doc.parameters[..doc.k * doc.d]
                    .chunks(doc.d)
                    .map(|chunk| chunk.to_vec())
                    .collect();
                let biases = doc.parameters[doc.k * doc.d..doc.k * doc.d + doc.k].to_vec();
                let lambda = doc.parameters[doc.k * doc.d + doc.k];
                ModelParams::LinearSvm { weights, biases, lambda }
            }
            "majority" => {
                let class = *doc.parameters.first().ok_or_else(|| {
                    Error::ShapeMismatch("majority document needs one parameter".into())
                })? as usize;
                ModelParams::Majority { class }
            }
            "nearest_neighbor" => {
                let n = *doc.parameters.first().ok_or_else(|| {
                    Error::ShapeMismatch("nearest_neighbor document is empty".into())
                })? as usize;
                let expected = 1 + n * doc.d + n;
                if doc.parameters.len() != expected {
                    return Err(Error::ShapeMismatch(format!(
                        "nearest_neighbor document needs {expected} parameters, got {}",
                        doc.parameters.len()
                    )));
                }
                let features = doc.parameters[1..1 + n * doc.d]
                    .chunks(doc.d)
                    .map(|chunk| chunk.to_vec())
                    .collect();
                let labels = doc.parameters[1 + n * doc.d..].iter().map(|&l| l as usize).collect();
                ModelParams::NearestNeighbor { features, labels }
            }
            other => return Err(Error::InvalidParameter(format!("unknown model kind `{other}`"))),
        };
        Ok(TrainedModel {
            params,
            d: doc.d,
            k: doc.k,
            train_fingerprint: 0,
            train_coverage: 0,
            train_size: 0,
        })
    }
}
