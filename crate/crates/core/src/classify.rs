//! Baseline facies classifier and evaluation harness.
//!
//! The classifier is a distance-weighted kNN over standardized features: it
//! is deterministic, dependency-free, and strong enough to show whether a
//! variable subset preserves classification performance. Evaluation uses
//! leave-one-well-out cross-validation, since depth-adjacent samples are
//! autocorrelated and random splits would leak between train and test.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::dataio::FaciesDataset;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Neighbor vote weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Uniform,
    InverseDistance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnnConfig {
    pub k_neighbors: usize,
    pub weighting: Weighting,
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self {
            k_neighbors: 5,
            weighting: Weighting::InverseDistance,
        }
    }
}

/// A fitted kNN model. Features are standardized with the training mean and
/// standard deviation; a zero-variance feature standardizes to 0 everywhere
/// and therefore contributes nothing to distances.
#[derive(Debug, Clone)]
pub struct KnnClassifier {
    config: KnnConfig,
    feature_names: Vec<String>,
    means: Vec<f64>,
    stds: Vec<f64>,
    train: Vec<f64>, // standardized, row-major
    labels: Vec<i64>,
    d: usize,
}

fn standardize(v: f64, mean: f64, std: f64) -> f64 {
    if std > 0.0 {
        (v - mean) / std
    } else {
        0.0
    }
}

/// Fit a [`KnnClassifier`] on the dataset's features and labels.
pub fn fit(train: &FaciesDataset, config: &KnnConfig) -> Result<KnnClassifier> {
    if config.k_neighbors == 0 {
        return Err(Error::BadNeighborOrder {
            k: 0,
            n: train.n_rows(),
        });
    }
    let distinct: BTreeSet<i64> = train.labels().iter().copied().collect();
    if distinct.len() < 2 {
        return Err(Error::SingleClass);
    }
    let features = train.features();
    let (n, d) = (features.n_rows(), features.n_cols());
    let mut means = vec![0.0; d];
    let mut stds = vec![0.0; d];
    for j in 0..d {
        let col = features.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        means[j] = mean;
        stds[j] = var.sqrt();
    }
    let mut z = vec![0.0; n * d];
    for j in 0..d {
        let col = features.column(j);
        for i in 0..n {
            z[i * d + j] = standardize(col[i], means[j], stds[j]);
        }
    }
    Ok(KnnClassifier {
        config: *config,
        feature_names: features.names().to_vec(),
        means,
        stds,
        train: z,
        labels: train.labels().to_vec(),
        d,
    })
}

impl KnnClassifier {
    /// Predict a label for every row. Feature columns must match the fit
    /// columns in name and order. Class-vote ties go to the smallest code;
    /// if `k_neighbors` exceeds the training size, all training rows vote.
    pub fn predict(&self, features: &DataMatrix) -> Result<Vec<i64>> {
        if features.names() != self.feature_names {
            return Err(Error::FeatureMismatch {
                expected: self.feature_names.clone(),
                got: features.names().to_vec(),
            });
        }
        let n_train = self.labels.len();
        let k = self.config.k_neighbors.min(n_train);
        let (nq, d) = (features.n_rows(), self.d);
        let mut zq = vec![0.0; nq * d];
        for j in 0..d {
            let col = features.column(j);
            for i in 0..nq {
                zq[i * d + j] = standardize(col[i], self.means[j], self.stds[j]);
            }
        }
        let preds: Vec<i64> = (0..nq)
            .into_par_iter()
            .map(|i| {
                let q = &zq[i * d..(i + 1) * d];
                let mut candidates: Vec<(f64, usize)> = (0..n_train)
                    .map(|r| {
                        let row = &self.train[r * d..(r + 1) * d];
                        let d2: f64 = q
                            .iter()
                            .zip(row)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        (d2, r)
                    })
                    .collect();
                candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let mut votes: BTreeMap<i64, f64> = BTreeMap::new();
                for &(d2, r) in &candidates[..k] {
                    let w = match self.config.weighting {
                        Weighting::Uniform => 1.0,
                        Weighting::InverseDistance => {
                            let dist = d2.sqrt();
                            if dist == 0.0 {
                                f64::INFINITY
                            } else {
                                1.0 / dist
                            }
                        }
                    };
                    *votes.entry(self.labels[r]).or_insert(0.0) += w;
                }
                let mut best = (i64::MIN, f64::NEG_INFINITY);
                for (&code, &w) in &votes {
                    if w > best.1 {
                        best = (code, w);
                    }
                }
                best.0
            })
            .collect();
        Ok(preds)
    }
}

/// Classification metrics over one set of predictions.
///
/// `confusion[t][p]` counts rows with truth `classes[t]` predicted as
/// `classes[p]`; row sums equal per-class support and the trace over the
/// total equals `accuracy`. `adjacent_accuracy` is present only when an
/// adjacency map was supplied and counts a prediction correct if it matches
/// the truth or an adjacent class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalMetrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class_f1: BTreeMap<i64, f64>,
    pub classes: Vec<i64>,
    pub confusion: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjacent_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldReport {
    pub well: String,
    #[serde(flatten)]
    pub metrics: EvalMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(flatten)]
    pub metrics: EvalMetrics,
    pub fold_breakdown: Vec<FoldReport>,
}

fn compute_metrics(
    pred: &[i64],
    truth: &[i64],
    adjacency: Option<&BTreeMap<i64, BTreeSet<i64>>>,
) -> Result<EvalMetrics> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            what: "predictions",
            len: pred.len(),
            expected: truth.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let classes: Vec<i64> = truth
        .iter()
        .chain(pred)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<i64, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let c = classes.len();
    let mut confusion = vec![vec![0u64; c]; c];
    for (&p, &t) in pred.iter().zip(truth) {
        confusion[index[&t]][index[&p]] += 1;
    }
    let total = pred.len() as f64;
    let trace: u64 = (0..c).map(|i| confusion[i][i]).sum();
    let accuracy = trace as f64 / total;

    let mut per_class_f1 = BTreeMap::new();
    for (i, &class) in classes.iter().enumerate() {
        let tp = confusion[i][i] as f64;
        let fp: f64 = (0..c).filter(|&r| r != i).map(|r| confusion[r][i] as f64).sum();
        let fnn: f64 = (0..c).filter(|&p| p != i).map(|p| confusion[i][p] as f64).sum();
        let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let recall = if tp + fnn > 0.0 { tp / (tp + fnn) } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class_f1.insert(class, f1);
    }
    let macro_f1 = per_class_f1.values().sum::<f64>() / c as f64;

    let adjacent_accuracy = adjacency.map(|adj| {
        let hits = pred
            .iter()
            .zip(truth)
            .filter(|&(&p, &t)| p == t || adj.get(&t).is_some_and(|s| s.contains(&p)))
            .count();
        hits as f64 / total
    });

    Ok(EvalMetrics {
        accuracy,
        macro_f1,
        per_class_f1,
        classes,
        confusion,
        adjacent_accuracy,
    })
}

/// Score predictions against ground truth.
pub fn evaluate(
    pred: &[i64],
    truth: &[i64],
    adjacency: Option<&BTreeMap<i64, BTreeSet<i64>>>,
) -> Result<EvalReport> {
    Ok(EvalReport {
        metrics: compute_metrics(pred, truth, adjacency)?,
        fold_breakdown: Vec::new(),
    })
}

/// Leave-one-well-out cross-validation.
///
/// Each well in turn forms the test fold while all other wells train; the
/// top-level metrics are micro-averaged over the pooled predictions and the
/// per-fold reports are kept in `fold_breakdown`, ordered by well id. When
/// `selected` is given, features are restricted to it before fitting. Folds
/// run in parallel; results do not depend on the thread count. Every well
/// needs at least 2 rows (single observations carry no rank information).
pub fn grouped_cv(
    data: &FaciesDataset,
    config: &KnnConfig,
    selected: Option<&[String]>,
) -> Result<EvalReport> {
    let restricted;
    let data = match selected {
        Some(names) => {
            restricted = data.restrict(names)?;
            &restricted
        }
        None => data,
    };
    let well_order: Vec<String> = data
        .wells()
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if well_order.len() < 2 {
        return Err(Error::SingleWell(well_order.len()));
    }
    let n = data.n_rows();
    type Fold = (String, Vec<i64>, Vec<i64>); // well, predictions, truth
    let fold_results: Vec<Result<Fold>> = well_order
        .par_iter()
        .map(|well| {
            let test_idx: Vec<usize> = (0..n).filter(|&i| &data.wells()[i] == well).collect();
            let train_idx: Vec<usize> = (0..n).filter(|&i| &data.wells()[i] != well).collect();
            debug_assert!(train_idx.iter().all(|&i| data.wells()[i] != *well));
            let train = data.subset_rows(&train_idx)?;
            let model = fit(&train, config)?;
            let test_features = data.features().subset_rows(&test_idx)?;
            let pred = model.predict(&test_features)?;
            let truth: Vec<i64> = test_idx.iter().map(|&i| data.labels()[i]).collect();
            Ok((well.clone(), pred, truth))
        })
        .collect();

    let mut folds = Vec::with_capacity(well_order.len());
    let mut pooled_pred = Vec::with_capacity(n);
    let mut pooled_truth = Vec::with_capacity(n);
    for result in fold_results {
        let (well, pred, truth) = result?;
        let metrics = compute_metrics(&pred, &truth, data.adjacency())?;
        folds.push(FoldReport { well, metrics });
        pooled_pred.extend(pred);
        pooled_truth.extend(truth);
    }
    Ok(EvalReport {
        metrics: compute_metrics(&pooled_pred, &pooled_truth, data.adjacency())?,
        fold_breakdown: folds,
    })
}
