//! Copula-entropy estimation.
//!
//! The estimator is the standard two-step construction: rank-transform the
//! data to pseudo-observations ([`crate::copula::rank_transform`]), then apply
//! the Kozachenko-Leonenko k-nearest-neighbor differential-entropy estimator
//! under the max (L-infinity) norm,
//!
//! ```text
//! H = -psi(k) + psi(n) + d ln 2 + (d/n) * sum_i ln eps_i
//! ```
//!
//! where eps_i is the max-norm distance from point i to its k-th nearest
//! neighbor (self excluded) and d ln 2 is the log-volume of the unit
//! max-norm ball. Copula entropy is the differential entropy of the copula
//! density, which equals minus the mutual information: independent columns
//! give values near zero, dependent columns give negative values.
//!
//! All entropies are in nats.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::copula::rank_transform;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::special::digamma;

/// Distances below this floor are clamped before taking logs, so discrete
/// columns with many ties (zero-distance neighbors) keep the estimate finite.
pub const EPSILON_FLOOR: f64 = 1e-10;

/// Output of [`knn_entropy`]: the estimate plus how many points had their
/// neighbor distance clamped to [`EPSILON_FLOOR`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub floored: usize,
}

/// A copula-entropy value in nats together with its estimation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CeEstimate {
    /// Estimated copula entropy (nats). Negative under dependence.
    pub value: f64,
    /// Neighbor order used by the estimator.
    pub k: usize,
    /// Sample count.
    pub n: usize,
    /// Dimension.
    pub d: usize,
    /// Points whose k-th neighbor distance was clamped to [`EPSILON_FLOOR`].
    pub floored: usize,
}

/// Estimation parameters shared by the label-dependence helpers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeConfig {
    /// Neighbor order k of the entropy estimator.
    pub k: usize,
    /// When set, adds a deterministic uniform jitter in +/-1e-6 to the label
    /// column before ranking (seeded, off by default). The default keeps runs
    /// reproducible bit-for-bit without any randomized step.
    pub label_jitter_seed: Option<u64>,
}

impl Default for CeConfig {
    fn default() -> Self {
        Self {
            k: 3,
            label_jitter_seed: None,
        }
    }
}

impl CeConfig {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }
}

/// Kozachenko-Leonenko entropy of `points`, a row-major n x d buffer, using
/// the max norm. Exact brute-force neighbor search; deterministic for fixed
/// input regardless of thread count.
pub fn knn_entropy(points: &[f64], d: usize, k: usize) -> Result<EntropyEstimate> {
    if d == 0 {
        return Err(Error::NoColumns);
    }
    if !points.len().is_multiple_of(d) {
        return Err(Error::RaggedPoints {
            len: points.len(),
            d,
        });
    }
    let n = points.len() / d;
    if k == 0 || k + 1 > n {
        return Err(Error::BadNeighborOrder { k, n });
    }
    let first = &points[..d];
    if (1..n).all(|i| points[i * d..(i + 1) * d] == *first) {
        return Err(Error::DegenerateData { n });
    }

    // ln eps_i per point, collected in index order so the final sum does not
    // depend on the parallel schedule.
    let ln_eps: Vec<(f64, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let pi = &points[i * d..(i + 1) * d];
            let mut dists: Vec<f64> = Vec::with_capacity(n - 1);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let pj = &points[j * d..(j + 1) * d];
                let mut dist = 0.0_f64;
                for t in 0..d {
                    let diff = (pi[t] - pj[t]).abs();
                    if diff > dist {
                        dist = diff;
                    }
                }
                dists.push(dist);
            }
            let (_, kth, _) = dists.select_nth_unstable_by(k - 1, f64::total_cmp);
            let eps = *kth;
            if eps < EPSILON_FLOOR {
                (EPSILON_FLOOR.ln(), true)
            } else {
                (eps.ln(), false)
            }
        })
        .collect();

    // Sum in sorted order: the eps multiset is invariant under row
    // permutation, so this keeps the estimate bit-identical under any row
    // order (and under any parallel schedule).
    let mut lns: Vec<f64> = ln_eps.iter().map(|&(v, _)| v).collect();
    lns.sort_unstable_by(f64::total_cmp);
    let sum_ln: f64 = lns.iter().sum();
    let floored = ln_eps.iter().filter(|&&(_, f)| f).count();
    let (nf, df) = (n as f64, d as f64);
    let value =
        -digamma(k as f64) + digamma(nf) + df * std::f64::consts::LN_2 + df / nf * sum_ln;
    Ok(EntropyEstimate { value, floored })
}

/// Copula entropy of a multivariate sample: rank transform, then
/// [`knn_entropy`] on the pseudo-observations.
///
/// Requires d >= 2; the copula entropy of a single variable is identically
/// zero and asking for it is treated as a misuse.
pub fn copula_entropy(x: &DataMatrix, k: usize) -> Result<CeEstimate> {
    if x.n_cols() < 2 {
        return Err(Error::UnivariateInput(x.n_cols()));
    }
    let cop = rank_transform(x);
    let est = knn_entropy(cop.pseudo_observations(), cop.n_cols(), k)?;
    Ok(CeEstimate {
        value: est.value,
        k,
        n: x.n_rows(),
        d: x.n_cols(),
        floored: est.floored,
    })
}

/// Copula entropy between one feature column and an integer label.
///
/// The label is embedded as its integer code and rank-transformed with
/// average-rank ties, exactly like a continuous column. With
/// `label_jitter_seed` set, a seeded uniform jitter in +/-1e-6 breaks label
/// ties before ranking; the jitter sequence depends only on the seed, so every
/// variable sees the same jittered label column.
pub fn ce_with_label(
    features: &DataMatrix,
    labels: &[i64],
    variable_index: usize,
    config: &CeConfig,
) -> Result<CeEstimate> {
    if labels.len() != features.n_rows() {
        return Err(Error::LengthMismatch {
            what: "label column",
            len: labels.len(),
            expected: features.n_rows(),
        });
    }
    if variable_index >= features.n_cols() {
        return Err(Error::ColumnIndexOutOfRange {
            index: variable_index,
            count: features.n_cols(),
        });
    }
    let distinct = {
        let mut sorted: Vec<i64> = labels.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len()
    };
    if distinct < 2 {
        return Err(Error::ConstantLabel);
    }

    let feature = features.column(variable_index).to_vec();
    let mut label_col: Vec<f64> = labels.iter().map(|&c| c as f64).collect();
    if let Some(seed) = config.label_jitter_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in &mut label_col {
            *v += rng.random_range(-1e-6..=1e-6);
        }
    }
    let pair = DataMatrix::from_columns(
        vec!["feature".to_string(), "label".to_string()],
        vec![feature, label_col],
    )?;
    copula_entropy(&pair, config.k)
}
