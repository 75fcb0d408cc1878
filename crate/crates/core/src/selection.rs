//! Variable ranking and selection by copula entropy.
//!
//! Each feature is scored by its copula entropy against the facies label;
//! stronger dependence means a more negative value, so the ranking is sorted
//! ascending and "select" means taking names from the top. Per-variable CE
//! computations are independent and run in parallel; the result does not
//! depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::FaciesDataset;
use crate::entropy::{ce_with_label, CeConfig};
use crate::error::{Error, Result};

/// One ranked variable. Serializes as `{"name": .., "ce": .., "k": ..}`;
/// the floored-point diagnostic stays in memory only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedVariable {
    pub name: String,
    /// Copula entropy against the label, nats.
    pub ce: f64,
    /// Neighbor order used for the estimate.
    pub k: usize,
    #[serde(skip)]
    pub floored: usize,
}

/// Variables ordered ascending by CE (most negative, i.e. most dependent,
/// first); ties broken by ascending name so rankings are reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariableRanking {
    entries: Vec<RankedVariable>,
}

impl VariableRanking {
    /// Sorts the given entries into ranking order.
    pub fn from_entries(mut entries: Vec<RankedVariable>) -> Self {
        entries.sort_by(|a, b| a.ce.total_cmp(&b.ce).then_with(|| a.name.cmp(&b.name)));
        Self { entries }
    }

    pub fn entries(&self) -> &[RankedVariable] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }
}

/// How to cut the ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionRule {
    /// Keep the m most negative variables.
    TopK(usize),
    /// Keep every variable with CE at or below t nats.
    Threshold(f64),
}

/// Rank every feature column of `data` by its CE against the label.
pub fn rank_variables(data: &FaciesDataset, config: &CeConfig) -> Result<VariableRanking> {
    let features = data.features();
    let results: Vec<Result<RankedVariable>> = (0..features.n_cols())
        .into_par_iter()
        .map(|j| {
            ce_with_label(features, data.labels(), j, config)
                .map(|est| RankedVariable {
                    name: features.names()[j].clone(),
                    ce: est.value,
                    k: est.k,
                    floored: est.floored,
                })
                .map_err(|e| Error::Variable {
                    name: features.names()[j].clone(),
                    source: Box::new(e),
                })
        })
        .collect();
    let mut entries = Vec::with_capacity(results.len());
    for result in results {
        entries.push(result?);
    }
    Ok(VariableRanking::from_entries(entries))
}

/// Apply a selection rule to a ranking; the result preserves ranking order.
///
/// An empty result from a threshold nobody meets is legal and returned as an
/// empty list, not an error.
pub fn select(ranking: &VariableRanking, rule: &SelectionRule) -> Result<Vec<String>> {
    match *rule {
        SelectionRule::TopK(0) => Err(Error::ZeroTopK),
        SelectionRule::TopK(m) => {
            if m > ranking.len() {
                return Err(Error::TopKTooLarge {
                    requested: m,
                    available: ranking.len(),
                });
            }
            Ok(ranking.names().take(m).map(String::from).collect())
        }
        SelectionRule::Threshold(t) => Ok(ranking
            .entries()
            .iter()
            .filter(|e| e.ce <= t)
            .map(|e| e.name.clone())
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DataMatrix;
    use crate::synthetic;
    use std::collections::BTreeMap;

    fn ranking(entries: &[(&str, f64)]) -> VariableRanking {
        VariableRanking::from_entries(
            entries
                .iter()
                .map(|&(name, ce)| RankedVariable {
                    name: name.to_string(),
                    ce,
                    k: 3,
                    floored: 0,
                })
                .collect(),
        )
    }

    #[test]
    fn top_k_takes_the_first_names() {
        let r = ranking(&[("a", -0.9), ("b", -0.2), ("c", 0.01)]);
        assert_eq!(select(&r, &SelectionRule::TopK(2)).unwrap(), vec!["a", "b"]);
    }

    #[test]
    fn threshold_keeps_everything_at_or_below() {
        let r = ranking(&[("a", -0.9), ("b", -0.2), ("c", 0.01)]);
        assert_eq!(
            select(&r, &SelectionRule::Threshold(-0.1)).unwrap(),
            vec!["a", "b"]
        );
    }

    #[test]
    fn vacuous_threshold_is_legal_and_empty() {
        let r = ranking(&[("a", -0.9), ("b", -0.2)]);
        assert_eq!(
            select(&r, &SelectionRule::Threshold(-10.0)).unwrap(),
            Vec::<String>::new()
        );
    }

    #[test]
    fn top_k_bounds_are_enforced() {
        let r = ranking(&[("a", -0.9), ("b", -0.2)]);
        assert!(matches!(
            select(&r, &SelectionRule::TopK(3)),
            Err(Error::TopKTooLarge {
                requested: 3,
                available: 2
            })
        ));
        assert!(matches!(
            select(&r, &SelectionRule::TopK(0)),
            Err(Error::ZeroTopK)
        ));
    }

    #[test]
    fn informative_ranks_before_noise() {
        let ds = synthetic::informative_noise_dataset(1000, 1, 1, 2, 3, 21);
        let r = rank_variables(&ds, &CeConfig::default()).unwrap();
        assert_eq!(r.entries()[0].name, "inf_1");
        assert!(r.entries()[0].ce < r.entries()[1].ce);
    }

    #[test]
    fn single_feature_ranking() {
        let ds = synthetic::informative_noise_dataset(100, 1, 0, 2, 2, 3);
        let r = rank_variables(&ds, &CeConfig::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.entries()[0].name, "inf_1");
    }

    #[test]
    fn identical_columns_tie_and_order_by_name() {
        let base = synthetic::informative_noise_dataset(200, 1, 0, 2, 3, 13);
        let col = base.features().column(0).to_vec();
        let features = DataMatrix::from_columns(
            vec!["zeta".to_string(), "alpha".to_string()],
            vec![col.clone(), col],
        )
        .unwrap();
        let class_names: BTreeMap<i64, String> =
            base.class_names().clone();
        let ds = crate::dataio::FaciesDataset::new(
            base.wells().to_vec(),
            base.depths().to_vec(),
            features,
            base.labels().to_vec(),
            class_names,
            None,
        )
        .unwrap();
        let r = rank_variables(&ds, &CeConfig::default()).unwrap();
        assert_eq!(r.entries()[0].ce.to_bits(), r.entries()[1].ce.to_bits());
        assert_eq!(r.entries()[0].name, "alpha");
        assert_eq!(r.entries()[1].name, "zeta");
    }

    #[test]
    fn repeated_runs_produce_identical_rankings() {
        let ds = synthetic::informative_noise_dataset(300, 2, 2, 2, 3, 6);
        let a = rank_variables(&ds, &CeConfig::default()).unwrap();
        let b = rank_variables(&ds, &CeConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn positive_scaling_leaves_ranking_bit_identical() {
        let ds = synthetic::informative_noise_dataset(300, 2, 2, 2, 3, 14);
        let mut cols: Vec<Vec<f64>> = (0..ds.features().n_cols())
            .map(|j| ds.features().column(j).to_vec())
            .collect();
        for v in &mut cols[0] {
            *v *= 1000.0;
        }
        let scaled = crate::dataio::FaciesDataset::new(
            ds.wells().to_vec(),
            ds.depths().to_vec(),
            DataMatrix::from_columns(ds.feature_names().to_vec(), cols).unwrap(),
            ds.labels().to_vec(),
            ds.class_names().clone(),
            None,
        )
        .unwrap();
        let a = rank_variables(&ds, &CeConfig::default()).unwrap();
        let b = rank_variables(&scaled, &CeConfig::default()).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.ce.to_bits(), y.ce.to_bits());
        }
    }

    #[test]
    fn errors_name_the_variable() {
        // constant label makes every per-variable estimate fail
        let ds = synthetic::informative_noise_dataset(50, 1, 1, 2, 2, 4);
        let labels = vec![1i64; ds.n_rows()];
        let ds = crate::dataio::FaciesDataset::new(
            ds.wells().to_vec(),
            ds.depths().to_vec(),
            ds.features().clone(),
            labels,
            ds.class_names().clone(),
            None,
        )
        .unwrap();
        match rank_variables(&ds, &CeConfig::default()) {
            Err(Error::Variable { name, source }) => {
                assert_eq!(name, "inf_1");
                assert!(matches!(*source, Error::ConstantLabel));
            }
            other => panic!("expected Variable error, got {other:?}"),
        }
    }

    #[test]
    fn ranking_serializes_as_flat_array() {
        let r = ranking(&[("a", -0.5), ("b", 0.25)]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"[{"name":"a","ce":-0.5,"k":3},{"name":"b","ce":0.25,"k":3}]"#
        );
    }
}
