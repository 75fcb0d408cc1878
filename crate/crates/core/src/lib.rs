//! Copula-entropy toolkit for dependence measurement and variable selection,
//! with a facies-classification harness for well-log data.
//!
//! The pipeline: rank-transform observations to the empirical copula, estimate
//! copula entropy (CE) with a k-nearest-neighbor entropy estimator, rank each
//! geological variable by its CE against the facies label, select the
//! variables with large negative CE, and check with leave-one-well-out
//! cross-validation that classification performance is preserved on the
//! selected subset. CE equals minus the mutual information, so strong
//! dependence shows up as a large negative value, and because it is built on
//! ranks it is exactly invariant under strictly increasing transforms of each
//! variable.

pub mod classify;
pub mod copula;
pub mod dataio;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod selection;
pub mod special;
pub mod synthetic;

pub use classify::{evaluate, fit, grouped_cv, EvalReport, KnnClassifier, KnnConfig, Weighting};
pub use copula::{rank_transform, EmpiricalCopula, TiePolicy};
pub use dataio::{load_csv, load_sidecar, write_csv, CsvSchema, FaciesDataset, LoadReport, MissingPolicy};
pub use entropy::{ce_with_label, copula_entropy, knn_entropy, CeConfig, CeEstimate};
pub use error::{Error, Result};
pub use matrix::DataMatrix;
pub use selection::{rank_variables, select, RankedVariable, SelectionRule, VariableRanking};
