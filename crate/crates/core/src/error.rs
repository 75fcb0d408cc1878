//! Error type shared across the crate.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // ---- matrix construction ----
    #[error("matrix needs at least 2 rows, got {0}")]
    TooFewRows(usize),

    #[error("matrix needs at least one column")]
    NoColumns,

    #[error("column {name:?} has {len} rows, expected {expected}")]
    RaggedColumn {
        name: String,
        len: usize,
        expected: usize,
    },

    #[error("non-finite value in column {col:?} at row {row}")]
    NonFinite { col: String, row: usize },

    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("column index {index} out of range for {count} columns")]
    ColumnIndexOutOfRange { index: usize, count: usize },

    #[error("{what} has {len} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        len: usize,
        expected: usize,
    },

    // ---- entropy estimation ----
    #[error("neighbor order k={k} must satisfy 1 <= k <= n-1 for n={n}")]
    BadNeighborOrder { k: usize, n: usize },

    #[error("point buffer of {len} values does not divide into rows of dimension {d}")]
    RaggedPoints { len: usize, d: usize },

    #[error("all {n} points are identical; entropy of degenerate data is undefined")]
    DegenerateData { n: usize },

    #[error("copula entropy needs at least 2 columns, got {0}")]
    UnivariateInput(usize),

    #[error("label column is constant; no dependence is definable")]
    ConstantLabel,

    /// A per-variable estimation failure, annotated with the variable name.
    #[error("variable {name:?}: {source}")]
    Variable {
        name: String,
        #[source]
        source: Box<Error>,
    },

    // ---- selection ----
    #[error("top-k must be at least 1")]
    ZeroTopK,

    #[error("top-k of {requested} exceeds the {available} ranked variables")]
    TopKTooLarge { requested: usize, available: usize },

    // ---- classification ----
    #[error("training set contains a single class")]
    SingleClass,

    #[error("prediction features differ from fit: expected {expected:?}, got {got:?}")]
    FeatureMismatch {
        expected: Vec<String>,
        got: Vec<String>,
    },

    #[error("evaluation inputs are empty")]
    EmptyEvaluation,

    #[error("grouped cross-validation needs at least 2 wells, got {0}")]
    SingleWell(usize),

    // ---- data io ----
    #[error("failed to read {path}: {source}")]
    FileRead {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("failed to write {path}: {source}")]
    FileWrite {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("columns missing from header: {0:?}")]
    MissingColumns(Vec<String>),

    #[error("cannot parse {value:?} as {kind} at data row {row}, column {col:?}")]
    ParseCell {
        value: String,
        kind: &'static str,
        row: usize,
        col: String,
    },

    #[error("fewer than 2 rows left after applying the missing-value policy")]
    EmptyAfterPolicy,

    #[error("unknown feature columns: {0:?}")]
    UnknownColumns(Vec<String>),

    #[error("restriction must name at least one column")]
    EmptyRestriction,

    #[error("label code {0} has no entry in class_names")]
    UnnamedClass(i64),

    #[error("adjacency references unknown class code {0}")]
    UnknownAdjacencyCode(i64),

    #[error("adjacency is not symmetric: {from} -> {to} has no reverse entry")]
    AsymmetricAdjacency { from: i64, to: i64 },

    #[error("invalid sidecar {path}: {reason}")]
    Sidecar { path: PathBuf, reason: String },
}
