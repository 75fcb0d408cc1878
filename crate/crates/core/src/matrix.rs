//! Column-major table of finite observations.

use crate::error::{Error, Result};

/// An n x d table of finite reals with named columns.
///
/// Rows are observations (depth samples), columns are variables. Every entry
/// is finite and column names are pairwise distinct; both are enforced at
/// construction so downstream code never sees NaN or Inf. At least 2 rows are
/// required, since a single observation carries no rank information.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n_rows: usize,
}

impl DataMatrix {
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.is_empty() || columns.is_empty() {
            return Err(Error::NoColumns);
        }
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                what: "column names",
                len: names.len(),
                expected: columns.len(),
            });
        }
        let n_rows = columns[0].len();
        if n_rows < 2 {
            return Err(Error::TooFewRows(n_rows));
        }
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(Error::RaggedColumn {
                    name: name.clone(),
                    len: col.len(),
                    expected: n_rows,
                });
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    col: name.clone(),
                    row,
                });
            }
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        Ok(Self {
            names,
            columns,
            n_rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, index: usize) -> &[f64] {
        &self.columns[index]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New matrix with the named columns, in the given order.
    pub fn select_columns(&self, names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let unknown: Vec<String> = names
            .iter()
            .filter(|n| self.column_index(n).is_none())
            .cloned()
            .collect();
        if !unknown.is_empty() {
            return Err(Error::UnknownColumns(unknown));
        }
        let columns = names
            .iter()
            .map(|n| self.columns[self.column_index(n).unwrap()].clone())
            .collect();
        Self::from_columns(names.to_vec(), columns)
    }

    /// New matrix with the given rows, in the given order.
    ///
    /// Panics on out-of-range indices; callers derive indices from this matrix.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewRows(rows.len()));
        }
        let columns = self
            .columns
            .iter()
            .map(|col| rows.iter().map(|&i| col[i]).collect())
            .collect();
        Self::from_columns(self.names.clone(), columns)
    }
}
