//! Well-log CSV ingestion with explicit schema and missing-value handling.
//!
//! CSV conventions: UTF-8, comma-separated, header row required, '.' decimal.
//! Missing cells are empty strings or a configurable sentinel token. A sidecar
//! JSON file may map class codes to names and declare which facies are
//! adjacent: `{"class_names": {"1": "sand"}, "adjacency": {"1": [2]}}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// What to do with rows that have missing feature cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Drop any row with a missing cell. Conservative default: no invented data.
    DropRow,
    /// Replace each missing feature cell with the median of the same column
    /// within the same well. Rows in wells with no observed value for that
    /// column are dropped (and counted as drops).
    MedianImputePerWell,
}

/// Column declaration for [`load_csv`] and [`write_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSchema {
    pub well_col: String,
    pub depth_col: String,
    pub label_col: String,
    pub feature_cols: Vec<String>,
    pub missing_policy: MissingPolicy,
    /// Extra token treated as missing, in addition to the empty string.
    pub missing_sentinel: Option<String>,
}

/// Ingestion diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub cells_imputed: usize,
}

/// A labeled well-log table.
///
/// `wells`, `depth`, feature rows and `labels` all have length n; every label
/// code appears in `class_names`; adjacency, when present, is symmetric and
/// only references known codes. Depth is metadata and never used as a feature
/// unless explicitly listed in the schema's `feature_cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaciesDataset {
    wells: Vec<String>,
    depths: Vec<f64>,
    features: DataMatrix,
    labels: Vec<i64>,
    class_names: BTreeMap<i64, String>,
    adjacency: Option<BTreeMap<i64, BTreeSet<i64>>>,
}

impl FaciesDataset {
    pub fn new(
        wells: Vec<String>,
        depths: Vec<f64>,
        features: DataMatrix,
        labels: Vec<i64>,
        class_names: BTreeMap<i64, String>,
        adjacency: Option<BTreeMap<i64, BTreeSet<i64>>>,
    ) -> Result<Self> {
        let n = features.n_rows();
        for (what, len) in [
            ("well column", wells.len()),
            ("depth column", depths.len()),
            ("label column", labels.len()),
        ] {
            if len != n {
                return Err(Error::LengthMismatch {
                    what,
                    len,
                    expected: n,
                });
            }
        }
        for &code in &labels {
            if !class_names.contains_key(&code) {
                return Err(Error::UnnamedClass(code));
            }
        }
        if let Some(adj) = &adjacency {
            for (&a, set) in adj {
                if !class_names.contains_key(&a) {
                    return Err(Error::UnknownAdjacencyCode(a));
                }
                for &b in set {
                    if !class_names.contains_key(&b) {
                        return Err(Error::UnknownAdjacencyCode(b));
                    }
                    if !adj.get(&b).is_some_and(|s| s.contains(&a)) {
                        return Err(Error::AsymmetricAdjacency { from: a, to: b });
                    }
                }
            }
        }
        Ok(Self {
            wells,
            depths,
            features,
            labels,
            class_names,
            adjacency,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.n_rows()
    }

    pub fn wells(&self) -> &[String] {
        &self.wells
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn features(&self) -> &DataMatrix {
        &self.features
    }

    pub fn feature_names(&self) -> &[String] {
        self.features.names()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn class_names(&self) -> &BTreeMap<i64, String> {
        &self.class_names
    }

    pub fn adjacency(&self) -> Option<&BTreeMap<i64, BTreeSet<i64>>> {
        self.adjacency.as_ref()
    }

    /// Dataset with features restricted to `names`, in the given order. All
    /// other fields are unchanged.
    pub fn restrict(&self, names: &[String]) -> Result<Self> {
        let features = self.features.select_columns(names)?;
        Ok(Self {
            wells: self.wells.clone(),
            depths: self.depths.clone(),
            features,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            adjacency: self.adjacency.clone(),
        })
    }

    /// Dataset with the given rows, in the given order.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Self> {
        let features = self.features.subset_rows(rows)?;
        Self::new(
            rows.iter().map(|&i| self.wells[i].clone()).collect(),
            rows.iter().map(|&i| self.depths[i]).collect(),
            features,
            rows.iter().map(|&i| self.labels[i]).collect(),
            self.class_names.clone(),
            self.adjacency.clone(),
        )
    }

    /// Replace class names and adjacency from a sidecar. Every observed label
    /// must have a name; adjacency is symmetrized (a -> b implies b -> a).
    pub fn with_sidecar(mut self, sidecar: Sidecar) -> Result<Self> {
        for &code in &self.labels {
            if !sidecar.class_names.contains_key(&code) {
                return Err(Error::UnnamedClass(code));
            }
        }
        let adjacency = match sidecar.adjacency {
            Some(raw) => {
                let mut sym: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
                for (a, set) in raw {
                    for b in set {
                        if !sidecar.class_names.contains_key(&a) {
                            return Err(Error::UnknownAdjacencyCode(a));
                        }
                        if !sidecar.class_names.contains_key(&b) {
                            return Err(Error::UnknownAdjacencyCode(b));
                        }
                        sym.entry(a).or_default().insert(b);
                        sym.entry(b).or_default().insert(a);
                    }
                }
                Some(sym)
            }
            None => None,
        };
        self.class_names = sidecar.class_names;
        self.adjacency = adjacency;
        Self::new(
            self.wells,
            self.depths,
            self.features,
            self.labels,
            self.class_names,
            self.adjacency,
        )
    }
}

/// Parsed sidecar file: code -> display name, plus optional adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    pub class_names: BTreeMap<i64, String>,
    pub adjacency: Option<BTreeMap<i64, BTreeSet<i64>>>,
}

#[derive(Deserialize)]
struct SidecarFile {
    class_names: BTreeMap<String, String>,
    #[serde(default)]
    adjacency: Option<BTreeMap<String, Vec<i64>>>,
}

pub fn load_sidecar(path: &Path) -> Result<Sidecar> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::FileRead {
        path: path.to_path_buf(),
        source,
    })?;
    let file: SidecarFile = serde_json::from_str(&text).map_err(|e| Error::Sidecar {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let parse_code = |key: &str| -> Result<i64> {
        key.parse().map_err(|_| Error::Sidecar {
            path: path.to_path_buf(),
            reason: format!("class code {key:?} is not an integer"),
        })
    };
    let mut class_names = BTreeMap::new();
    for (key, name) in &file.class_names {
        class_names.insert(parse_code(key)?, name.clone());
    }
    let adjacency = match file.adjacency {
        Some(raw) => {
            let mut out: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
            for (key, list) in &raw {
                out.insert(parse_code(key)?, list.iter().copied().collect());
            }
            Some(out)
        }
        None => None,
    };
    Ok(Sidecar {
        class_names,
        adjacency,
    })
}

struct RawRow {
    well: String,
    depth: f64,
    label: i64,
    cells: Vec<Option<f64>>,
}

/// Parse a well-log CSV into a [`FaciesDataset`] under the given schema.
///
/// Rows with a missing well, depth or label cell are always dropped (those
/// fields cannot be imputed); missing feature cells follow the schema's
/// [`MissingPolicy`]. Unparseable non-missing cells are hard errors with
/// their row and column location.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<(FaciesDataset, LoadReport)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let index_of = |name: &str| headers.iter().position(|h| h == name);
    let mut declared: Vec<&String> = vec![&schema.well_col, &schema.depth_col, &schema.label_col];
    declared.extend(schema.feature_cols.iter());
    let missing: Vec<String> = declared
        .iter()
        .filter(|name| index_of(name).is_none())
        .map(|name| name.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingColumns(missing));
    }
    let well_idx = index_of(&schema.well_col).unwrap();
    let depth_idx = index_of(&schema.depth_col).unwrap();
    let label_idx = index_of(&schema.label_col).unwrap();
    let feature_idx: Vec<usize> = schema
        .feature_cols
        .iter()
        .map(|name| index_of(name).unwrap())
        .collect();

    let is_missing = |cell: &str| -> bool {
        let cell = cell.trim();
        cell.is_empty() || schema.missing_sentinel.as_deref() == Some(cell)
    };

    let mut report = LoadReport::default();
    let mut rows: Vec<RawRow> = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        report.rows_read += 1;
        let row = row_no + 1; // 1-based data row for messages

        let get = |idx: usize| record.get(idx).unwrap_or("");
        if is_missing(get(well_idx)) || is_missing(get(depth_idx)) || is_missing(get(label_idx)) {
            report.rows_dropped += 1;
            continue;
        }
        let depth = parse_f64(get(depth_idx), row, &schema.depth_col)?;
        let label = parse_i64(get(label_idx), row, &schema.label_col)?;
        let mut cells = Vec::with_capacity(feature_idx.len());
        for (j, &idx) in feature_idx.iter().enumerate() {
            let raw = get(idx);
            if is_missing(raw) {
                cells.push(None);
            } else {
                cells.push(Some(parse_f64(raw, row, &schema.feature_cols[j])?));
            }
        }
        rows.push(RawRow {
            well: get(well_idx).trim().to_string(),
            depth,
            label,
            cells,
        });
    }

    let kept: Vec<RawRow> = match schema.missing_policy {
        MissingPolicy::DropRow => {
            let (full, dropped): (Vec<_>, Vec<_>) =
                rows.into_iter().partition(|r| r.cells.iter().all(|c| c.is_some()));
            report.rows_dropped += dropped.len();
            full
        }
        MissingPolicy::MedianImputePerWell => impute_per_well(rows, &mut report),
    };

    if kept.len() < 2 {
        return Err(Error::EmptyAfterPolicy);
    }

    let n = kept.len();
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(n); schema.feature_cols.len()];
    for row in &kept {
        for (j, cell) in row.cells.iter().enumerate() {
            columns[j].push(cell.expect("missing cells resolved by policy"));
        }
    }
    let features = DataMatrix::from_columns(schema.feature_cols.clone(), columns)?;
    let labels: Vec<i64> = kept.iter().map(|r| r.label).collect();
    let class_names: BTreeMap<i64, String> = labels
        .iter()
        .map(|&code| (code, code.to_string()))
        .collect();
    let dataset = FaciesDataset::new(
        kept.iter().map(|r| r.well.clone()).collect(),
        kept.iter().map(|r| r.depth).collect(),
        features,
        labels,
        class_names,
        None,
    )?;
    Ok((dataset, report))
}

fn impute_per_well(rows: Vec<RawRow>, report: &mut LoadReport) -> Vec<RawRow> {
    let n_cols = rows.first().map_or(0, |r| r.cells.len());
    let mut medians: BTreeMap<(String, usize), Option<f64>> = BTreeMap::new();
    for j in 0..n_cols {
        let mut by_well: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for row in &rows {
            if let Some(v) = row.cells[j] {
                by_well.entry(row.well.as_str()).or_default().push(v);
            }
        }
        let wells: BTreeSet<&str> = rows.iter().map(|r| r.well.as_str()).collect();
        for well in wells {
            let median = by_well.get(well).map(|vals| {
                let mut vals = vals.clone();
                vals.sort_by(f64::total_cmp);
                let m = vals.len() / 2;
                if vals.len() % 2 == 1 {
                    vals[m]
                } else {
                    (vals[m - 1] + vals[m]) / 2.0
                }
            });
            medians.insert((well.to_string(), j), median);
        }
    }

    let mut kept = Vec::with_capacity(rows.len());
    'rows: for mut row in rows {
        for (j, cell) in row.cells.iter_mut().enumerate() {
            if cell.is_none() {
                match medians[&(row.well.clone(), j)] {
                    Some(m) => {
                        *cell = Some(m);
                        report.cells_imputed += 1;
                    }
                    None => {
                        // the whole well is missing this column
                        report.rows_dropped += 1;
                        continue 'rows;
                    }
                }
            }
        }
        kept.push(row);
    }
    kept
}

/// Write a dataset back to CSV under the same schema conventions.
///
/// Floats are written with the shortest representation that round-trips, so
/// write-then-load with [`MissingPolicy::DropRow`] is value-identical.
pub fn write_csv(dataset: &FaciesDataset, path: &Path, schema: &CsvSchema) -> Result<()> {
    if schema.feature_cols != dataset.feature_names() {
        return Err(Error::FeatureMismatch {
            expected: dataset.feature_names().to_vec(),
            got: schema.feature_cols.clone(),
        });
    }
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header = vec![
        schema.well_col.clone(),
        schema.depth_col.clone(),
        schema.label_col.clone(),
    ];
    header.extend(schema.feature_cols.iter().cloned());
    writer.write_record(&header).map_err(|e| csv_error(path, e))?;
    for i in 0..dataset.n_rows() {
        let mut record = vec![
            dataset.wells()[i].clone(),
            dataset.depths()[i].to_string(),
            dataset.labels()[i].to_string(),
        ];
        for j in 0..dataset.features().n_cols() {
            record.push(dataset.features().column(j)[i].to_string());
        }
        writer.write_record(&record).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|source| Error::FileWrite {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source: e,
    }
}

fn parse_f64(raw: &str, row: usize, col: &str) -> Result<f64> {
    let parsed: f64 = raw.trim().parse().map_err(|_| Error::ParseCell {
        value: raw.to_string(),
        kind: "number",
        row,
        col: col.to_string(),
    })?;
    if !parsed.is_finite() {
        return Err(Error::ParseCell {
            value: raw.to_string(),
            kind: "finite number",
            row,
            col: col.to_string(),
        });
    }
    Ok(parsed)
}

fn parse_i64(raw: &str, row: usize, col: &str) -> Result<i64> {
    raw.trim().parse().map_err(|_| Error::ParseCell {
        value: raw.to_string(),
        kind: "integer label",
        row,
        col: col.to_string(),
    })
}
