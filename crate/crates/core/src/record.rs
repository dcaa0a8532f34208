//! Project records and CSV ingestion.
//!
//! File format: UTF-8 CSV with a dot decimal separator and the exact header
//! `id,<factor names in schema order...>,overhead_pct`. One row per project.

use std::path::Path;

use crate::error::{Error, Result};
use crate::schema::{FactorKind, FactorSchema};

/// One factor value, positionally matched to the schema.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorValue {
    Categorical(String),
    Continuous(f64),
}

impl FactorValue {
    /// Raw numeric stand-in used by the encoders: level index for categorical
    /// values, the value itself for continuous ones.
    pub(crate) fn raw(&self, kind: &FactorKind) -> Result<f64> {
        match (self, kind) {
            (FactorValue::Categorical(label), FactorKind::Categorical { levels }) => levels
                .iter()
                .position(|l| l == label)
                .map(|i| i as f64)
                .ok_or_else(|| Error::InvalidDataset(format!("unknown label {label:?}"))),
            (FactorValue::Continuous(v), FactorKind::Continuous { .. }) => Ok(*v),
            _ => Err(Error::InvalidDataset("factor value kind mismatch".into())),
        }
    }

    fn render(&self) -> String {
        match self {
            FactorValue::Categorical(label) => label.clone(),
            FactorValue::Continuous(v) => format!("{v}"),
        }
    }
}

/// One building project: ten factor values plus the observed site overhead
/// cost as a percentage of total contract price.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectRecord {
    pub id: String,
    pub values: Vec<FactorValue>,
    pub overhead_pct: f64,
}

impl ProjectRecord {
    /// Checks this record against `schema`: positional kind match, known
    /// labels, in-range continuous values, and overhead in (0, 100).
    pub fn validate(&self, schema: &FactorSchema) -> Result<()> {
        if self.values.len() != schema.factors.len() {
            return Err(Error::InvalidDataset(format!(
                "record {:?} has {} values, schema declares {}",
                self.id,
                self.values.len(),
                schema.factors.len()
            )));
        }
        for (spec, value) in schema.factors.iter().zip(&self.values) {
            match (&spec.kind, value) {
                (FactorKind::Categorical { levels }, FactorValue::Categorical(label)) => {
                    if !levels.iter().any(|l| l == label) {
                        return Err(Error::InvalidDataset(format!(
                            "record {:?}, factor {:?}: unknown label {:?}",
                            self.id, spec.name, label
                        )));
                    }
                }
                (FactorKind::Continuous { min, max, .. }, FactorValue::Continuous(v)) => {
                    if !v.is_finite() || v < min || v > max {
                        return Err(Error::InvalidDataset(format!(
                            "record {:?}, factor {:?}: value {v} outside [{min}, {max}]",
                            self.id, spec.name
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidDataset(format!(
                        "record {:?}, factor {:?}: value kind does not match schema",
                        self.id, spec.name
                    )));
                }
            }
        }
        if !(self.overhead_pct.is_finite() && self.overhead_pct > 0.0 && self.overhead_pct < 100.0)
        {
            return Err(Error::InvalidDataset(format!(
                "record {:?}: overhead must be in (0,100), got {}",
                self.id, self.overhead_pct
            )));
        }
        Ok(())
    }
}

/// One row-scoped validation failure found while scanning a project file.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostic {
    /// 1-based data-row number (header excluded).
    pub row: usize,
    pub column: String,
    pub reason: String,
}

impl std::fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}, column {:?}: {}", self.row, self.column, self.reason)
    }
}

impl RowDiagnostic {
    fn into_error(self) -> Error {
        Error::InvalidRecord {
            row: self.row,
            column: self.column,
            reason: self.reason,
        }
    }
}

fn expected_header(schema: &FactorSchema) -> Vec<String> {
    let mut header = Vec::with_capacity(schema.factors.len() + 2);
    header.push("id".to_string());
    header.extend(schema.factors.iter().map(|f| f.name.clone()));
    header.push("overhead_pct".to_string());
    header
}

fn parse_row(
    row_no: usize,
    row: &csv::StringRecord,
    schema: &FactorSchema,
) -> std::result::Result<ProjectRecord, RowDiagnostic> {
    let width = schema.factors.len() + 2;
    if row.len() != width {
        return Err(RowDiagnostic {
            row: row_no,
            column: "<row>".into(),
            reason: format!("expected {width} fields, got {}", row.len()),
        });
    }
    let id = row[0].to_string();
    if id.is_empty() {
        return Err(RowDiagnostic {
            row: row_no,
            column: "id".into(),
            reason: "empty id".into(),
        });
    }

    let mut values = Vec::with_capacity(schema.factors.len());
    for (i, spec) in schema.factors.iter().enumerate() {
        let cell = &row[i + 1];
        match &spec.kind {
            FactorKind::Categorical { levels } => {
                if !levels.iter().any(|l| l == cell) {
                    return Err(RowDiagnostic {
                        row: row_no,
                        column: spec.name.clone(),
                        reason: format!("unknown label {cell:?}"),
                    });
                }
                values.push(FactorValue::Categorical(cell.to_string()));
            }
            FactorKind::Continuous { min, max, unit } => {
                let v: f64 = cell.parse().map_err(|_| RowDiagnostic {
                    row: row_no,
                    column: spec.name.clone(),
                    reason: format!("not a number: {cell:?}"),
                })?;
                if !v.is_finite() || v < *min || v > *max {
                    return Err(RowDiagnostic {
                        row: row_no,
                        column: spec.name.clone(),
                        reason: format!("value {v} outside [{min}, {max}] {unit}"),
                    });
                }
                values.push(FactorValue::Continuous(v));
            }
        }
    }

    let overhead_cell = &row[width - 1];
    let overhead_pct: f64 = overhead_cell.parse().map_err(|_| RowDiagnostic {
        row: row_no,
        column: "overhead_pct".into(),
        reason: format!("not a number: {overhead_cell:?}"),
    })?;
    if !(overhead_pct.is_finite() && overhead_pct > 0.0 && overhead_pct < 100.0) {
        return Err(RowDiagnostic {
            row: row_no,
            column: "overhead_pct".into(),
            reason: format!("overhead must be in (0,100), got {overhead_cell}"),
        });
    }

    Ok(ProjectRecord {
        id,
        values,
        overhead_pct,
    })
}

/// Scans a project CSV, returning every valid record alongside one diagnostic
/// per invalid row. A header mismatch aborts the scan with a hard error.
pub fn scan_projects(
    path: impl AsRef<Path>,
    schema: &FactorSchema,
) -> Result<(Vec<ProjectRecord>, Vec<RowDiagnostic>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    scan_projects_str(&text, schema)
}

/// Like [`scan_projects`] but over an in-memory CSV string.
pub fn scan_projects_str(
    csv_text: &str,
    schema: &FactorSchema,
) -> Result<(Vec<ProjectRecord>, Vec<RowDiagnostic>)> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(csv_text.as_bytes());

    let expected = expected_header(schema);
    let header = reader.headers()?.clone();
    let got: Vec<String> = header.iter().map(str::to_string).collect();
    if got != expected {
        return Err(Error::InvalidDataset(format!(
            "header mismatch: expected {:?}, got {:?}",
            expected.join(","),
            got.join(",")
        )));
    }

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen_ids: Vec<String> = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let row_no = idx + 1;
        let row = row?;
        match parse_row(row_no, &row, schema) {
            Ok(record) => {
                if seen_ids.contains(&record.id) {
                    diagnostics.push(RowDiagnostic {
                        row: row_no,
                        column: "id".into(),
                        reason: format!("duplicate id {:?}", record.id),
                    });
                } else {
                    seen_ids.push(record.id.clone());
                    records.push(record);
                }
            }
            Err(diag) => diagnostics.push(diag),
        }
    }
    Ok((records, diagnostics))
}

/// Loads a project CSV, failing on the first invalid row. Row order is
/// preserved and duplicate ids are rejected.
pub fn load_projects(path: impl AsRef<Path>, schema: &FactorSchema) -> Result<Vec<ProjectRecord>> {
    let (records, diagnostics) = scan_projects(path, schema)?;
    match diagnostics.into_iter().next() {
        Some(diag) => Err(diag.into_error()),
        None => Ok(records),
    }
}

/// Serializes records to the project CSV format (exact inverse of loading).
pub fn projects_to_csv(records: &[ProjectRecord], schema: &FactorSchema) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(expected_header(schema))?;
    for record in records {
        let mut row = Vec::with_capacity(schema.factors.len() + 2);
        row.push(record.id.clone());
        row.extend(record.values.iter().map(FactorValue::render));
        row.push(format!("{}", record.overhead_pct));
        writer.write_record(&row)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::InvalidDataset(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidDataset(e.to_string()))
}

/// Writes records to `path` in the project CSV format.
pub fn save_projects(
    path: impl AsRef<Path>,
    records: &[ProjectRecord],
    schema: &FactorSchema,
) -> Result<()> {
    let path = path.as_ref();
    let text = projects_to_csv(records, schema)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
