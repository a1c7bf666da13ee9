//! Loading delimited tables into datasets and embeddings.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Attribute, AttributeType, Dataset, Embedding};

pub const LARGE_N: usize = 100_000;
pub const LARGE_M: usize = 500;

const MISSING: [&str; 6] = ["", "na", "n/a", "nan", "null", "?"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Boolean,
    Real,
    Categorical,
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ColumnKind,
}

/// Declared column types. Columns of the table that are not listed are
/// inferred.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchemaSpec {
    columns: Vec<ColumnSpec>,
}

impl SchemaSpec {
    pub fn new(columns: Vec<ColumnSpec>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::Schema(format!("column '{}' declared twice", c.name)));
            }
        }
        if !columns.is_empty() && columns.iter().all(|c| c.kind == ColumnKind::Ignore) {
            return Err(Error::Schema("every declared column is ignored".into()));
        }
        Ok(SchemaSpec { columns })
    }

    /// Parses a sidecar document: either an object mapping column name to
    /// type, or a list of `{"name", "type"}` entries.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Sidecar {
            Map(BTreeMap<String, ColumnKind>),
            List(Vec<ColumnSpec>),
        }
        let columns = match serde_json::from_str::<Sidecar>(text)? {
            Sidecar::Map(map) => map
                .into_iter()
                .map(|(name, kind)| ColumnSpec { name, kind })
                .collect(),
            Sidecar::List(list) => list,
        };
        SchemaSpec::new(columns)
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    fn kind_of(&self, name: &str) -> Option<ColumnKind> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.kind)
    }
}

#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub dataset: Dataset,
    pub warnings: Vec<String>,
}

fn delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    if header.contains('\t') && !header.contains(',') {
        b'\t'
    } else {
        b','
    }
}

fn reader(text: &str, headers: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter(text))
        .has_headers(headers)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn is_missing(token: &str) -> bool {
    MISSING.iter().any(|m| token.eq_ignore_ascii_case(m))
}

fn parse_real(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_boolean(token: &str) -> Option<f64> {
    match token.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" => Some(1.0),
        "0" | "false" | "no" => Some(0.0),
        _ => None,
    }
}

/// One input column turned into zero or more attributes.
struct Expanded {
    attributes: Vec<Attribute>,
    columns: Vec<Vec<f64>>,
}

fn non_numeric(row: usize, column: &str, value: &str) -> Error {
    Error::NonNumeric {
        row: row + 1,
        column: column.to_string(),
        value: value.to_string(),
    }
}

fn real_column(name: &str, cells: &[&str]) -> Result<Expanded> {
    let values = cells
        .iter()
        .enumerate()
        .map(|(i, c)| parse_real(c).ok_or_else(|| non_numeric(i, name, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Expanded {
        attributes: vec![Attribute::new(name, AttributeType::Real)],
        columns: vec![values],
    })
}

fn boolean_column(name: &str, cells: &[&str], warnings: &mut Vec<String>) -> Result<Expanded> {
    let values = cells
        .iter()
        .enumerate()
        .map(|(i, c)| parse_boolean(c).ok_or_else(|| non_numeric(i, name, c)))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().all(|&v| v == values[0]) {
        warnings.push(format!("column '{name}' is constant and was dropped"));
        return Ok(Expanded {
            attributes: vec![],
            columns: vec![],
        });
    }
    Ok(Expanded {
        attributes: vec![Attribute::new(name, AttributeType::Boolean)],
        columns: vec![values],
    })
}

/// One indicator per distinct value; a two-valued column keeps only the
/// indicator of its lexicographically first value.
fn categorical_column(name: &str, cells: &[&str], warnings: &mut Vec<String>) -> Expanded {
    let levels: BTreeSet<&str> = cells.iter().copied().collect();
    let levels: Vec<&str> = match levels.len() {
        1 => {
            warnings.push(format!("column '{name}' is constant and was dropped"));
            vec![]
        }
        2 => levels.into_iter().take(1).collect(),
        _ => levels.into_iter().collect(),
    };
    let columns = levels
        .iter()
        .map(|level| {
            cells
                .iter()
                .map(|c| if c == level { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    Expanded {
        attributes: levels
            .iter()
            .map(|level| Attribute::new(format!("{name}={level}"), AttributeType::Boolean))
            .collect(),
        columns,
    }
}

fn infer_column(name: &str, cells: &[&str], warnings: &mut Vec<String>) -> Result<Expanded> {
    if cells.iter().all(|c| parse_real(c).is_some()) {
        if cells.iter().all(|c| matches!(parse_real(c), Some(v) if v == 0.0 || v == 1.0)) {
            return boolean_column(name, cells, warnings);
        }
        return real_column(name, cells);
    }
    if cells.iter().all(|c| parse_boolean(c).is_some()) {
        return boolean_column(name, cells, warnings);
    }
    Ok(categorical_column(name, cells, warnings))
}

/// Parses a delimited table with a header row. Row `i` of the table
/// becomes point `i`.
pub fn load_dataset(text: &str, schema: Option<&SchemaSpec>) -> Result<LoadedDataset> {
    let mut rdr = reader(text, true);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut seen = BTreeSet::new();
    for name in &header {
        if name.is_empty() {
            return Err(Error::Schema("empty column name in header".into()));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::Schema(format!("duplicate column '{name}'")));
        }
    }
    if let Some(spec) = schema {
        if let Some(c) = spec.columns().iter().find(|c| !seen.contains(c.name.as_str())) {
            return Err(Error::Schema(format!("declared column '{}' is not in the table", c.name)));
        }
    }
    let records = rdr.records().collect::<std::result::Result<Vec<_>, _>>()?;
    let n = records.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }

    let mut warnings = Vec::new();
    let mut schema_out = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (j, name) in header.iter().enumerate() {
        let kind = schema.and_then(|s| s.kind_of(name));
        if kind == Some(ColumnKind::Ignore) {
            continue;
        }
        let cells: Vec<&str> = records.iter().map(|r| &r[j]).collect();
        if let Some(row) = cells.iter().position(|c| is_missing(c)) {
            return Err(Error::MissingValue {
                row: row + 1,
                column: name.clone(),
            });
        }
        let expanded = match kind {
            Some(ColumnKind::Real) => real_column(name, &cells)?,
            Some(ColumnKind::Boolean) => boolean_column(name, &cells, &mut warnings)?,
            Some(ColumnKind::Categorical) => categorical_column(name, &cells, &mut warnings),
            Some(ColumnKind::Ignore) => unreachable!(),
            None => infer_column(name, &cells, &mut warnings)?,
        };
        schema_out.extend(expanded.attributes);
        columns.extend(expanded.columns);
    }
    if schema_out.is_empty() {
        return Err(Error::Schema("no usable columns".into()));
    }
    let m = schema_out.len();
    if n > LARGE_N {
        warnings.push(format!("{n} points exceeds {LARGE_N}; searches may be slow"));
    }
    if m > LARGE_M {
        warnings.push(format!("{m} attributes exceeds {LARGE_M}; searches may be slow"));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    let mut values = Vec::with_capacity(n * m);
    for i in 0..n {
        values.extend(columns.iter().map(|c| c[i]));
    }
    Ok(LoadedDataset {
        dataset: Dataset::new(values, schema_out)?,
        warnings,
    })
}

pub fn load_dataset_file(path: impl AsRef<Path>, schema: Option<&SchemaSpec>) -> Result<LoadedDataset> {
    load_dataset(&fs::read_to_string(path)?, schema)
}

/// Parses a two-column coordinate table (optional `x,y` header) with one
/// row per point.
pub fn load_embedding(text: &str, n_expected: usize) -> Result<Embedding> {
    let mut rdr = reader(text, false);
    let mut coords = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::InvalidEmbedding(format!(
                "row {} has {} columns, only 2D embeddings are supported",
                i + 1,
                record.len()
            )));
        }
        if i == 0 && record[0].eq_ignore_ascii_case("x") && record[1].eq_ignore_ascii_case("y") {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                Error::InvalidEmbedding(format!("row {}: '{s}' is not a finite number", i + 1))
            })
        };
        coords.push([parse(&record[0])?, parse(&record[1])?]);
    }
    if coords.len() != n_expected {
        return Err(Error::RowCountMismatch {
            expected: n_expected,
            actual: coords.len(),
        });
    }
    Embedding::new(coords)
}

pub fn load_embedding_file(path: impl AsRef<Path>, n_expected: usize) -> Result<Embedding> {
    load_embedding(&fs::read_to_string(path)?, n_expected)
}
