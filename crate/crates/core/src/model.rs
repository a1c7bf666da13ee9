//! Dataset, embedding, pattern and solution types.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hierarchy::CutSet;

/// Type of an attribute column. Categorical inputs are one-hot expanded into
/// `Boolean` attributes during ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeType {
    Boolean,
    Real,
}

impl AttributeType {
    /// Number of statistics needed to describe an attribute of this type:
    /// a frequency for booleans, a mean and a standard deviation for reals.
    pub fn statistic_count(self) -> usize {
        match self {
            AttributeType::Boolean => 1,
            AttributeType::Real => 2,
        }
    }
}

impl fmt::Display for AttributeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeType::Boolean => f.write_str("boolean"),
            AttributeType::Real => f.write_str("real"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: AttributeType,
}

impl Attribute {
    pub fn new(name: impl Into<String>, kind: AttributeType) -> Self {
        Attribute {
            name: name.into(),
            kind,
        }
    }
}

/// An `n × m` data matrix with a per-attribute type schema.
///
/// Values are stored row-major; boolean attributes hold exactly `0.0` or `1.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    schema: Vec<Attribute>,
    n: usize,
}

impl Dataset {
    pub fn new(values: Vec<f64>, schema: Vec<Attribute>) -> Result<Self> {
        let m = schema.len();
        if m == 0 {
            return Err(Error::InvalidDataset("at least one attribute is required".into()));
        }
        if !values.len().is_multiple_of(m) {
            return Err(Error::InvalidDataset(format!(
                "{} values do not fill rows of {} attributes",
                values.len(),
                m
            )));
        }
        let n = values.len() / m;
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        for (idx, &v) in values.iter().enumerate() {
            let (row, col) = (idx / m, idx % m);
            if !v.is_finite() {
                return Err(Error::InvalidDataset(format!(
                    "non-finite value at row {row}, attribute '{}'",
                    schema[col].name
                )));
            }
            if schema[col].kind == AttributeType::Boolean && v != 0.0 && v != 1.0 {
                return Err(Error::InvalidDataset(format!(
                    "boolean attribute '{}' has value {v} at row {row}",
                    schema[col].name
                )));
            }
        }
        Ok(Dataset { values, schema, n })
    }

    pub fn from_rows(rows: &[Vec<f64>], schema: Vec<Attribute>) -> Result<Self> {
        let m = schema.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::InvalidDataset(format!(
                "row {i} has {} values, expected {m}",
                r.len()
            )));
        }
        Dataset::new(rows.concat(), schema)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.schema.len()
    }

    pub fn schema(&self) -> &[Attribute] {
        &self.schema
    }

    pub fn attribute(&self, j: usize) -> &Attribute {
        &self.schema[j]
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.schema.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.schema.len();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + Clone + '_ {
        self.values.iter().skip(j).step_by(self.m()).copied()
    }

    /// Rows `indices` (in the given order) as a new dataset.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let mut values = Vec::with_capacity(indices.len() * self.m());
        for &i in indices {
            if i >= self.n {
                return Err(Error::PointOutOfRange { index: i, n: self.n });
            }
            values.extend_from_slice(self.row(i));
        }
        Dataset::new(values, self.schema.clone())
    }

    /// Content hash over the schema and every value, used to tie saved
    /// solutions to the data they were computed on.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n as u64).to_le_bytes());
        hasher.update((self.m() as u64).to_le_bytes());
        for attr in &self.schema {
            hasher.update(attr.name.as_bytes());
            hasher.update([0u8, attr.kind.statistic_count() as u8]);
        }
        for v in &self.values {
            hasher.update(v.to_bits().to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Two-dimensional coordinates, one row per data point.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    coords: Vec<[f64; 2]>,
}

impl Embedding {
    pub fn new(coords: Vec<[f64; 2]>) -> Result<Self> {
        if let Some(i) = coords
            .iter()
            .position(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(Error::InvalidEmbedding(format!("non-finite coordinate at row {i}")));
        }
        Ok(Embedding { coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        self.coords[i]
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Embedding> {
        let coords = indices
            .iter()
            .map(|&i| {
                self.coords
                    .get(i)
                    .copied()
                    .ok_or(Error::PointOutOfRange { index: i, n: self.n() })
            })
            .collect::<Result<Vec<_>>>()?;
        Embedding::new(coords)
    }
}

/// Maximum-likelihood statistics of one attribute over a set of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AttributeStatistics {
    Boolean { frequency: f64 },
    Real { mean: f64, stdev: f64 },
}

impl AttributeStatistics {
    pub fn kind(&self) -> AttributeType {
        match self {
            AttributeStatistics::Boolean { .. } => AttributeType::Boolean,
            AttributeStatistics::Real { .. } => AttributeType::Real,
        }
    }

    pub fn statistic_count(&self) -> usize {
        self.kind().statistic_count()
    }
}

/// A point set together with the statistics of a subset of attributes over it.
#[derive(Debug, Clone, PartialEq)]
pub struct BiclusterPattern {
    points: Vec<usize>,
    attributes: Vec<usize>,
    statistics: Vec<AttributeStatistics>,
}

impl BiclusterPattern {
    /// `points` is sorted on construction; `attributes` keeps its order.
    pub fn new(
        mut points: Vec<usize>,
        attributes: Vec<usize>,
        statistics: Vec<AttributeStatistics>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCluster);
        }
        if attributes.is_empty() {
            return Err(Error::InvalidDataset(
                "a pattern needs at least one attribute".into(),
            ));
        }
        if attributes.len() != statistics.len() {
            return Err(Error::InvalidDataset(format!(
                "{} attributes but {} statistics",
                attributes.len(),
                statistics.len()
            )));
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0]));
        }
        Ok(BiclusterPattern {
            points,
            attributes,
            statistics,
        })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn attributes(&self) -> &[usize] {
        &self.attributes
    }

    pub fn statistics(&self) -> &[AttributeStatistics] {
        &self.statistics
    }

    /// Total number of statistics the pattern presents.
    pub fn statistic_count(&self) -> usize {
        self.statistics.iter().map(|s| s.statistic_count()).sum()
    }
}

/// Inter-cluster distance rule for agglomeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    #[default]
    Single,
    Complete,
    Average,
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        })
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(Error::InvalidHyperparameters(format!(
                "unknown linkage '{other}' (expected single, complete or average)"
            ))),
        }
    }
}

pub const DEFAULT_EPSILON: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    /// Constant offset of the description complexity.
    pub alpha: f64,
    /// Exponent applied to the total statistic count.
    pub beta: f64,
    pub time_budget: Duration,
    pub linkage: Linkage,
    /// Relative variance floor.
    pub epsilon: f64,
    pub min_cluster_size: usize,
    /// Deterministic alternative to the wall-clock budget: the maximum number
    /// of completed search iterations.
    pub iteration_cap: Option<usize>,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            alpha: 250.0,
            beta: 1.6,
            time_budget: Duration::from_secs(5),
            linkage: Linkage::Single,
            epsilon: DEFAULT_EPSILON,
            min_cluster_size: 1,
            iteration_cap: None,
        }
    }
}

impl Hyperparameters {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Hyperparameters {
            alpha,
            beta,
            ..Default::default()
        }
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_iteration_cap(mut self, cap: usize) -> Self {
        self.iteration_cap = Some(cap);
        self
    }

    pub fn with_linkage(mut self, linkage: Linkage) -> Self {
        self.linkage = linkage;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidHyperparameters(msg));
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if !(self.beta.is_finite() && self.beta >= 1.0) {
            return bad(format!("beta must be finite and >= 1, got {}", self.beta));
        }
        if self.time_budget.is_zero() {
            return bad("time budget must be positive".into());
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad(format!("epsilon must be finite and > 0, got {}", self.epsilon));
        }
        if self.min_cluster_size == 0 {
            return bad("min_cluster_size must be at least 1".into());
        }
        if self.iteration_cap == Some(0) {
            return bad("iteration cap must be at least 1".into());
        }
        Ok(())
    }
}

/// A dendrogram cut together with one explaining pattern per cluster.
///
/// Patterns are listed in the cut-set's insertion order, so `patterns[c]`
/// is the cluster induced by `cut_set.nodes()[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringSolution {
    pub cut_set: CutSet,
    pub patterns: Vec<BiclusterPattern>,
    pub total_information: f64,
    pub complexity: f64,
    pub si: f64,
    pub iterations_completed: usize,
}

impl ClusteringSolution {
    pub fn k(&self) -> usize {
        self.patterns.len()
    }

    /// Cluster index of every point.
    pub fn labels(&self) -> Vec<usize> {
        let n = self.patterns.iter().map(|p| p.size()).sum();
        let mut labels = vec![0; n];
        for (c, p) in self.patterns.iter().enumerate() {
            for &i in p.points() {
                labels[i] = c;
            }
        }
        labels
    }

    pub fn attribute_count(&self) -> usize {
        self.patterns.iter().map(|p| p.attributes().len()).sum()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.patterns.iter().map(|p| p.size()).collect()
    }
}
