//! Versioned solution documents with a canonical text form: object keys
//! sorted, floats written with 17 significant digits, so that loading and
//! saving a document reproduces it byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hierarchy::{clusters_from_cutset, CutSet, Dendrogram, NodeId};
use crate::model::{
    AttributeStatistics, BiclusterPattern, ClusteringSolution, Dataset, Hyperparameters, Linkage,
};
use crate::search::{IterationRecord, Move, SearchTrace};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperparameterRecord {
    pub alpha: f64,
    pub beta: f64,
    pub time_budget_ms: u64,
    pub linkage: Linkage,
    pub epsilon: f64,
    pub min_cluster_size: usize,
    pub iteration_cap: Option<usize>,
}

impl From<&Hyperparameters> for HyperparameterRecord {
    fn from(hp: &Hyperparameters) -> Self {
        HyperparameterRecord {
            alpha: hp.alpha,
            beta: hp.beta,
            time_budget_ms: hp.time_budget.as_millis() as u64,
            linkage: hp.linkage,
            epsilon: hp.epsilon,
            min_cluster_size: hp.min_cluster_size,
            iteration_cap: hp.iteration_cap,
        }
    }
}

impl HyperparameterRecord {
    pub fn to_hyperparameters(&self) -> Result<Hyperparameters> {
        let hp = Hyperparameters {
            alpha: self.alpha,
            beta: self.beta,
            time_budget: Duration::from_millis(self.time_budget_ms),
            linkage: self.linkage,
            epsilon: self.epsilon,
            min_cluster_size: self.min_cluster_size,
            iteration_cap: self.iteration_cap,
        };
        hp.validate()?;
        Ok(hp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRecord {
    pub index: usize,
    pub name: String,
    pub statistics: AttributeStatistics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub node: NodeId,
    pub size: usize,
    pub attributes: Vec<AttributeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub information: f64,
    pub complexity: f64,
    pub si: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub si: f64,
    pub elapsed_ms: f64,
    pub action: Option<Move>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub records: Vec<TraceRecord>,
    pub expired: bool,
}

impl From<&SearchTrace> for TraceDocument {
    fn from(t: &SearchTrace) -> Self {
        TraceDocument {
            records: t
                .records
                .iter()
                .map(|r| TraceRecord {
                    k: r.k,
                    si: r.si,
                    elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
                    action: r.action,
                })
                .collect(),
            expired: t.expired,
        }
    }
}

impl TraceDocument {
    pub fn to_trace(&self) -> SearchTrace {
        SearchTrace {
            records: self
                .records
                .iter()
                .map(|r| IterationRecord {
                    k: r.k,
                    si: r.si,
                    elapsed: Duration::from_secs_f64(r.elapsed_ms.max(0.0) / 1e3),
                    action: r.action,
                })
                .collect(),
            expired: self.expired,
        }
    }
}

/// A saved session result. A document without a solution has an empty
/// cut-set, no labels and no scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub version: u32,
    pub schema_hash: String,
    pub n: usize,
    pub hyperparameters: HyperparameterRecord,
    pub cutset: Vec<NodeId>,
    pub labels: Vec<usize>,
    pub patterns: Vec<PatternRecord>,
    pub scores: Option<ScoreRecord>,
    pub trace: Option<TraceDocument>,
}

impl SolutionDocument {
    pub fn new(
        dataset: &Dataset,
        hp: &Hyperparameters,
        solution: Option<&ClusteringSolution>,
        trace: Option<&SearchTrace>,
    ) -> Self {
        let mut doc = SolutionDocument {
            version: DOCUMENT_VERSION,
            schema_hash: dataset.fingerprint(),
            n: dataset.n(),
            hyperparameters: hp.into(),
            cutset: vec![],
            labels: vec![],
            patterns: vec![],
            scores: None,
            trace: trace.map(TraceDocument::from),
        };
        if let Some(s) = solution {
            doc.cutset = s.cut_set.nodes().to_vec();
            doc.labels = s.labels();
            doc.patterns = s
                .cut_set
                .nodes()
                .iter()
                .zip(&s.patterns)
                .map(|(&node, p)| PatternRecord {
                    node,
                    size: p.size(),
                    attributes: p
                        .attributes()
                        .iter()
                        .zip(p.statistics())
                        .map(|(&j, st)| AttributeRecord {
                            index: j,
                            name: dataset.attribute(j).name.clone(),
                            statistics: *st,
                        })
                        .collect(),
                })
                .collect();
            doc.scores = Some(ScoreRecord {
                information: s.total_information,
                complexity: s.complexity,
                si: s.si,
                iterations: s.iterations_completed,
            });
        }
        doc
    }

    pub fn to_canonical_string(&self) -> String {
        let value = serde_json::to_value(self).expect("document serializes");
        let mut out = String::new();
        write_canonical(&value, 0, &mut out);
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let found = value.get("version").and_then(Value::as_u64).unwrap_or(0) as u32;
        if found != DOCUMENT_VERSION {
            return Err(Error::VersionMismatch {
                expected: DOCUMENT_VERSION,
                found,
            });
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_canonical_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SolutionDocument::parse(&fs::read_to_string(path)?)
    }

    pub fn check_dataset(&self, dataset: &Dataset) -> Result<()> {
        let found = dataset.fingerprint();
        if found != self.schema_hash {
            return Err(Error::SchemaHashMismatch {
                expected: self.schema_hash.clone(),
                found,
            });
        }
        Ok(())
    }

    /// Rebuilds the stored solution against `dataset` and its dendrogram.
    pub fn solution(&self, dataset: &Dataset, d: &Dendrogram) -> Result<Option<ClusteringSolution>> {
        self.check_dataset(dataset)?;
        let Some(scores) = &self.scores else {
            return Ok(None);
        };
        let mismatch = |msg: String| Error::SolutionMismatch(msg);
        let cut = CutSet::from_nodes(d, self.cutset.clone()).map_err(|e| mismatch(e.to_string()))?;
        let clusters = clusters_from_cutset(d, &cut)?;
        if self.patterns.len() != clusters.len() || self.labels.len() != dataset.n() {
            return Err(mismatch("pattern or label count differs from the cut-set".into()));
        }
        let patterns = clusters
            .into_iter()
            .zip(&self.patterns)
            .enumerate()
            .map(|(c, (points, record))| {
                if record.node != cut.nodes()[c] || record.size != points.len() {
                    return Err(mismatch(format!("pattern {c} does not match node {}", cut.nodes()[c])));
                }
                if points.iter().any(|&i| self.labels[i] != c) {
                    return Err(mismatch(format!("labels disagree with cluster {c}")));
                }
                for a in &record.attributes {
                    if a.index >= dataset.m() || dataset.attribute(a.index).name != a.name {
                        return Err(mismatch(format!("unknown attribute '{}'", a.name)));
                    }
                }
                BiclusterPattern::new(
                    points,
                    record.attributes.iter().map(|a| a.index).collect(),
                    record.attributes.iter().map(|a| a.statistics).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(ClusteringSolution {
            cut_set: cut,
            patterns,
            total_information: scores.information,
            complexity: scores.complexity,
            si: scores.si,
            iterations_completed: scores.iterations,
        }))
    }
}

fn write_canonical(value: &Value, indent: usize, out: &mut String) {
    let pad = |out: &mut String, level: usize| {
        out.push('\n');
        out.extend(std::iter::repeat_n("  ", level));
    };
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(num) => {
            if let Some(u) = num.as_u64() {
                write!(out, "{u}").unwrap();
            } else if let Some(i) = num.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                write!(out, "{:.16e}", num.as_f64().unwrap()).unwrap();
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            let nested = items.iter().any(|v| v.is_array() || v.is_object());
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if nested {
                    pad(out, indent + 1);
                } else if i > 0 {
                    out.push(' ');
                }
                write_canonical(item, indent + 1, out);
            }
            if nested {
                pad(out, indent);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push_str(": ");
                write_canonical(&map[key.as_str()], indent + 1, out);
            }
            if !keys.is_empty() {
                pad(out, indent);
            }
            out.push('}');
        }
    }
}
