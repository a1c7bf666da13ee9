//! Response bodies.

use serde::{Deserialize, Serialize};
use xclust_core::info::attribute_information;
use xclust_core::{
    AttributeStatistics, AttributeType, ClusteringSolution, Linkage, NodeId, Published, SessionData,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub linkage: Linkage,
    pub warnings: Vec<String>,
}

/// Dashboard figures for a published solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub k: usize,
    pub attributes: usize,
    pub information: f64,
    pub sizes: Vec<usize>,
    pub nodes: Vec<NodeId>,
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub expired: bool,
}

impl SolutionSummary {
    pub fn new(p: &Published) -> Self {
        let s = &p.solution;
        SolutionSummary {
            k: s.k(),
            attributes: s.attribute_count(),
            information: s.total_information,
            sizes: s.cluster_sizes(),
            nodes: s.cut_set.nodes().to_vec(),
            labels: s.labels(),
            iterations: s.iterations_completed,
            expired: p.trace.expired,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Accepted {
    pub running: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatusView {
    pub running: bool,
    pub iterations: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingPoint {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub cluster: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingView {
    pub points: Vec<EmbeddingPoint>,
    /// Cut-set node of each cluster, a stable key for colouring.
    pub nodes: Vec<NodeId>,
}

impl EmbeddingView {
    pub fn new(data: &SessionData, solution: Option<&ClusteringSolution>) -> Self {
        let labels = solution.map(|s| s.labels());
        EmbeddingView {
            points: data
                .embedding
                .coords()
                .iter()
                .enumerate()
                .map(|(i, &[x, y])| EmbeddingPoint {
                    index: i,
                    x,
                    y,
                    cluster: labels.as_ref().map(|l| l[i]),
                })
                .collect(),
            nodes: solution.map(|s| s.cut_set.nodes().to_vec()).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeExplanation {
    pub index: usize,
    pub name: String,
    #[serde(rename = "type")]
    pub kind: AttributeType,
    pub cluster: AttributeStatistics,
    pub prior: AttributeStatistics,
    pub information: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanationView {
    pub cluster: usize,
    pub node: NodeId,
    pub size: usize,
    pub relative_size: f64,
    pub attributes: Vec<AttributeExplanation>,
}

impl ExplanationView {
    pub fn new(data: &SessionData, s: &ClusteringSolution, cluster: usize) -> Self {
        let p = &s.patterns[cluster];
        let mut attributes: Vec<AttributeExplanation> = p
            .attributes()
            .iter()
            .zip(p.statistics())
            .map(|(&j, st)| {
                let prior = *data.prior.get(j);
                AttributeExplanation {
                    index: j,
                    name: data.dataset.attribute(j).name.clone(),
                    kind: st.kind(),
                    cluster: *st,
                    prior,
                    information: attribute_information(p.size(), st, &prior),
                }
            })
            .collect();
        attributes.sort_by(|a, b| {
            b.information
                .total_cmp(&a.information)
                .then(a.index.cmp(&b.index))
        });
        ExplanationView {
            cluster,
            node: s.cut_set.nodes()[cluster],
            size: p.size(),
            relative_size: p.size() as f64 / data.dataset.n() as f64,
            attributes,
        }
    }

    pub fn all(data: &SessionData, s: &ClusteringSolution) -> Vec<Self> {
        (0..s.k()).map(|c| ExplanationView::new(data, s, c)).collect()
    }
}
