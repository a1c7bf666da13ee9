//! Explainable clustering of 2D embeddings: cut an agglomerative
//! dendrogram so that the resulting clusters, each described by a few
//! attribute statistics, are maximally interesting relative to a
//! background model of the full data.

pub mod batch;
pub mod document;
pub mod error;
pub mod hierarchy;
pub mod info;
pub mod ingest;
pub mod model;
pub mod pca;
pub mod search;
pub mod session;
pub mod stats;
pub mod synthetic;

pub use document::SolutionDocument;
pub use error::{Error, Result};
pub use hierarchy::{build_dendrogram, clusters_from_cutset, CutSet, Dendrogram, NodeId};
pub use ingest::{load_dataset, load_embedding, ColumnKind, ColumnSpec, LoadedDataset, SchemaSpec};
pub use model::{
    Attribute, AttributeStatistics, AttributeType, BiclusterPattern, ClusteringSolution, Dataset,
    Embedding, Hyperparameters, Linkage,
};
pub use pca::pca_embedding;
pub use search::{
    evaluate_cutset, greedy_search, refine, select_attributes, Move, SearchBudget, SearchContext,
    SearchTrace,
};
pub use session::{Published, Session, SessionData};
pub use stats::{fit_cluster_statistics, fit_prior, PriorModel};
