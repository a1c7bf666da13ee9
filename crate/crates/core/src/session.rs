use std::sync::Arc;
use std::time::SystemTime;

use crate::document::SolutionDocument;
use crate::error::Result;
use crate::hierarchy::{build_dendrogram, Dendrogram};
use crate::model::{ClusteringSolution, Dataset, Embedding, Hyperparameters, Linkage};
use crate::search::{NodeMoments, SearchBudget, SearchContext, SearchTrace};
use crate::stats::{fit_prior, PriorModel};

/// The hyperparameter-independent part of a session, built once.
#[derive(Debug)]
pub struct SessionData {
    pub id: String,
    pub dataset: Dataset,
    pub embedding: Embedding,
    pub dendrogram: Dendrogram,
    pub prior: PriorModel,
    pub linkage: Linkage,
    pub created: SystemTime,
    moments: NodeMoments,
}

impl SessionData {
    pub fn new(
        id: impl Into<String>,
        dataset: Dataset,
        embedding: Embedding,
        linkage: Linkage,
        epsilon: f64,
    ) -> Result<Self> {
        if embedding.n() != dataset.n() {
            return Err(crate::Error::RowCountMismatch {
                expected: dataset.n(),
                actual: embedding.n(),
            });
        }
        let prior = fit_prior(&dataset, epsilon)?;
        let dendrogram = build_dendrogram(&embedding, linkage)?;
        let moments = NodeMoments::new(&dataset, &prior, &dendrogram)?;
        Ok(SessionData {
            id: id.into(),
            dataset,
            embedding,
            dendrogram,
            prior,
            linkage,
            created: SystemTime::now(),
            moments,
        })
    }

    pub fn context(&self) -> SearchContext<'_> {
        SearchContext::with_moments(&self.dataset, &self.prior, &self.dendrogram, &self.moments)
            .expect("moments built from the same inputs")
    }

    /// Forces the session's linkage and variance floor onto `hp`: both are
    /// fixed when the session is built.
    pub fn effective(&self, hp: &Hyperparameters) -> Hyperparameters {
        Hyperparameters {
            linkage: self.linkage,
            epsilon: self.prior.epsilon(),
            ..hp.clone()
        }
    }
}

/// A solution together with the settings and trace that produced it.
#[derive(Debug, Clone)]
pub struct Published {
    pub hyperparameters: Hyperparameters,
    pub solution: ClusteringSolution,
    pub trace: SearchTrace,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub data: Arc<SessionData>,
    pub current: Option<Arc<Published>>,
}

impl Session {
    pub fn new(data: SessionData) -> Self {
        Session {
            data: Arc::new(data),
            current: None,
        }
    }

    /// Greedy search from a single cluster. Does not publish.
    pub fn recalc(&self, hp: &Hyperparameters, budget: &SearchBudget) -> Result<Published> {
        let hp = self.data.effective(hp);
        let (solution, trace) = self.data.context().greedy_search(&hp, budget)?;
        Ok(Published {
            hyperparameters: hp,
            solution,
            trace,
        })
    }

    /// Hill-climbs from the current solution; `None` if there is none.
    pub fn refine(&self, hp: &Hyperparameters, budget: &SearchBudget) -> Result<Option<Published>> {
        let Some(current) = &self.current else {
            return Ok(None);
        };
        let hp = self.data.effective(hp);
        let (solution, trace) = self.data.context().refine(&current.solution, &hp, budget)?;
        Ok(Some(Published {
            hyperparameters: hp,
            solution,
            trace,
        }))
    }

    pub fn publish(&mut self, result: Published) {
        self.current = Some(Arc::new(result));
    }

    pub fn document(&self) -> SolutionDocument {
        match &self.current {
            Some(p) => SolutionDocument::new(
                &self.data.dataset,
                &p.hyperparameters,
                Some(&p.solution),
                Some(&p.trace),
            ),
            None => SolutionDocument::new(
                &self.data.dataset,
                &self.data.effective(&Hyperparameters::default()),
                None,
                None,
            ),
        }
    }

    /// Replaces the current solution with the one stored in `doc`.
    pub fn restore(&mut self, doc: &SolutionDocument) -> Result<()> {
        let hyperparameters = doc.hyperparameters.to_hyperparameters()?;
        self.current = doc
            .solution(&self.data.dataset, &self.data.dendrogram)?
            .map(|solution| {
                Arc::new(Published {
                    hyperparameters,
                    solution,
                    trace: doc.trace.as_ref().map(|t| t.to_trace()).unwrap_or_default(),
                })
            });
        Ok(())
    }
}
