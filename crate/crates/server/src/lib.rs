//! HTTP API over in-memory clustering sessions.

pub mod error;
pub mod state;
pub mod views;

use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use xclust_core::{
    load_dataset, load_embedding, pca_embedding, Hyperparameters, Linkage, SchemaSpec, SessionData,
};

pub use error::{ApiError, ApiResult};
pub use state::{AppState, Config, SearchKind};
pub use views::{
    Accepted, AttributeExplanation, EmbeddingView, ExplanationView, SessionSummary, SolutionSummary,
    StatusView,
};

/// Budgets above this run in the background and answer 202.
pub const BLOCKING_LIMIT: Duration = Duration::from_secs(2);
pub const MAX_BODY: usize = 512 * 1024 * 1024;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// Delimited text of the dataset.
    pub data: String,
    /// Delimited text of the 2D embedding, or `"pca"`.
    pub embedding: String,
    #[serde(default)]
    pub schema: Option<serde_json::Value>,
    #[serde(default)]
    pub linkage: Option<Linkage>,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRequest {
    pub alpha: f64,
    pub beta: f64,
    pub time_budget_ms: f64,
    /// Replaces the wall-clock budget, for reproducible runs.
    #[serde(default)]
    pub iteration_cap: Option<usize>,
}

impl SearchRequest {
    pub fn hyperparameters(&self) -> ApiResult<Hyperparameters> {
        let bad = |m: String| Err(ApiError::BadRequest(m));
        if !(0.0..=1000.0).contains(&self.alpha) {
            return bad(format!("alpha must be in [0, 1000], got {}", self.alpha));
        }
        if !(1.0..=2.0).contains(&self.beta) {
            return bad(format!("beta must be in [1, 2], got {}", self.beta));
        }
        if !(self.time_budget_ms > 0.0 && self.time_budget_ms <= 600_000.0) {
            return bad(format!(
                "time_budget_ms must be in (0, 600000], got {}",
                self.time_budget_ms
            ));
        }
        if self.iteration_cap == Some(0) {
            return bad("iteration_cap must be at least 1".into());
        }
        let mut hp = Hyperparameters::new(self.alpha, self.beta)
            .with_time_budget(Duration::from_secs_f64(self.time_budget_ms / 1000.0));
        if let Some(cap) = self.iteration_cap {
            hp = hp.with_iteration_cap(cap);
        }
        hp.validate()?;
        Ok(hp)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/recalc", post(recalc))
        .route("/sessions/{id}/refine", post(refine))
        .route("/sessions/{id}/status", get(status))
        .route("/sessions/{id}/embedding", get(embedding))
        .route("/sessions/{id}/explanations", get(explanations))
        .route("/sessions/{id}/explanations/{cluster}", get(explanation))
        .layer(DefaultBodyLimit::max(MAX_BODY))
        .with_state(state)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionSummary>)> {
    let Json(req) = body?;
    let linkage = req.linkage.unwrap_or(state.config.default_linkage);
    let epsilon = req.epsilon.unwrap_or(xclust_core::model::DEFAULT_EPSILON);
    let schema = req
        .schema
        .map(|v| SchemaSpec::from_json(&v.to_string()))
        .transpose()?;
    let id = uuid::Uuid::new_v4().to_string();
    let (data, warnings) = blocking(move || {
        let loaded = load_dataset(&req.data, schema.as_ref())?;
        let embedding = if req.embedding.trim().eq_ignore_ascii_case("pca") {
            pca_embedding(&loaded.dataset)?
        } else {
            load_embedding(&req.embedding, loaded.dataset.n())?
        };
        Ok((
            SessionData::new(id, loaded.dataset, embedding, linkage, epsilon)?,
            loaded.warnings,
        ))
    })
    .await?;
    let summary = SessionSummary {
        id: data.id.clone(),
        n: data.dataset.n(),
        m: data.dataset.m(),
        linkage,
        warnings,
    };
    log::info!("session {} created (n = {}, m = {})", summary.id, summary.n, summary.m);
    state.insert(data);
    Ok((StatusCode::CREATED, Json(summary)))
}

async fn search(
    state: Arc<AppState>,
    id: String,
    kind: SearchKind,
    body: Result<Json<SearchRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let entry = state.get(&id)?;
    let Json(req) = body?;
    let hp = req.hyperparameters()?;
    let job = state.prepare(&entry, kind, hp.clone())?;
    if hp.time_budget > BLOCKING_LIMIT {
        tokio::task::spawn_blocking(move || {
            if let Err(e) = job() {
                log::error!("search for session {id} failed: {e}");
            }
        });
        return Ok((StatusCode::ACCEPTED, Json(Accepted { running: true })).into_response());
    }
    let summary = blocking(job).await?;
    Ok(Json(summary).into_response())
}

async fn recalc(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<SearchRequest>, JsonRejection>,
) -> ApiResult<Response> {
    search(state, id, SearchKind::Recalc, body).await
}

async fn refine(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<SearchRequest>, JsonRejection>,
) -> ApiResult<Response> {
    search(state, id, SearchKind::Refine, body).await
}

async fn status(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<StatusView>> {
    let (running, iterations, elapsed) = state.get(&id)?.status();
    Ok(Json(StatusView {
        running,
        iterations,
        elapsed_ms: elapsed.as_secs_f64() * 1000.0,
    }))
}

async fn embedding(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<EmbeddingView>> {
    let session = state.get(&id)?.snapshot();
    let current = session.current.as_ref().map(|p| &p.solution);
    Ok(Json(EmbeddingView::new(&session.data, current)))
}

async fn explanations(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Vec<ExplanationView>>> {
    let session = state.get(&id)?.snapshot();
    let current = session.current.as_ref().ok_or(ApiError::NoSolution)?;
    Ok(Json(ExplanationView::all(&session.data, &current.solution)))
}

async fn explanation(
    State(state): State<Arc<AppState>>,
    Path((id, cluster)): Path<(String, usize)>,
) -> ApiResult<Json<ExplanationView>> {
    let session = state.get(&id)?.snapshot();
    let current = session.current.as_ref().ok_or(ApiError::NoSolution)?;
    let k = current.solution.k();
    if cluster >= k {
        return Err(ApiError::UnknownCluster { cluster, k });
    }
    Ok(Json(ExplanationView::new(&session.data, &current.solution, cluster)))
}
