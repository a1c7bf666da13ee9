//! Session registry and search jobs.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use xclust_core::{Hyperparameters, Linkage, Published, SearchBudget, Session, SessionData};

use crate::error::{ApiError, ApiResult};
use crate::views::SolutionSummary;

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub session_dir: Option<PathBuf>,
    pub default_linkage: Linkage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    Recalc,
    Refine,
}

#[derive(Debug, Default)]
struct Clock {
    started: Option<Instant>,
    last: Duration,
}

/// One session plus the bookkeeping for its (at most one) running search.
#[derive(Debug)]
pub struct SessionEntry {
    session: RwLock<Session>,
    running: AtomicBool,
    progress: Arc<AtomicUsize>,
    clock: Mutex<Clock>,
}

/// Clears the running flag when a search ends, including by panic.
struct RunGuard(Arc<SessionEntry>);

impl Drop for RunGuard {
    fn drop(&mut self) {
        let mut clock = self.0.clock.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = clock.started.take() {
            clock.last = t.elapsed();
        }
        self.0.running.store(false, Ordering::Release);
    }
}

impl SessionEntry {
    fn new(data: SessionData) -> Self {
        SessionEntry {
            session: RwLock::new(Session::new(data)),
            running: AtomicBool::new(false),
            progress: Arc::new(AtomicUsize::new(0)),
            clock: Mutex::new(Clock::default()),
        }
    }

    /// A consistent view of the session: readers never see a partially
    /// published solution.
    pub fn snapshot(&self) -> Session {
        self.session.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn status(&self) -> (bool, usize, Duration) {
        let running = self.running.load(Ordering::Acquire);
        let clock = self.clock.lock().unwrap_or_else(|e| e.into_inner());
        let elapsed = clock.started.map_or(clock.last, |t| t.elapsed());
        (running, self.progress.load(Ordering::Relaxed), elapsed)
    }

    fn try_start(self: &Arc<Self>) -> ApiResult<RunGuard> {
        self.running
            .compare_exchange(false, true, Ordering::AcqRel, Ordering::Acquire)
            .map_err(|_| ApiError::Busy)?;
        self.progress.store(0, Ordering::Relaxed);
        self.clock.lock().unwrap_or_else(|e| e.into_inner()).started = Some(Instant::now());
        Ok(RunGuard(self.clone()))
    }
}

#[derive(Debug, Default)]
pub struct AppState {
    pub config: Config,
    sessions: RwLock<HashMap<String, Arc<SessionEntry>>>,
}

impl AppState {
    pub fn new(config: Config) -> Self {
        AppState {
            config,
            sessions: RwLock::default(),
        }
    }

    pub fn insert(&self, data: SessionData) -> Arc<SessionEntry> {
        let id = data.id.clone();
        let entry = Arc::new(SessionEntry::new(data));
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(id, entry.clone());
        entry
    }

    pub fn get(&self, id: &str) -> ApiResult<Arc<SessionEntry>> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    /// Claims the session's search slot and returns the blocking job that
    /// runs the search and publishes its result.
    pub fn prepare(
        &self,
        entry: &Arc<SessionEntry>,
        kind: SearchKind,
        hp: Hyperparameters,
    ) -> ApiResult<impl FnOnce() -> ApiResult<SolutionSummary> + Send + 'static> {
        let guard = entry.try_start()?;
        let session = entry.snapshot();
        if kind == SearchKind::Refine && session.current.is_none() {
            return Err(ApiError::NoSolution);
        }
        let dir = self.config.session_dir.clone();
        let entry = entry.clone();
        Ok(move || {
            let _guard = guard;
            let budget = SearchBudget::from_hyperparameters(&hp).with_progress(entry.progress.clone());
            let published = match kind {
                SearchKind::Recalc => session.recalc(&hp, &budget)?,
                SearchKind::Refine => session.refine(&hp, &budget)?.ok_or(ApiError::NoSolution)?,
            };
            let summary = SolutionSummary::new(&published);
            publish(&entry, published, dir.as_deref());
            Ok(summary)
        })
    }
}

fn publish(entry: &SessionEntry, published: Published, dir: Option<&std::path::Path>) {
    let session = {
        let mut s = entry.session.write().unwrap_or_else(|e| e.into_inner());
        s.publish(published);
        s.clone()
    };
    if let Some(dir) = dir {
        let path = dir.join(format!("{}.json", session.data.id));
        if let Err(e) = session.document().save(&path) {
            log::warn!("could not write {}: {e}", path.display());
        }
    }
}
