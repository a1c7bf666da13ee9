//! Attribute selection, greedy dendrogram splitting under a budget, and
//! split/merge refinement of an existing solution.
//!
//! Candidate evaluation works on per-node sufficient statistics (point
//! count plus per-attribute sums and sums of squares, centred on the prior
//! mean) accumulated bottom-up once per dendrogram. The cluster of a
//! selected node is its subtree minus the subtrees of its maximal selected
//! descendants, so its statistics are a subtraction of a few node sums and
//! a split or merge touches only two clusters. Subtractions run in
//! increasing node-id order, which makes every score a function of the
//! selected node set alone, independent of how the search reached it.

mod select;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{clusters_from_cutset, CutLayout, CutSet, Dendrogram, NodeId};
use crate::info::{attribute_information, subjective_interestingness};
use crate::model::{
    AttributeStatistics, AttributeType, BiclusterPattern, ClusteringSolution, Dataset,
    Hyperparameters,
};
use crate::stats::{fit_cluster_statistics, statistic_from_sums, PriorModel};

use select::{greedy_select, Selection};

/// When a search must stop. Checked between candidate evaluations; an
/// evaluation that has started always completes.
#[derive(Debug, Clone, Default)]
pub struct SearchBudget {
    pub deadline: Option<Instant>,
    pub iterations_max: Option<usize>,
    progress: Option<Arc<AtomicUsize>>,
}

impl SearchBudget {
    /// An iteration cap, when set, replaces the wall-clock budget so that
    /// capped runs are reproducible.
    pub fn from_hyperparameters(hp: &Hyperparameters) -> Self {
        match hp.iteration_cap {
            Some(cap) => SearchBudget::iterations(cap),
            None => SearchBudget::time(hp.time_budget),
        }
    }

    pub fn time(limit: Duration) -> Self {
        SearchBudget {
            deadline: Some(Instant::now() + limit),
            ..Default::default()
        }
    }

    pub fn iterations(cap: usize) -> Self {
        SearchBudget {
            iterations_max: Some(cap),
            ..Default::default()
        }
    }

    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    /// Publishes the number of completed iterations to `counter`.
    pub fn with_progress(mut self, counter: Arc<AtomicUsize>) -> Self {
        self.progress = Some(counter);
        self
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn cap_reached(&self, completed: usize) -> bool {
        self.iterations_max.is_some_and(|cap| completed >= cap)
    }

    fn report(&self, completed: usize) {
        if let Some(p) = &self.progress {
            p.store(completed, Ordering::Relaxed);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "node", rename_all = "lowercase")]
pub enum Move {
    Split(NodeId),
    Merge(NodeId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub si: f64,
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
    /// The move that produced this state; `None` for the starting state.
    pub action: Option<Move>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SearchTrace {
    pub records: Vec<IterationRecord>,
    /// The deadline passed before the search ran out of moves.
    pub expired: bool,
}

impl SearchTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }
}

mod duration_ms {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1e3)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        Ok(Duration::from_secs_f64(ms.max(0.0) / 1e3))
    }
}

/// Per-node sufficient statistics: `count` is the subtree size, sums are
/// over values centred on the prior mean (raw 0/1 for booleans).
#[derive(Debug, Clone)]
pub struct NodeMoments {
    m: usize,
    sums: Vec<f64>,
    sum_sqs: Vec<f64>,
}

impl NodeMoments {
    pub fn new(dataset: &Dataset, prior: &PriorModel, d: &Dendrogram) -> Result<Self> {
        check_inputs(dataset, prior, d)?;
        let m = dataset.m();
        let mut sums = vec![0.0; d.len() * m];
        let mut sum_sqs = vec![0.0; d.len() * m];
        let centres: Vec<f64> = (0..m).map(|j| prior.centre(j)).collect();
        for node in d.nodes() {
            let at = node.id * m;
            match (node.point, node.children()) {
                (Some(i), _) => {
                    for (j, (&v, &c)) in dataset.row(i).iter().zip(&centres).enumerate() {
                        let x = v - c;
                        sums[at + j] = x;
                        sum_sqs[at + j] = x * x;
                    }
                }
                (None, Some((l, r))) => {
                    for j in 0..m {
                        sums[at + j] = sums[l * m + j] + sums[r * m + j];
                        sum_sqs[at + j] = sum_sqs[l * m + j] + sum_sqs[r * m + j];
                    }
                }
                (None, None) => unreachable!("internal node without children"),
            }
        }
        Ok(NodeMoments { m, sums, sum_sqs })
    }

    fn sums(&self, node: NodeId) -> (&[f64], &[f64]) {
        let r = node * self.m..(node + 1) * self.m;
        (&self.sums[r.clone()], &self.sum_sqs[r])
    }
}

fn check_inputs(dataset: &Dataset, prior: &PriorModel, d: &Dendrogram) -> Result<()> {
    if prior.n() != dataset.n() || prior.m() != dataset.m() {
        return Err(Error::InvalidDataset(format!(
            "prior was fitted on {}×{} data, dataset is {}×{}",
            prior.n(),
            prior.m(),
            dataset.n(),
            dataset.m()
        )));
    }
    if d.n_leaves() != dataset.n() {
        return Err(Error::InvalidDataset(format!(
            "dendrogram has {} leaves, dataset has {} points",
            d.n_leaves(),
            dataset.n()
        )));
    }
    Ok(())
}

/// Statistics and per-attribute information of one cluster.
#[derive(Debug, Clone)]
struct ClusterTable {
    node: NodeId,
    count: usize,
    stats: Vec<AttributeStatistics>,
    info: Vec<f64>,
}

/// A cut-set with the cached tables of its clusters.
#[derive(Debug, Clone)]
struct State {
    cut: CutSet,
    /// Maximal selected strict descendants of each selected node, sorted.
    maximal: BTreeMap<NodeId, Vec<NodeId>>,
    tables: BTreeMap<NodeId, Arc<ClusterTable>>,
}

/// Everything a search needs that does not depend on hyperparameters.
pub struct SearchContext<'a> {
    dataset: &'a Dataset,
    prior: &'a PriorModel,
    dendrogram: &'a Dendrogram,
    moments: Cow<'a, NodeMoments>,
    kinds: Vec<AttributeType>,
}

impl<'a> SearchContext<'a> {
    pub fn new(dataset: &'a Dataset, prior: &'a PriorModel, dendrogram: &'a Dendrogram) -> Result<Self> {
        let moments = NodeMoments::new(dataset, prior, dendrogram)?;
        Ok(Self::assemble(dataset, prior, dendrogram, Cow::Owned(moments)))
    }

    /// Reuses moments computed earlier for the same inputs.
    pub fn with_moments(
        dataset: &'a Dataset,
        prior: &'a PriorModel,
        dendrogram: &'a Dendrogram,
        moments: &'a NodeMoments,
    ) -> Result<Self> {
        check_inputs(dataset, prior, dendrogram)?;
        if moments.m != dataset.m() || moments.sums.len() != dendrogram.len() * dataset.m() {
            return Err(Error::InvalidDataset("node moments do not match the inputs".into()));
        }
        Ok(Self::assemble(dataset, prior, dendrogram, Cow::Borrowed(moments)))
    }

    fn assemble(
        dataset: &'a Dataset,
        prior: &'a PriorModel,
        dendrogram: &'a Dendrogram,
        moments: Cow<'a, NodeMoments>,
    ) -> Self {
        let kinds = dataset.schema().iter().map(|a| a.kind).collect();
        SearchContext {
            dataset,
            prior,
            dendrogram,
            moments,
            kinds,
        }
    }

    pub fn dataset(&self) -> &Dataset {
        self.dataset
    }

    pub fn prior(&self) -> &PriorModel {
        self.prior
    }

    pub fn dendrogram(&self) -> &Dendrogram {
        self.dendrogram
    }

    /// Table of the cluster `subtree(node) \ ⋃ subtree(excluded)`.
    fn table(&self, node: NodeId, excluded: &[NodeId]) -> ClusterTable {
        let d = self.dendrogram;
        let (s, q) = self.moments.sums(node);
        let mut sum = s.to_vec();
        let mut sum_sq = q.to_vec();
        let mut count = d.node(node).size;
        for &w in excluded {
            let (ws, wq) = self.moments.sums(w);
            for j in 0..sum.len() {
                sum[j] -= ws[j];
                sum_sq[j] -= wq[j];
            }
            count -= d.node(w).size;
        }
        let stats: Vec<AttributeStatistics> = (0..sum.len())
            .map(|j| statistic_from_sums(self.prior, j, count, sum[j], sum_sq[j]))
            .collect();
        let info = stats
            .iter()
            .enumerate()
            .map(|(j, s)| attribute_information(count, s, self.prior.get(j)))
            .collect();
        ClusterTable {
            node,
            count,
            stats,
            info,
        }
    }

    fn state(&self, cut: &CutSet) -> Result<State> {
        let d = self.dendrogram;
        let cut = CutSet::from_nodes(d, cut.nodes().to_vec())?;
        let layout = CutLayout::new(d, &cut);
        let mut maximal: BTreeMap<NodeId, Vec<NodeId>> =
            cut.nodes().iter().map(|&v| (v, Vec::new())).collect();
        for &w in cut.nodes() {
            if let Some(p) = d.parent(w) {
                maximal.get_mut(&layout.host[p]).unwrap().push(w);
            }
        }
        for list in maximal.values_mut() {
            list.sort_unstable();
        }
        let tables = maximal
            .iter()
            .map(|(&v, ex)| (v, Arc::new(self.table(v, ex))))
            .collect();
        Ok(State {
            cut,
            maximal,
            tables,
        })
    }

    fn select(&self, tables: &[&ClusterTable], hp: &Hyperparameters) -> Selection {
        let infos: Vec<&[f64]> = tables.iter().map(|t| t.info.as_slice()).collect();
        greedy_select(&infos, &self.kinds, hp.alpha, hp.beta)
    }

    fn score_state(&self, state: &State, hp: &Hyperparameters) -> Selection {
        let tables: Vec<&ClusterTable> = state.tables.values().map(|t| t.as_ref()).collect();
        self.select(&tables, hp)
    }

    /// Tables that change when `v` (currently hosted by `host`) is selected.
    fn split_tables(&self, state: &State, host: NodeId, v: NodeId) -> (ClusterTable, ClusterTable, Vec<NodeId>, Vec<NodeId>) {
        let d = self.dendrogram;
        let (inside, mut outside): (Vec<NodeId>, Vec<NodeId>) = state.maximal[&host]
            .iter()
            .partition(|&&w| d.contains(v, w));
        let pos = outside.partition_point(|&w| w < v);
        outside.insert(pos, v);
        let new_table = self.table(v, &inside);
        let host_table = self.table(host, &outside);
        (new_table, host_table, inside, outside)
    }

    fn split_score(&self, state: &State, host: NodeId, v: NodeId, hp: &Hyperparameters) -> f64 {
        let (new_table, host_table, _, _) = self.split_tables(state, host, v);
        let mut tables: Vec<&ClusterTable> = state
            .tables
            .values()
            .map(|t| if t.node == host { &host_table } else { t.as_ref() })
            .collect();
        let pos = tables.partition_point(|t| t.node < v);
        tables.insert(pos, &new_table);
        self.select(&tables, hp).score.si
    }

    fn apply_split(&self, state: &State, v: NodeId) -> State {
        let host = self.merge_host(state, v);
        let (new_table, host_table, inside, outside) = self.split_tables(state, host, v);
        let mut next = state.clone();
        next.cut = state.cut.with_split(v);
        next.maximal.insert(host, outside);
        next.maximal.insert(v, inside);
        next.tables.insert(host, Arc::new(host_table));
        next.tables.insert(v, Arc::new(new_table));
        next
    }

    /// Lowest selected ancestor of `v`, excluding `v` itself.
    fn merge_host(&self, state: &State, v: NodeId) -> NodeId {
        let mut cur = self.dendrogram.parent(v);
        while let Some(p) = cur {
            if state.tables.contains_key(&p) {
                return p;
            }
            cur = self.dendrogram.parent(p);
        }
        self.dendrogram.root()
    }

    fn merge_tables(&self, state: &State, w: NodeId) -> (NodeId, ClusterTable, Vec<NodeId>) {
        let host = self.merge_host(state, w);
        let mut excluded: Vec<NodeId> = state.maximal[&host]
            .iter()
            .copied()
            .filter(|&x| x != w)
            .chain(state.maximal[&w].iter().copied())
            .collect();
        excluded.sort_unstable();
        let table = self.table(host, &excluded);
        (host, table, excluded)
    }

    fn merge_score(&self, state: &State, w: NodeId, hp: &Hyperparameters) -> f64 {
        let (host, host_table, _) = self.merge_tables(state, w);
        let tables: Vec<&ClusterTable> = state
            .tables
            .values()
            .filter(|t| t.node != w)
            .map(|t| if t.node == host { &host_table } else { t.as_ref() })
            .collect();
        self.select(&tables, hp).score.si
    }

    fn apply_merge(&self, state: &State, w: NodeId) -> State {
        let (host, host_table, excluded) = self.merge_tables(state, w);
        let mut next = state.clone();
        next.cut = state.cut.without(w);
        next.maximal.remove(&w);
        next.tables.remove(&w);
        next.maximal.insert(host, excluded);
        next.tables.insert(host, Arc::new(host_table));
        next
    }

    fn solution(&self, state: &State, hp: &Hyperparameters, iterations: usize) -> Result<ClusteringSolution> {
        let selection = self.score_state(state, hp);
        let rank: BTreeMap<NodeId, usize> = state
            .tables
            .keys()
            .enumerate()
            .map(|(idx, &v)| (v, idx))
            .collect();
        let clusters = clusters_from_cutset(self.dendrogram, &state.cut)?;
        let patterns = state
            .cut
            .nodes()
            .iter()
            .zip(clusters)
            .map(|(v, points)| {
                let table = &state.tables[v];
                debug_assert_eq!(table.count, points.len());
                let attrs = selection.attributes[rank[v]].clone();
                let stats = attrs.iter().map(|&j| table.stats[j]).collect();
                BiclusterPattern::new(points, attrs, stats)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClusteringSolution {
            cut_set: state.cut.clone(),
            patterns,
            total_information: selection.score.information,
            complexity: selection.score.complexity,
            si: selection.score.si,
            iterations_completed: iterations,
        })
    }

    /// Scores a fixed cut-set.
    pub fn evaluate(&self, cut: &CutSet, hp: &Hyperparameters) -> Result<ClusteringSolution> {
        hp.validate()?;
        let state = self.state(cut)?;
        self.solution(&state, hp, 0)
    }

    /// Evaluates `f` on every candidate in parallel. `None` means the
    /// budget ran out before all candidates were evaluated.
    fn evaluate_all<T: Send + Sync>(
        &self,
        candidates: &[T],
        budget: &SearchBudget,
        f: impl Fn(&T) -> f64 + Sync,
    ) -> Option<Vec<f64>> {
        candidates
            .par_iter()
            .map(|c| if budget.expired() { None } else { Some(f(c)) })
            .collect()
    }

    /// Starts from a single cluster and repeatedly applies the best split
    /// of the previous iteration's cut-set until the budget expires or no
    /// split is possible. Returns the best iteration.
    pub fn greedy_search(
        &self,
        hp: &Hyperparameters,
        budget: &SearchBudget,
    ) -> Result<(ClusteringSolution, SearchTrace)> {
        hp.validate()?;
        let start = Instant::now();
        let d = self.dendrogram;
        let mut state = self.state(&CutSet::root(d))?;
        let mut trace = SearchTrace::default();
        let si = self.score_state(&state, hp).score.si;
        trace.records.push(IterationRecord {
            k: 1,
            si,
            elapsed: start.elapsed(),
            action: None,
        });
        budget.report(1);
        let mut best = (state.clone(), si);

        loop {
            if budget.cap_reached(trace.records.len()) {
                break;
            }
            if budget.expired() {
                trace.expired = true;
                break;
            }
            let layout = CutLayout::new(d, &state.cut);
            let min = hp.min_cluster_size.max(1);
            let candidates: Vec<(NodeId, NodeId)> = (0..d.len())
                .filter(|&v| {
                    !layout.selected[v]
                        && layout.own[v] >= min
                        && layout.own[layout.host[v]] - layout.own[v] >= min
                })
                .map(|v| (v, layout.host[v]))
                .collect();
            if candidates.is_empty() {
                break;
            }
            let Some(scores) =
                self.evaluate_all(&candidates, budget, |&(v, host)| self.split_score(&state, host, v, hp))
            else {
                trace.expired = true;
                break;
            };
            // candidates are in increasing id order, so the first maximum wins ties
            let (idx, &si) = scores
                .iter()
                .enumerate()
                .fold(None, |acc: Option<(usize, &f64)>, (i, s)| match acc {
                    Some((_, b)) if *s <= *b => acc,
                    _ => Some((i, s)),
                })
                .expect("non-empty candidates");
            let v = candidates[idx].0;
            state = self.apply_split(&state, v);
            trace.records.push(IterationRecord {
                k: state.cut.len(),
                si,
                elapsed: start.elapsed(),
                action: Some(Move::Split(v)),
            });
            budget.report(trace.records.len());
            if si > best.1 {
                best = (state.clone(), si);
            }
        }
        let solution = self.solution(&best.0, hp, trace.records.len())?;
        Ok((solution, trace))
    }

    /// Hill-climbs from `previous` under `hp`: each step applies the best
    /// single split or merge if it strictly improves SI (a merge wins ties
    /// against a split, smaller node ids win otherwise).
    pub fn refine(
        &self,
        previous: &ClusteringSolution,
        hp: &Hyperparameters,
        budget: &SearchBudget,
    ) -> Result<(ClusteringSolution, SearchTrace)> {
        hp.validate()?;
        let start = Instant::now();
        let d = self.dendrogram;
        let cut = CutSet::from_nodes(d, previous.cut_set.nodes().to_vec())
            .map_err(|e| Error::SolutionMismatch(e.to_string()))?;
        let clusters = clusters_from_cutset(d, &cut)?;
        if clusters.len() != previous.patterns.len()
            || clusters
                .iter()
                .zip(&previous.patterns)
                .any(|(c, p)| c.as_slice() != p.points())
        {
            return Err(Error::SolutionMismatch(
                "patterns do not match the clusters of the cut-set".into(),
            ));
        }

        let mut state = self.state(&cut)?;
        let mut current = self.score_state(&state, hp).score.si;
        let mut trace = SearchTrace::default();
        trace.records.push(IterationRecord {
            k: state.cut.len(),
            si: current,
            elapsed: start.elapsed(),
            action: None,
        });
        budget.report(1);

        loop {
            if budget.cap_reached(trace.records.len()) {
                break;
            }
            if budget.expired() {
                trace.expired = true;
                break;
            }
            let layout = CutLayout::new(d, &state.cut);
            let min = hp.min_cluster_size.max(1);
            let mut moves: Vec<(Move, NodeId)> = state
                .cut
                .nodes()
                .iter()
                .filter(|&&w| w != d.root())
                .map(|&w| (Move::Merge(w), w))
                .collect();
            moves.sort_by_key(|m| m.1);
            moves.extend(
                (0..d.len())
                    .filter(|&v| {
                        !layout.selected[v]
                            && layout.own[v] >= min
                            && layout.own[layout.host[v]] - layout.own[v] >= min
                    })
                    .map(|v| (Move::Split(v), layout.host[v])),
            );
            if moves.is_empty() {
                break;
            }
            let Some(scores) = self.evaluate_all(&moves, budget, |&(mv, host)| match mv {
                Move::Split(v) => self.split_score(&state, host, v, hp),
                Move::Merge(w) => self.merge_score(&state, w, hp),
            }) else {
                trace.expired = true;
                break;
            };
            // merges come first, then splits, each by increasing id
            let mut best: Option<(usize, f64)> = None;
            for (i, &s) in scores.iter().enumerate() {
                if s > current && best.is_none_or(|(_, b)| s > b) {
                    best = Some((i, s));
                }
            }
            let Some((i, si)) = best else {
                break;
            };
            let mv = moves[i].0;
            state = match mv {
                Move::Split(v) => self.apply_split(&state, v),
                Move::Merge(w) => self.apply_merge(&state, w),
            };
            current = si;
            trace.records.push(IterationRecord {
                k: state.cut.len(),
                si,
                elapsed: start.elapsed(),
                action: Some(mv),
            });
            budget.report(trace.records.len());
        }
        let solution = self.solution(&state, hp, trace.records.len())?;
        Ok((solution, trace))
    }
}

fn check_partition(partition: &[Vec<usize>], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for (c, cluster) in partition.iter().enumerate() {
        if cluster.is_empty() {
            return Err(Error::EmptyCluster);
        }
        for &i in cluster {
            if i >= n {
                return Err(Error::PointOutOfRange { index: i, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPartition(format!(
                    "point {i} appears again in cluster {c}"
                )));
            }
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(Error::NotAPartition(format!("point {i} is not covered")));
    }
    Ok(())
}

/// Chooses explaining attributes for every cluster of `partition`,
/// computing cluster statistics directly from the data points.
pub fn select_attributes(
    partition: &[Vec<usize>],
    dataset: &Dataset,
    prior: &PriorModel,
    hp: &Hyperparameters,
) -> Result<Vec<BiclusterPattern>> {
    hp.validate()?;
    check_partition(partition, dataset.n())?;
    let all: Vec<usize> = (0..dataset.m()).collect();
    let tables = partition
        .iter()
        .map(|points| {
            let stats = fit_cluster_statistics(dataset, prior, points, &all)?;
            let info: Vec<f64> = stats
                .iter()
                .enumerate()
                .map(|(j, s)| attribute_information(points.len(), s, prior.get(j)))
                .collect();
            Ok((stats, info))
        })
        .collect::<Result<Vec<_>>>()?;
    let kinds: Vec<AttributeType> = dataset.schema().iter().map(|a| a.kind).collect();
    let infos: Vec<&[f64]> = tables.iter().map(|(_, i)| i.as_slice()).collect();
    let selection = greedy_select(&infos, &kinds, hp.alpha, hp.beta);
    partition
        .iter()
        .zip(tables)
        .zip(selection.attributes)
        .map(|((points, (stats, _)), attrs)| {
            let s = attrs.iter().map(|&j| stats[j]).collect();
            BiclusterPattern::new(points.clone(), attrs, s)
        })
        .collect()
}

pub fn evaluate_cutset(
    cutset: &CutSet,
    d: &Dendrogram,
    dataset: &Dataset,
    prior: &PriorModel,
    hp: &Hyperparameters,
) -> Result<ClusteringSolution> {
    SearchContext::new(dataset, prior, d)?.evaluate(cutset, hp)
}

pub fn greedy_search(
    d: &Dendrogram,
    dataset: &Dataset,
    prior: &PriorModel,
    hp: &Hyperparameters,
) -> Result<(ClusteringSolution, SearchTrace)> {
    let budget = SearchBudget::from_hyperparameters(hp);
    SearchContext::new(dataset, prior, d)?.greedy_search(hp, &budget)
}

pub fn refine(
    previous: &ClusteringSolution,
    d: &Dendrogram,
    dataset: &Dataset,
    prior: &PriorModel,
    hp_new: &Hyperparameters,
) -> Result<(ClusteringSolution, SearchTrace)> {
    let budget = SearchBudget::from_hyperparameters(hp_new);
    SearchContext::new(dataset, prior, d)?.refine(previous, hp_new, &budget)
}

/// Re-scores a solution's patterns from scratch; used to check documents
/// and solutions produced elsewhere.
pub fn rescore(
    solution: &ClusteringSolution,
    prior: &PriorModel,
    hp: &Hyperparameters,
) -> Result<crate::info::Score> {
    subjective_interestingness(&solution.patterns, prior, hp)
}

#[cfg(test)]
mod tests;
