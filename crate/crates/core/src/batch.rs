//! Hyperparameter sweeps and budget benchmarks.

use std::time::Duration;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::hierarchy::{build_dendrogram, Dendrogram};
use crate::model::{ClusteringSolution, Dataset, Embedding, Hyperparameters};
use crate::search::{SearchBudget, SearchContext, SearchTrace};
use crate::stats::{fit_prior, PriorModel};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub k: usize,
    pub attributes: usize,
    pub information: f64,
    pub si: f64,
    pub iterations: usize,
}

impl SweepRow {
    pub fn new(alpha: f64, beta: f64, s: &ClusteringSolution) -> Self {
        SweepRow {
            alpha,
            beta,
            k: s.k(),
            attributes: s.attribute_count(),
            information: s.total_information,
            si: s.si,
            iterations: s.iterations_completed,
        }
    }
}

/// Runs a greedy search for every `(alpha, beta)` in the grid, sharing one
/// dendrogram and its node statistics. Rows are in grid order (alpha
/// outer, beta inner).
pub fn sweep(
    dataset: &Dataset,
    prior: &PriorModel,
    d: &Dendrogram,
    alphas: &[f64],
    betas: &[f64],
    base: &Hyperparameters,
) -> Result<Vec<SweepRow>> {
    let ctx = SearchContext::new(dataset, prior, d)?;
    let grid: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();
    grid.par_iter()
        .map(|&(alpha, beta)| {
            let hp = Hyperparameters {
                alpha,
                beta,
                ..base.clone()
            };
            let (s, _) = ctx.greedy_search(&hp, &SearchBudget::from_hyperparameters(&hp))?;
            Ok(SweepRow::new(alpha, beta, &s))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub time_limit_ms: u64,
    pub iterations: usize,
    pub expired: bool,
}

/// A seeded random subset of `size` points, kept in their original order.
pub fn subsample(
    dataset: &Dataset,
    embedding: &Embedding,
    size: usize,
    seed: u64,
) -> Result<(Dataset, Embedding)> {
    if size >= dataset.n() {
        return Ok((dataset.clone(), embedding.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, dataset.n(), size).into_vec();
    idx.sort_unstable();
    Ok((dataset.subset(&idx)?, embedding.subset(&idx)?))
}

/// Iterations reached within each time limit, for each subsample size.
/// Runs are sequential so that they do not compete for cores.
pub fn bench(
    dataset: &Dataset,
    embedding: &Embedding,
    sizes: &[usize],
    limits: &[Duration],
    hp: &Hyperparameters,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let (data, emb) = subsample(dataset, embedding, size, seed)?;
        let prior = fit_prior(&data, hp.epsilon)?;
        let d = build_dendrogram(&emb, hp.linkage)?;
        let ctx = SearchContext::new(&data, &prior, &d)?;
        for &limit in limits {
            let trace = bench_one(&ctx, hp, limit)?;
            rows.push(BenchRow {
                n: data.n(),
                m: data.m(),
                time_limit_ms: limit.as_millis() as u64,
                iterations: trace.iterations(),
                expired: trace.expired,
            });
        }
    }
    Ok(rows)
}

pub fn bench_one(ctx: &SearchContext<'_>, hp: &Hyperparameters, limit: Duration) -> Result<SearchTrace> {
    let (_, trace) = ctx.greedy_search(hp, &SearchBudget::time(limit))?;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{planted_blobs, PlantedConfig};

    #[test]
    fn sweep_rows_match_standalone_runs() {
        let f = planted_blobs(&PlantedConfig {
            points_per_blob: 20,
            ..Default::default()
        });
        let prior = fit_prior(&f.dataset, 1e-4).unwrap();
        let d = build_dendrogram(&f.embedding, Default::default()).unwrap();
        let base = Hyperparameters::default().with_iteration_cap(6);
        let rows = sweep(&f.dataset, &prior, &d, &[0.0, 250.0], &[1.2, 1.6], &base).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[1].alpha, rows[1].beta), (0.0, 1.6));
        let hp = Hyperparameters {
            alpha: 250.0,
            beta: 1.2,
            ..base
        };
        let (s, _) = crate::search::greedy_search(&d, &f.dataset, &prior, &hp).unwrap();
        assert_eq!(rows[2], SweepRow::new(250.0, 1.2, &s));
    }

    #[test]
    fn subsample_keeps_order() {
        let f = planted_blobs(&PlantedConfig::default());
        let (d, e) = subsample(&f.dataset, &f.embedding, 50, 3).unwrap();
        assert_eq!(d.n(), 50);
        assert_eq!(e.n(), 50);
        let (d2, _) = subsample(&f.dataset, &f.embedding, 50, 3).unwrap();
        assert_eq!(d.fingerprint(), d2.fingerprint());
    }
}
