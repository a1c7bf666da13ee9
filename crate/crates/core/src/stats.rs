//! Maximum-likelihood statistics: the background prior fitted on the full
//! data and the per-cluster statistics that patterns report.
//!
//! Both use the same estimator. Real attributes get the sample mean and the
//! population variance, floored at `ε_j = epsilon × var_j` (never below
//! [`MIN_VARIANCE`]), where `var_j` is the variance over the full data.
//! Boolean frequencies are clamped to `[1/(2c), 1 − 1/(2c)]` for a point
//! count `c`. A point set covering the whole dataset reproduces the prior
//! exactly, so its information content is exactly zero.

use crate::error::{Error, Result};
use crate::model::{AttributeStatistics, AttributeType, Dataset};

/// Absolute lower bound on every fitted variance.
pub const MIN_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PriorModel {
    statistics: Vec<AttributeStatistics>,
    variance_floors: Vec<f64>,
    epsilon: f64,
    n: usize,
}

impl PriorModel {
    pub fn statistics(&self) -> &[AttributeStatistics] {
        &self.statistics
    }

    pub fn get(&self, j: usize) -> &AttributeStatistics {
        &self.statistics[j]
    }

    /// Variance floor `ε_j` of attribute `j`.
    pub fn variance_floor(&self, j: usize) -> f64 {
        self.variance_floors[j]
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Number of points the prior was fitted on.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Lower clamp bound for the prior's boolean frequencies.
    pub fn clamp(&self) -> f64 {
        0.5 / self.n as f64
    }

    pub fn m(&self) -> usize {
        self.statistics.len()
    }

    /// Mean used to centre real attributes, 0 for booleans.
    pub(crate) fn centre(&self, j: usize) -> f64 {
        match self.statistics[j] {
            AttributeStatistics::Real { mean, .. } => mean,
            AttributeStatistics::Boolean { .. } => 0.0,
        }
    }
}

/// Clamp a frequency estimated from `count` points into `[1/(2c), 1 − 1/(2c)]`.
pub(crate) fn clamp_frequency(frequency: f64, count: usize) -> f64 {
    let lo = 0.5 / count as f64;
    frequency.clamp(lo, 1.0 - lo)
}

fn real_statistic(mean: f64, variance: f64, floor: f64) -> AttributeStatistics {
    AttributeStatistics::Real {
        mean,
        stdev: variance.max(floor).sqrt(),
    }
}

fn mean_and_variance(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (count, sum) = values
        .clone()
        .fold((0usize, 0.0), |(c, s), v| (c + 1, s + v));
    let mean = sum / count as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / count as f64)
}

pub fn fit_prior(dataset: &Dataset, epsilon: f64) -> Result<PriorModel> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidHyperparameters(format!(
            "epsilon must be finite and > 0, got {epsilon}"
        )));
    }
    let n = dataset.n();
    let mut statistics = Vec::with_capacity(dataset.m());
    let mut variance_floors = Vec::with_capacity(dataset.m());
    for j in 0..dataset.m() {
        match dataset.attribute(j).kind {
            AttributeType::Real => {
                let (mean, variance) = mean_and_variance(dataset.column(j));
                let floor = (epsilon * variance).max(MIN_VARIANCE);
                variance_floors.push(floor);
                statistics.push(real_statistic(mean, variance, floor));
            }
            AttributeType::Boolean => {
                let ones: f64 = dataset.column(j).sum();
                variance_floors.push(MIN_VARIANCE);
                statistics.push(AttributeStatistics::Boolean {
                    frequency: clamp_frequency(ones / n as f64, n),
                });
            }
        }
    }
    Ok(PriorModel {
        statistics,
        variance_floors,
        epsilon,
        n,
    })
}

/// Statistics of `attributes` over `points`, using the prior's variance
/// floors and a clamp bound derived from `|points|`.
pub fn fit_cluster_statistics(
    dataset: &Dataset,
    prior: &PriorModel,
    points: &[usize],
    attributes: &[usize],
) -> Result<Vec<AttributeStatistics>> {
    if points.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let n = dataset.n();
    let mut seen = vec![false; n];
    for &i in points {
        if i >= n {
            return Err(Error::PointOutOfRange { index: i, n });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    if let Some(&j) = attributes.iter().find(|&&j| j >= dataset.m()) {
        return Err(Error::AttributeOutOfRange {
            index: j,
            m: dataset.m(),
        });
    }
    if points.len() == prior.n() {
        return Ok(attributes.iter().map(|&j| *prior.get(j)).collect());
    }

    let count = points.len();
    let stats = attributes
        .iter()
        .map(|&j| {
            let column = points.iter().map(|&i| dataset.value(i, j));
            match dataset.attribute(j).kind {
                AttributeType::Real => {
                    let (mean, variance) = mean_and_variance(column);
                    real_statistic(mean, variance, prior.variance_floor(j))
                }
                AttributeType::Boolean => {
                    let ones: f64 = column.sum();
                    AttributeStatistics::Boolean {
                        frequency: clamp_frequency(ones / count as f64, count),
                    }
                }
            }
        })
        .collect();
    Ok(stats)
}

/// Statistics of attribute `j` from accumulated sums over `count` points.
///
/// `sum` and `sum_sq` are taken over values centred on the prior mean (raw
/// 0/1 values for booleans).
pub(crate) fn statistic_from_sums(
    prior: &PriorModel,
    j: usize,
    count: usize,
    sum: f64,
    sum_sq: f64,
) -> AttributeStatistics {
    if count == prior.n() {
        return *prior.get(j);
    }
    let c = count as f64;
    match prior.get(j) {
        AttributeStatistics::Boolean { .. } => AttributeStatistics::Boolean {
            frequency: clamp_frequency(sum / c, count),
        },
        AttributeStatistics::Real { mean, .. } => {
            let shift = sum / c;
            let variance = (sum_sq / c - shift * shift).max(0.0);
            real_statistic(mean + shift, variance, prior.variance_floor(j))
        }
    }
}
