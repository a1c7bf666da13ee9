//! KL divergences, information content, description complexity and
//! subjective interestingness. All quantities are in bits.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttributeStatistics, BiclusterPattern, Hyperparameters};
use crate::stats::PriorModel;

/// Information, complexity and their ratio for a set of patterns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub information: f64,
    pub complexity: f64,
    pub si: f64,
}

impl Score {
    pub fn new(information: f64, complexity: f64) -> Self {
        let si = if information == 0.0 {
            0.0
        } else {
            information / complexity
        };
        Score {
            information,
            complexity,
            si,
        }
    }
}

#[inline]
pub(crate) fn kl_bernoulli_unchecked(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    let kl = p * (p / q).log2() + (1.0 - p) * ((1.0 - p) / (1.0 - q)).log2();
    kl.max(0.0)
}

#[inline]
pub(crate) fn kl_gaussian_unchecked(mean1: f64, stdev1: f64, mean0: f64, stdev0: f64) -> f64 {
    if mean1 == mean0 && stdev1 == stdev0 {
        return 0.0;
    }
    let ratio = stdev1 / stdev0;
    let shift = (mean1 - mean0) / stdev0;
    let nats = -ratio.ln() + 0.5 * (ratio * ratio + shift * shift) - 0.5;
    (nats / LN_2).max(0.0)
}

/// `KL(Bernoulli(p) ‖ Bernoulli(q))` in bits.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64> {
    for x in [p, q] {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidFrequency(x));
        }
    }
    Ok(kl_bernoulli_unchecked(p, q))
}

/// `KL(N(mean1, stdev1²) ‖ N(mean0, stdev0²))` in bits.
pub fn kl_gaussian(mean1: f64, stdev1: f64, mean0: f64, stdev0: f64) -> Result<f64> {
    for s in [stdev1, stdev0] {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidStdev(s));
        }
    }
    if !(mean1.is_finite() && mean0.is_finite()) {
        return Err(Error::InvalidDataset("non-finite mean".into()));
    }
    Ok(kl_gaussian_unchecked(mean1, stdev1, mean0, stdev0))
}

/// Divergence of the maximum-entropy model of `cluster` from that of `prior`.
pub fn kl_statistics(cluster: &AttributeStatistics, prior: &AttributeStatistics) -> Result<f64> {
    match (*cluster, *prior) {
        (
            AttributeStatistics::Boolean { frequency: p },
            AttributeStatistics::Boolean { frequency: q },
        ) => kl_bernoulli(p, q),
        (
            AttributeStatistics::Real { mean: m1, stdev: s1 },
            AttributeStatistics::Real { mean: m0, stdev: s0 },
        ) => kl_gaussian(m1, s1, m0, s0),
        _ => Err(Error::TypeMismatch),
    }
}

#[inline]
pub(crate) fn kl_statistics_unchecked(
    cluster: &AttributeStatistics,
    prior: &AttributeStatistics,
) -> f64 {
    match (*cluster, *prior) {
        (
            AttributeStatistics::Boolean { frequency: p },
            AttributeStatistics::Boolean { frequency: q },
        ) => kl_bernoulli_unchecked(p, q),
        (
            AttributeStatistics::Real { mean: m1, stdev: s1 },
            AttributeStatistics::Real { mean: m0, stdev: s0 },
        ) => kl_gaussian_unchecked(m1, s1, m0, s0),
        _ => unreachable!("statistics type differs from prior type"),
    }
}

/// Information a cluster of `count` points carries about one attribute.
#[inline]
pub fn attribute_information(
    count: usize,
    cluster: &AttributeStatistics,
    prior: &AttributeStatistics,
) -> f64 {
    count as f64 * kl_statistics_unchecked(cluster, prior)
}

/// Order-independent sum: the terms are sorted before accumulation, so the
/// result depends only on the multiset of terms.
pub(crate) fn canonical_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn check_pattern(pattern: &BiclusterPattern, prior: &PriorModel) -> Result<()> {
    for (&j, s) in pattern.attributes().iter().zip(pattern.statistics()) {
        if j >= prior.m() {
            return Err(Error::AttributeOutOfRange {
                index: j,
                m: prior.m(),
            });
        }
        kl_statistics(s, prior.get(j))?;
    }
    if let Some(&i) = pattern.points().last() {
        if i >= prior.n() {
            return Err(Error::PointOutOfRange {
                index: i,
                n: prior.n(),
            });
        }
    }
    Ok(())
}

fn information_terms<'a>(
    patterns: impl IntoIterator<Item = &'a BiclusterPattern>,
    prior: &PriorModel,
) -> Vec<f64> {
    patterns
        .into_iter()
        .flat_map(|p| {
            p.attributes()
                .iter()
                .zip(p.statistics())
                .map(move |(&j, s)| attribute_information(p.size(), s, prior.get(j)))
        })
        .collect()
}

/// `|D| × Σ_{j∈A} KL(S_j ‖ prior_j)`: the per-point divergence does not
/// depend on the point, so the sum over `D` is a multiplication.
pub fn pattern_information(pattern: &BiclusterPattern, prior: &PriorModel) -> Result<f64> {
    check_pattern(pattern, prior)?;
    Ok(canonical_sum(information_terms([pattern], prior)))
}

/// `α + T^β` for a total statistic count `T`.
pub fn complexity_from_count(total_statistics: usize, alpha: f64, beta: f64) -> f64 {
    if total_statistics == 0 {
        alpha
    } else {
        alpha + (total_statistics as f64).powf(beta)
    }
}

pub fn description_complexity(patterns: &[BiclusterPattern], alpha: f64, beta: f64) -> f64 {
    let total: usize = patterns.iter().map(|p| p.statistic_count()).sum();
    complexity_from_count(total, alpha, beta)
}

fn check_partition(patterns: &[BiclusterPattern], n: usize) -> Result<()> {
    let mut covered = vec![false; n];
    for (c, p) in patterns.iter().enumerate() {
        for &i in p.points() {
            if i >= n {
                return Err(Error::PointOutOfRange { index: i, n });
            }
            if std::mem::replace(&mut covered[i], true) {
                return Err(Error::NotAPartition(format!(
                    "point {i} is covered again by pattern {c}"
                )));
            }
        }
    }
    if let Some(i) = covered.iter().position(|&c| !c) {
        return Err(Error::NotAPartition(format!("point {i} is not covered")));
    }
    Ok(())
}

/// Total information over total complexity for patterns that partition the
/// prior's points.
pub fn subjective_interestingness(
    patterns: &[BiclusterPattern],
    prior: &PriorModel,
    hp: &Hyperparameters,
) -> Result<Score> {
    check_partition(patterns, prior.n())?;
    for p in patterns {
        check_pattern(p, prior)?;
    }
    let information = canonical_sum(information_terms(patterns, prior));
    let complexity = description_complexity(patterns, hp.alpha, hp.beta);
    Ok(Score::new(information, complexity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Attribute, AttributeType, Dataset};
    use crate::stats::fit_prior;
    use proptest::prelude::*;

    // Oracle: explicit expectation over the two outcomes.
    fn bernoulli_oracle(p: f64, q: f64) -> f64 {
        [(p, q), (1.0 - p, 1.0 - q)]
            .iter()
            .map(|&(a, b)| a * (a / b).log2())
            .sum()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(kl_bernoulli(0.3, 0.3).unwrap(), 0.0);
        let expected = 0.5 * 2f64.log2() + 0.5 * (2.0f64 / 3.0).log2();
        assert!((kl_bernoulli(0.5, 0.25).unwrap() - expected).abs() < 1e-15);
        assert!((kl_bernoulli(0.5, 0.25).unwrap() - 0.20752).abs() < 1e-5);
        // 0.9·log₂9 + 0.1·log₂(1/9) = 0.8·log₂9
        assert!((kl_bernoulli(0.9, 0.1).unwrap() - 0.8 * 9f64.log2()).abs() < 1e-12);
        assert!((kl_bernoulli(0.9, 0.1).unwrap() - 2.53594).abs() < 1e-5);
        assert!((kl_bernoulli(0.9, 0.1).unwrap() - bernoulli_oracle(0.9, 0.1)).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_rejects_boundaries() {
        assert!(kl_bernoulli(0.0, 0.5).is_err());
        assert!(kl_bernoulli(0.5, 1.0).is_err());
        assert!(kl_bernoulli(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(kl_gaussian(2.0, 3.0, 2.0, 3.0).unwrap(), 0.0);
        assert!((kl_gaussian(1.0, 1.0, 0.0, 1.0).unwrap() - 0.5 / LN_2).abs() < 1e-15);
        assert!((kl_gaussian(1.0, 1.0, 0.0, 1.0).unwrap() - 0.72135).abs() < 1e-5);
        let expected = (-(2f64.ln()) + 2.0 - 0.5) / LN_2;
        assert!((kl_gaussian(0.0, 2.0, 0.0, 1.0).unwrap() - expected).abs() < 1e-14);
        assert!((kl_gaussian(0.0, 2.0, 0.0, 1.0).unwrap() - 1.16404).abs() < 1e-5);
    }

    #[test]
    fn gaussian_rejects_bad_stdev() {
        assert!(kl_gaussian(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(kl_gaussian(0.0, 1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn complexity_values() {
        assert_eq!(complexity_from_count(0, 42.0, 1.6), 42.0);
        assert!((complexity_from_count(10, 250.0, 1.6) - 289.81).abs() < 0.01);
        assert_eq!(complexity_from_count(7, 0.0, 1.0), 7.0);
    }

    fn bool_dataset(values: &[f64]) -> Dataset {
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        Dataset::from_rows(&rows, vec![Attribute::new("b", AttributeType::Boolean)]).unwrap()
    }

    #[test]
    fn pattern_information_scales_with_size() {
        // 40 points, 10 ones: prior frequency 0.25
        let mut values = vec![0.0; 40];
        values[..10].fill(1.0);
        let prior = fit_prior(&bool_dataset(&values), 1e-4).unwrap();
        let stat = AttributeStatistics::Boolean { frequency: 0.5 };
        let p10 = BiclusterPattern::new((0..10).collect(), vec![0], vec![stat]).unwrap();
        let p20 = BiclusterPattern::new((0..20).collect(), vec![0], vec![stat]).unwrap();
        let i10 = pattern_information(&p10, &prior).unwrap();
        assert!((i10 - 2.0752).abs() < 1e-4);
        assert_eq!(pattern_information(&p20, &prior).unwrap(), 2.0 * i10);
    }

    #[test]
    fn whole_data_pattern_has_no_information() {
        let prior = fit_prior(&bool_dataset(&[0.0, 1.0, 1.0]), 1e-4).unwrap();
        let p = BiclusterPattern::new(vec![0, 1, 2], vec![0], vec![*prior.get(0)]).unwrap();
        let hp = Hyperparameters::default();
        let score = subjective_interestingness(&[p], &prior, &hp).unwrap();
        assert_eq!(score.information, 0.0);
        assert_eq!(score.si, 0.0);
    }

    #[test]
    fn si_rejects_non_partitions() {
        let prior = fit_prior(&bool_dataset(&[0.0, 1.0, 1.0]), 1e-4).unwrap();
        let s = AttributeStatistics::Boolean { frequency: 0.5 };
        let a = BiclusterPattern::new(vec![0, 1], vec![0], vec![s]).unwrap();
        let b = BiclusterPattern::new(vec![1, 2], vec![0], vec![s]).unwrap();
        let hp = Hyperparameters::default();
        assert!(matches!(
            subjective_interestingness(&[a.clone(), b], &prior, &hp),
            Err(Error::NotAPartition(_))
        ));
        assert!(matches!(
            subjective_interestingness(&[a], &prior, &hp),
            Err(Error::NotAPartition(_))
        ));
    }

    #[test]
    fn composed_score() {
        let score = Score::new(100.0, complexity_from_count(10, 250.0, 1.6));
        assert!((score.si - 0.34506).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn kl_is_nonnegative_and_zero_only_at_equality(
            p in 0.001f64..0.999, q in 0.001f64..0.999,
            m1 in -10.0f64..10.0, m0 in -10.0f64..10.0,
            s1 in 0.1f64..10.0, s0 in 0.1f64..10.0,
        ) {
            let kb = kl_bernoulli(p, q).unwrap();
            prop_assert!(kb >= 0.0);
            prop_assert_eq!(kl_bernoulli(p, p).unwrap(), 0.0);
            if (p - q).abs() > 1e-3 { prop_assert!(kb > 0.0); }
            let kg = kl_gaussian(m1, s1, m0, s0).unwrap();
            prop_assert!(kg >= 0.0);
            prop_assert_eq!(kl_gaussian(m1, s1, m1, s1).unwrap(), 0.0);
            if (m1 - m0).abs() > 1e-3 || (s1 - s0).abs() > 1e-3 { prop_assert!(kg > 0.0); }
        }

        #[test]
        fn complexity_is_monotone(t in 1usize..500, alpha in 0.0f64..1000.0, beta in 1.0f64..2.0) {
            prop_assert!(complexity_from_count(t + 1, alpha, beta) > complexity_from_count(t, alpha, beta));
            prop_assert!(complexity_from_count(t, alpha + 1.0, beta) > complexity_from_count(t, alpha, beta));
        }
    }
}
