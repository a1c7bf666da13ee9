//! Greedy attribute selection over all clusters at once.
//!
//! Description complexity depends on the total statistic count, so the value
//! of adding an attribute to one cluster depends on every other cluster.
//! Selection therefore runs one greedy loop over all `(cluster, attribute)`
//! pairs. For a fixed statistic weight the SI after an addition grows with
//! the added information, so only the most informative unused boolean and
//! the most informative unused real attribute can be the best move; two
//! pre-sorted pools give those in constant time.

use std::cmp::Ordering;

use crate::info::{canonical_sum, complexity_from_count, Score};
use crate::model::AttributeType;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Selection {
    /// Selected attributes per cluster, by decreasing information.
    pub attributes: Vec<Vec<usize>>,
    pub statistic_count: usize,
    pub score: Score,
}

#[derive(Clone, Copy)]
struct Entry {
    info: f64,
    cluster: usize,
    attribute: usize,
}

fn by_information(a: &Entry, b: &Entry) -> Ordering {
    b.info
        .total_cmp(&a.info)
        .then(a.cluster.cmp(&b.cluster))
        .then(a.attribute.cmp(&b.attribute))
}

#[inline]
fn ratio(information: f64, statistics: usize, alpha: f64, beta: f64) -> f64 {
    if information == 0.0 {
        0.0
    } else {
        information / complexity_from_count(statistics, alpha, beta)
    }
}

/// `infos[c][j]` is the information cluster `c` carries about attribute `j`.
/// Ties are broken by the smallest `(cluster, attribute)`.
pub(crate) fn greedy_select(
    infos: &[&[f64]],
    kinds: &[AttributeType],
    alpha: f64,
    beta: f64,
) -> Selection {
    let k = infos.len();
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut information = 0.0;
    let mut statistics = 0;

    // every cluster is explained by at least its most informative attribute
    for (c, info) in infos.iter().enumerate() {
        let seed = (0..info.len())
            .max_by(|&a, &b| info[a].total_cmp(&info[b]).then(b.cmp(&a)))
            .expect("at least one attribute");
        chosen[c].push(seed);
        information += info[seed];
        statistics += kinds[seed].statistic_count();
    }

    let mut pools: [Vec<Entry>; 2] = [Vec::new(), Vec::new()];
    for (c, info) in infos.iter().enumerate() {
        for (j, &value) in info.iter().enumerate() {
            if chosen[c][0] == j {
                continue;
            }
            let pool = match kinds[j] {
                AttributeType::Boolean => 0,
                AttributeType::Real => 1,
            };
            pools[pool].push(Entry {
                info: value,
                cluster: c,
                attribute: j,
            });
        }
    }
    for pool in &mut pools {
        pool.sort_by(by_information);
    }
    let weights = [
        AttributeType::Boolean.statistic_count(),
        AttributeType::Real.statistic_count(),
    ];
    let mut heads = [0usize; 2];

    loop {
        let current = ratio(information, statistics, alpha, beta);
        let mut best: Option<(f64, usize)> = None;
        for p in 0..2 {
            let Some(e) = pools[p].get(heads[p]) else {
                continue;
            };
            let si = ratio(information + e.info, statistics + weights[p], alpha, beta);
            let better = match best {
                None => true,
                Some((best_si, q)) => {
                    let other = pools[q][heads[q]];
                    si > best_si
                        || (si == best_si
                            && (e.cluster, e.attribute) < (other.cluster, other.attribute))
                }
            };
            if better {
                best = Some((si, p));
            }
        }
        match best {
            Some((si, p)) if si > current => {
                let e = pools[p][heads[p]];
                heads[p] += 1;
                chosen[e.cluster].push(e.attribute);
                information += e.info;
                statistics += weights[p];
            }
            _ => break,
        }
    }

    for (c, attrs) in chosen.iter_mut().enumerate() {
        let info = infos[c];
        attrs.sort_by(|&a, &b| info[b].total_cmp(&info[a]).then(a.cmp(&b)));
    }
    let terms = chosen
        .iter()
        .enumerate()
        .flat_map(|(c, attrs)| attrs.iter().map(move |&j| infos[c][j]))
        .collect();
    Selection {
        attributes: chosen,
        statistic_count: statistics,
        score: Score::new(
            canonical_sum(terms),
            complexity_from_count(statistics, alpha, beta),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: AttributeType = AttributeType::Boolean;
    const R: AttributeType = AttributeType::Real;

    /// Straight scan over every (cluster, attribute) pair at each step.
    fn scan_select(infos: &[Vec<f64>], kinds: &[AttributeType], alpha: f64, beta: f64) -> Vec<Vec<usize>> {
        let mut chosen: Vec<Vec<usize>> = infos
            .iter()
            .map(|info| {
                let mut best = 0;
                for j in 1..info.len() {
                    if info[j] > info[best] {
                        best = j;
                    }
                }
                vec![best]
            })
            .collect();
        loop {
            let total = |ch: &Vec<Vec<usize>>| -> (f64, usize) {
                let mut i = 0.0;
                let mut t = 0;
                for (c, a) in ch.iter().enumerate() {
                    for &j in a {
                        i += infos[c][j];
                        t += kinds[j].statistic_count();
                    }
                }
                (i, t)
            };
            let (i0, t0) = total(&chosen);
            let current = ratio(i0, t0, alpha, beta);
            let mut best: Option<(f64, usize, usize)> = None;
            for c in 0..infos.len() {
                for j in 0..kinds.len() {
                    if chosen[c].contains(&j) {
                        continue;
                    }
                    let si = ratio(i0 + infos[c][j], t0 + kinds[j].statistic_count(), alpha, beta);
                    if best.is_none_or(|(b, _, _)| si > b) {
                        best = Some((si, c, j));
                    }
                }
            }
            match best {
                Some((si, c, j)) if si > current => chosen[c].push(j),
                _ => break,
            }
        }
        for (c, a) in chosen.iter_mut().enumerate() {
            a.sort_by(|&x, &y| infos[c][y].total_cmp(&infos[c][x]).then(x.cmp(&y)));
        }
        chosen
    }

    #[test]
    fn zero_information_seeds_first_attribute() {
        let info = [0.0; 4];
        let sel = greedy_select(&[&info], &[R, B, R, B], 250.0, 1.6);
        assert_eq!(sel.attributes, vec![vec![0]]);
        assert_eq!(sel.score.si, 0.0);
        assert_eq!(sel.statistic_count, 2);
    }

    #[test]
    fn seeds_even_when_unprofitable() {
        // second cluster carries almost nothing but still gets an attribute
        let a = [50.0, 1.0];
        let b = [0.0, 1e-9];
        let sel = greedy_select(&[&a, &b], &[R, R], 0.0, 2.0);
        assert_eq!(sel.attributes, vec![vec![0], vec![1]]);
    }

    #[test]
    fn matches_pairwise_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let k = rng.random_range(1..5);
            let m = rng.random_range(1..8);
            let kinds: Vec<AttributeType> =
                (0..m).map(|_| if rng.random_bool(0.5) { B } else { R }).collect();
            let infos: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..m).map(|_| rng.random_range(0.0..300.0)).collect())
                .collect();
            let alpha = rng.random_range(0.0..500.0);
            let beta = rng.random_range(1.0..2.0);
            let refs: Vec<&[f64]> = infos.iter().map(|v| v.as_slice()).collect();
            let fast = greedy_select(&refs, &kinds, alpha, beta);
            assert_eq!(fast.attributes, scan_select(&infos, &kinds, alpha, beta));
        }
    }
}
