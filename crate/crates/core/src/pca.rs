use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{Dataset, Embedding};

/// Eigenvalues below this fraction of the largest are treated as zero.
const RANK_TOLERANCE: f64 = 1e-10;

/// Projects the z-scored data onto its first two principal components.
///
/// Each component's sign is chosen so that its largest-magnitude loading is
/// positive. A component with (numerically) zero variance projects every
/// point to 0.
pub fn pca_embedding(dataset: &Dataset) -> Result<Embedding> {
    let (n, m) = (dataset.n(), dataset.m());
    if m < 2 {
        return Err(Error::InvalidDataset(format!(
            "PCA needs at least 2 attributes, got {m}"
        )));
    }
    let mut z = DMatrix::<f64>::zeros(n, m);
    for j in 0..m {
        let mean = dataset.column(j).sum::<f64>() / n as f64;
        let var = dataset.column(j).map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        for (i, v) in dataset.column(j).enumerate() {
            z[(i, j)] = if sd > 0.0 { (v - mean) / sd } else { 0.0 };
        }
    }
    let cov = (z.transpose() * &z) / n as f64;
    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .total_cmp(&eigen.eigenvalues[a])
            .then(a.cmp(&b))
    });
    let top = eigen.eigenvalues[order[0]].max(0.0);

    let mut coords = vec![[0.0; 2]; n];
    for (c, &k) in order.iter().take(2).enumerate() {
        if top == 0.0 || eigen.eigenvalues[k] <= RANK_TOLERANCE * top {
            continue;
        }
        let mut v = eigen.eigenvectors.column(k).into_owned();
        let lead = (0..m)
            .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(b.cmp(&a)))
            .unwrap();
        if v[lead] < 0.0 {
            v.neg_mut();
        }
        let scores = &z * v;
        for (i, s) in scores.iter().enumerate() {
            coords[i][c] = *s;
        }
    }
    Embedding::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Attribute, AttributeType};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn reals(rows: &[Vec<f64>]) -> Dataset {
        let m = rows[0].len();
        let schema = (0..m)
            .map(|j| Attribute::new(format!("a{j}"), AttributeType::Real))
            .collect();
        Dataset::from_rows(rows, schema).unwrap()
    }

    fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }

    #[test]
    fn whitened_2d_data_is_rotated() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rows: Vec<Vec<f64>> = (0..50)
            .map(|_| vec![StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)])
            .collect();
        // standardise each column so z-scoring is the identity
        for j in 0..2 {
            let mean = rows.iter().map(|r| r[j]).sum::<f64>() / 50.0;
            let sd = (rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / 50.0).sqrt();
            for r in &mut rows {
                r[j] = (r[j] - mean) / sd;
            }
        }
        let e = pca_embedding(&reals(&rows)).unwrap();
        for a in 0..50 {
            for b in 0..50 {
                let original = dist([rows[a][0], rows[a][1]], [rows[b][0], rows[b][1]]);
                assert!((dist(e.point(a), e.point(b)) - original).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rank_one_data_has_zero_second_coordinate() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64;
                vec![t, 2.0 * t + 1.0, -t]
            })
            .collect();
        let e = pca_embedding(&reals(&rows)).unwrap();
        assert!(e.coords().iter().all(|p| p[1] == 0.0));
        assert!(e.coords().iter().any(|p| p[0] != 0.0));
    }

    #[test]
    fn separates_two_blobs_along_first_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|i| {
                let shift = if i < 50 { 0.0 } else { 10.0 };
                (0..5)
                    .map(|_| shift + rng.random_range(-0.5..0.5))
                    .collect()
            })
            .collect();
        let e = pca_embedding(&reals(&rows)).unwrap();
        let first: Vec<f64> = e.coords().iter().map(|p| p[0]).collect();
        let (a, b) = first.split_at(50);
        let a_max = a.iter().cloned().fold(f64::MIN, f64::max);
        let a_min = a.iter().cloned().fold(f64::MAX, f64::min);
        let b_max = b.iter().cloned().fold(f64::MIN, f64::max);
        let b_min = b.iter().cloned().fold(f64::MAX, f64::min);
        let gap = (b_min - a_max).max(a_min - b_max);
        let spread = (a_max - a_min).max(b_max - b_min);
        assert!(gap > 5.0 * spread, "gap {gap}, spread {spread}");
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, (i * i) as f64 % 7.0]).collect();
        let e1 = pca_embedding(&reals(&rows)).unwrap();
        let negated: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let e2 = pca_embedding(&reals(&negated)).unwrap();
        // negating all inputs flips the scores, not the loadings' sign rule
        for (p, q) in e1.coords().iter().zip(e2.coords()) {
            assert!((p[0] + q[0]).abs() < 1e-9 && (p[1] + q[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn needs_two_attributes() {
        let rows = vec![vec![1.0], vec![2.0]];
        assert!(pca_embedding(&reals(&rows)).is_err());
    }
}
