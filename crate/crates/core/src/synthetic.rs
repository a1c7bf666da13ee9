//! Planted-cluster fixtures with known labels and known discriminating
//! attributes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::model::{Attribute, AttributeType, Dataset, Embedding};

#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub blobs: usize,
    pub points_per_blob: usize,
    /// Total number of (real) attributes.
    pub attributes: usize,
    /// `discriminating[i]` is shifted for blob `i % blobs`.
    pub discriminating: Vec<usize>,
    /// Shift in units of the within-blob standard deviation.
    pub separation: f64,
    /// Distance between blob centres in the embedding, in units of the
    /// within-blob embedding spread.
    pub embedding_gap: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            blobs: 3,
            points_per_blob: 100,
            attributes: 10,
            discriminating: vec![0, 1, 2],
            separation: 5.0,
            embedding_gap: 40.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedFixture {
    pub dataset: Dataset,
    pub embedding: Embedding,
    pub labels: Vec<usize>,
    pub discriminating: Vec<usize>,
}

/// Blobs are placed on a circle in the embedding; points are listed blob by
/// blob.
pub fn planted_blobs(config: &PlantedConfig) -> PlantedFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.blobs * config.points_per_blob;
    let radius = if config.blobs > 1 {
        config.embedding_gap / (2.0 * (std::f64::consts::PI / config.blobs as f64).sin())
    } else {
        0.0
    };
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let mut coords = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for b in 0..config.blobs {
        let angle = 2.0 * std::f64::consts::PI * b as f64 / config.blobs as f64;
        let centre = [radius * angle.cos(), radius * angle.sin()];
        for _ in 0..config.points_per_blob {
            coords.push([
                centre[0] + unit.sample(&mut rng),
                centre[1] + unit.sample(&mut rng),
            ]);
            let mut row: Vec<f64> = (0..config.attributes)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            for (i, &j) in config.discriminating.iter().enumerate() {
                if i % config.blobs == b {
                    row[j] += config.separation;
                }
            }
            rows.push(row);
            labels.push(b);
        }
    }
    let schema = (0..config.attributes)
        .map(|j| Attribute::new(format!("a{j}"), AttributeType::Real))
        .collect();
    PlantedFixture {
        dataset: Dataset::from_rows(&rows, schema).expect("well-formed fixture"),
        embedding: Embedding::new(coords).expect("finite coordinates"),
        labels,
        discriminating: config.discriminating.clone(),
    }
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let ka = a.iter().max().map_or(0, |&x| x + 1);
    let kb = b.iter().max().map_or(0, |&x| x + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let pairs = |c: u64| (c * c.saturating_sub(1)) as f64 / 2.0;
    let index: f64 = table.iter().flatten().map(|&c| pairs(c)).sum();
    let rows: f64 = table.iter().map(|r| pairs(r.iter().sum())).sum();
    let cols: f64 = (0..kb).map(|y| pairs(table.iter().map(|r| r[y]).sum())).sum();
    let total = pairs(a.len() as u64);
    let expected = rows * cols / total;
    let max = (rows + cols) / 2.0;
    if max == expected {
        1.0
    } else {
        (index - expected) / (max - expected)
    }
}
