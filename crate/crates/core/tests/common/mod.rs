//! Shared fixtures and random-instance generators for the integration
//! suites.
#![allow(dead_code)] // each test binary uses a different subset

use mssc::{CentroidSystem, DataSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn triangle() -> DataSet {
    DataSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
}

pub fn square() -> DataSet {
    DataSet::new(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
    ])
    .unwrap()
}

pub fn uniform_points(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect()
}

/// A pairwise-distinct random data set; collisions of continuous draws are
/// next to impossible, but regenerate if one ever occurs.
pub fn distinct_dataset(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DataSet {
    loop {
        let d = DataSet::new(uniform_points(rng, m, n)).unwrap();
        if d.is_pairwise_distinct() {
            return d;
        }
    }
}

pub fn distinct_centroids(rng: &mut ChaCha8Rng, l: usize, n: usize) -> CentroidSystem {
    loop {
        let x = CentroidSystem::new(uniform_points(rng, l, n)).unwrap();
        if x.is_pairwise_distinct() {
            return x;
        }
    }
}
