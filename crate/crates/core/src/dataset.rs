//! Validated point collections with multiplicity bookkeeping.
//!
//! A [`DataSet`] stores `m` points in `n`-dimensional Euclidean space, each
//! with a positive integer weight. Weights exist so that [`dedup`] can merge
//! coinciding points while keeping every weighted sum equal to the sum over
//! the original multiset; identical points then necessarily end up in the
//! same cluster.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    points: Vec<Vec<f64>>,
    weights: Vec<u64>,
    dim: usize,
    total_weight: f64,
}

impl DataSet {
    /// Builds a data set with unit weights.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let weights = vec![1; points.len()];
        Self::with_weights(points, weights)
    }

    /// Builds a data set with explicit multiplicities.
    pub fn with_weights(points: Vec<Vec<f64>>, weights: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyDataSet);
        }
        if weights.len() != points.len() {
            return Err(Error::InconsistentAssignment(format!(
                "{} weights for {} points",
                weights.len(),
                points.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: 1,
                got: 0,
            });
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index });
            }
        }
        if let Some(index) = weights.iter().position(|&w| w == 0) {
            return Err(Error::ZeroWeight { index });
        }
        let total_weight = weights.iter().map(|&w| w as f64).sum();
        Ok(Self {
            points,
            weights,
            dim,
            total_weight,
        })
    }

    /// Number of stored (distinct after dedup) points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// A data set is never empty; kept for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Sum of all multiplicities (the size of the original multiset).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Exact coordinate-wise distinctness of all stored points.
    pub fn is_pairwise_distinct(&self) -> bool {
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                if self.points[i] == self.points[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Weighted barycenter of the whole set.
    pub fn barycenter(&self) -> Vec<f64> {
        let indices: Vec<usize> = (0..self.len()).collect();
        self.barycenter_of(&indices)
            .expect("data set is never empty")
    }

    /// Weighted barycenter of the points selected by `indices`.
    ///
    /// Accumulates coordinate sums left to right in index order, so the
    /// result is deterministic for a fixed index sequence.
    pub fn barycenter_of(&self, indices: &[usize]) -> Result<Vec<f64>> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sums = vec![0.0; self.dim];
        let mut weight = 0.0;
        for &i in indices {
            let w = self.weights[i] as f64;
            weight += w;
            for (s, c) in sums.iter_mut().zip(&self.points[i]) {
                *s += w * c;
            }
        }
        for s in &mut sums {
            *s /= weight;
        }
        Ok(sums)
    }
}

/// Merges coinciding points into one representative with summed multiplicity.
///
/// First-occurrence order is preserved, so downstream enumeration stays
/// stable. The merged set is pairwise distinct, which the incremental
/// drivers require.
pub fn dedup(raw: &DataSet) -> DataSet {
    dedup_with_map(raw).0
}

/// Like [`dedup`], also returning for each raw index the index of its
/// representative in the merged set.
pub fn dedup_with_map(raw: &DataSet) -> (DataSet, Vec<usize>) {
    use std::collections::HashMap;

    // -0.0 and 0.0 compare equal, so normalize before hashing on bits.
    fn key(p: &[f64]) -> Vec<u64> {
        p.iter()
            .map(|&c| if c == 0.0 { 0.0f64 } else { c }.to_bits())
            .collect()
    }

    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<u64> = Vec::new();
    let mut map = Vec::with_capacity(raw.len());
    for i in 0..raw.len() {
        let k = key(raw.point(i));
        match seen.get(&k) {
            Some(&rep) => {
                weights[rep] += raw.weight(i);
                map.push(rep);
            }
            None => {
                let rep = points.len();
                seen.insert(k, rep);
                points.push(raw.point(i).to_vec());
                weights.push(raw.weight(i));
                map.push(rep);
            }
        }
    }
    let merged = DataSet::with_weights(points, weights)
        .expect("merged set inherits validity from its source");
    (merged, map)
}
