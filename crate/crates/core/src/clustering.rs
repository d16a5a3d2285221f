//! Centroid systems, the nearest-centroid assignment rule, and the
//! clustering objective.
//!
//! The objective of a centroid system `x = (x^1, ..., x^l)` on a weighted
//! data set is the weighted mean of each point's squared distance to its
//! nearest centroid. Assignments follow the sequential rule: a point joins
//! the cluster of the *lowest-indexed* centroid attaining its minimum
//! distance, so ties always resolve deterministically.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::dataset::DataSet;
use crate::error::{Error, Result};

static DIST_EVALS: AtomicU64 = AtomicU64::new(0);

/// Squared Euclidean distance between two points of equal dimension.
#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    DIST_EVALS.fetch_add(1, Ordering::Relaxed);
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += d * d;
    }
    s
}

/// Process-wide count of squared-distance evaluations, for run traces.
pub fn distance_evaluations() -> u64 {
    DIST_EVALS.load(Ordering::Relaxed)
}

pub fn reset_distance_evaluations() {
    DIST_EVALS.store(0, Ordering::Relaxed);
}

/// An ordered tuple of cluster centers; the decision variable of the
/// clustering problem.
///
/// Pairwise distinctness is deliberately *not* an invariant: it is a
/// property that the incremental drivers guarantee for their outputs and
/// that the verifier checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSystem {
    centroids: Vec<Vec<f64>>,
    dim: usize,
}

impl CentroidSystem {
    pub fn new(centroids: Vec<Vec<f64>>) -> Result<Self> {
        if centroids.is_empty() {
            return Err(Error::ZeroClusters);
        }
        let dim = centroids[0].len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: 1,
                got: 0,
            });
        }
        for (index, c) in centroids.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    got: c.len(),
                });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index });
            }
        }
        Ok(Self { centroids, dim })
    }

    /// Number of centroids.
    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centroid(&self, j: usize) -> &[f64] {
        &self.centroids[j]
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn into_centroids(self) -> Vec<Vec<f64>> {
        self.centroids
    }

    /// A new system with `y` appended as the last centroid.
    pub fn extended(&self, y: &[f64]) -> Self {
        let mut centroids = self.centroids.clone();
        centroids.push(y.to_vec());
        Self {
            centroids,
            dim: self.dim,
        }
    }

    /// Exact coordinate-wise distinctness of all centroids.
    pub fn is_pairwise_distinct(&self) -> bool {
        for i in 0..self.centroids.len() {
            for j in (i + 1)..self.centroids.len() {
                if self.centroids[i] == self.centroids[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// A partition of the data induced by a centroid system.
///
/// `clusters` are pairwise disjoint and cover the data. `attraction_sets`
/// may overlap: index `i` appears in the attraction set of every centroid
/// attaining its minimum distance. Attraction sets are populated by
/// [`natural_clustering`]; assignments built from raw labels leave them
/// empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub cluster_of: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
    pub attraction_sets: Vec<Vec<usize>>,
}

impl Assignment {
    /// Builds an assignment from explicit labels (one per data index).
    pub fn from_labels(labels: Vec<usize>, num_clusters: usize) -> Result<Self> {
        if num_clusters == 0 {
            return Err(Error::ZeroClusters);
        }
        let mut clusters = vec![Vec::new(); num_clusters];
        for (i, &j) in labels.iter().enumerate() {
            if j >= num_clusters {
                return Err(Error::InconsistentAssignment(format!(
                    "label {j} of point {i} exceeds cluster count {num_clusters}"
                )));
            }
            clusters[j].push(i);
        }
        Ok(Self {
            cluster_of: labels,
            clusters,
            attraction_sets: vec![Vec::new(); num_clusters],
        })
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// The 0/1 incidence matrix, row per point, column per cluster.
    pub fn incidence(&self) -> Vec<Vec<u8>> {
        self.cluster_of
            .iter()
            .map(|&j| {
                let mut row = vec![0u8; self.clusters.len()];
                row[j] = 1;
                row
            })
            .collect()
    }
}

/// Assigns every point to its nearest centroid, ties to the lowest index,
/// and records the attraction set of each centroid (all points whose
/// minimum distance that centroid attains, by exact comparison).
pub fn natural_clustering(data: &DataSet, x: &CentroidSystem) -> Assignment {
    assert_eq!(
        data.dim(),
        x.dim(),
        "data dimension {} differs from centroid dimension {}",
        data.dim(),
        x.dim()
    );
    let l = x.len();
    let mut cluster_of = Vec::with_capacity(data.len());
    let mut clusters = vec![Vec::new(); l];
    let mut attraction_sets = vec![Vec::new(); l];
    let mut dists = vec![0.0; l];
    for i in 0..data.len() {
        let p = data.point(i);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (j, d) in dists.iter_mut().enumerate() {
            *d = dist_sq(p, x.centroid(j));
            if *d < best_d {
                best_d = *d;
                best = j;
            }
        }
        cluster_of.push(best);
        clusters[best].push(i);
        for (j, &d) in dists.iter().enumerate() {
            if d == best_d {
                attraction_sets[j].push(i);
            }
        }
    }
    Assignment {
        cluster_of,
        clusters,
        attraction_sets,
    }
}

/// Weighted mean of squared distances to the nearest centroid.
///
/// Accumulates left to right in point-index order for determinism.
pub fn mssc_objective(data: &DataSet, x: &CentroidSystem) -> f64 {
    let mut sum = 0.0;
    for i in 0..data.len() {
        let p = data.point(i);
        let mut best = f64::INFINITY;
        for j in 0..x.len() {
            let d = dist_sq(p, x.centroid(j));
            if d < best {
                best = d;
            }
        }
        sum += data.weight(i) as f64 * best;
    }
    sum / data.total_weight()
}

/// [`mssc_objective`] with Kahan-compensated accumulation, for callers that
/// prefer reduced rounding error over plain left-to-right summation.
pub fn mssc_objective_compensated(data: &DataSet, x: &CentroidSystem) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for i in 0..data.len() {
        let p = data.point(i);
        let mut best = f64::INFINITY;
        for j in 0..x.len() {
            let d = dist_sq(p, x.centroid(j));
            if d < best {
                best = d;
            }
        }
        let term = data.weight(i) as f64 * best - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    sum / data.total_weight()
}

/// Weighted mean of squared distances to the *assigned* centroid.
///
/// For the assignment produced by [`natural_clustering`] this equals
/// [`mssc_objective`]; for any other assignment it is at least as large.
pub fn assignment_objective(data: &DataSet, x: &CentroidSystem, a: &Assignment) -> Result<f64> {
    if a.cluster_of.len() != data.len() {
        return Err(Error::InconsistentAssignment(format!(
            "{} labels for {} points",
            a.cluster_of.len(),
            data.len()
        )));
    }
    if a.num_clusters() != x.len() {
        return Err(Error::InconsistentAssignment(format!(
            "{} clusters for {} centroids",
            a.num_clusters(),
            x.len()
        )));
    }
    let mut sum = 0.0;
    for (i, &j) in a.cluster_of.iter().enumerate() {
        sum += data.weight(i) as f64 * dist_sq(data.point(i), x.centroid(j));
    }
    Ok(sum / data.total_weight())
}
