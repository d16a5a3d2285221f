//! The k-means inner solver.
//!
//! One step forms the nearest-centroid clustering, then moves every
//! centroid with a nonempty cluster to that cluster's barycenter. Centroids
//! whose cluster is empty stay where they are; no re-seeding happens. That
//! rule is what keeps pairwise-distinct centroid systems pairwise distinct
//! from one step to the next, which the incremental drivers rely on.

use crate::clustering::{mssc_objective, natural_clustering, Assignment, CentroidSystem};
use crate::dataset::DataSet;

/// Outcome of a k-means run.
#[derive(Debug, Clone)]
pub struct KmResult {
    pub centroids: CentroidSystem,
    pub assignment: Assignment,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// One assignment-update sweep.
pub fn step(data: &DataSet, x: &CentroidSystem) -> CentroidSystem {
    let assignment = natural_clustering(data, x);
    update(data, x, &assignment)
}

fn update(data: &DataSet, x: &CentroidSystem, assignment: &Assignment) -> CentroidSystem {
    let centroids = assignment
        .clusters
        .iter()
        .enumerate()
        .map(|(j, cluster)| {
            if cluster.is_empty() {
                x.centroid(j).to_vec()
            } else {
                data.barycenter_of(cluster)
                    .expect("nonempty cluster has a barycenter")
            }
        })
        .collect();
    CentroidSystem::new(centroids).expect("updated system keeps shape of its source")
}

/// Iterates [`step`] until every updated centroid moves by at most
/// `tol_conv` (Euclidean norm) or `max_iter` sweeps have run.
///
/// With `tol_conv = 0` the loop stops only at an exact fixed point;
/// non-convergence within `max_iter` is reported, never an error. The
/// objective never increases from one sweep to the next.
pub fn run(data: &DataSet, x0: &CentroidSystem, tol_conv: f64, max_iter: usize) -> KmResult {
    let mut x = x0.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let assignment = natural_clustering(data, &x);
        let next = update(data, &x, &assignment);
        let mut displacement: f64 = 0.0;
        for (j, cluster) in assignment.clusters.iter().enumerate() {
            if cluster.is_empty() {
                continue;
            }
            let moved = crate::clustering::dist_sq(x.centroid(j), next.centroid(j)).sqrt();
            displacement = displacement.max(moved);
        }
        x = next;
        if displacement <= tol_conv {
            converged = true;
            break;
        }
    }
    let assignment = natural_clustering(data, &x);
    let objective = mssc_objective(data, &x);
    KmResult {
        centroids: x,
        assignment,
        objective,
        iterations,
        converged,
    }
}
