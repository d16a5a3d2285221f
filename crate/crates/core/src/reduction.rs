//! Far-point data reduction for the candidate stage.
//!
//! On large data sets, points close to their current centroid are poor
//! places for a new centroid. Each nonempty cluster keeps only the points
//! whose squared distance to the centroid is at least `eta * alpha`, where
//! `alpha` is the cluster's mean squared distance and
//! `eta = 1 + l * delta * (beta/alpha - 1)` interpolates between the mean
//! (`delta -> 0`) and the maximum (`delta -> 1/l`). The argmax point always
//! survives, so no cluster's far-point set is empty. Reduction is an
//! accelerator only: drivers fall back to the full candidate pool whenever
//! the reduced one is empty.

use crate::auxiliary::AuxContext;
use crate::clustering::{dist_sq, Assignment, CentroidSystem};
use crate::dataset::DataSet;
use crate::error::{Error, Result};

/// Spread statistics of one nonempty cluster.
#[derive(Debug, Clone)]
pub struct ClusterStats {
    /// Index of the cluster in the assignment.
    pub cluster: usize,
    /// Weighted mean squared distance to the centroid.
    pub mean_sq: f64,
    /// Maximum squared distance to the centroid.
    pub max_sq: f64,
    /// `max_sq / mean_sq`, at least 1; degenerate clusters report 1.
    pub spread_ratio: f64,
    /// The far-point cutoff factor `eta`.
    pub threshold_factor: f64,
    /// Data indices at squared distance `>= eta * mean_sq` from the
    /// centroid; never empty.
    pub far_points: Vec<usize>,
}

/// Computes per-cluster spread statistics and far-point sets.
///
/// `assignment` must be the nearest-centroid clustering of `xbar`; empty
/// clusters are skipped. Requires `0 < delta <= 1/l`.
pub fn cluster_stats(
    data: &DataSet,
    xbar: &CentroidSystem,
    assignment: &Assignment,
    delta: f64,
) -> Result<Vec<ClusterStats>> {
    let l = xbar.len() as f64;
    if !delta.is_finite() || delta <= 0.0 || delta > 1.0 / l {
        return Err(Error::InvalidParam {
            name: "delta",
            reason: format!("{delta} is outside (0, 1/{}]", xbar.len()),
        });
    }
    if assignment.num_clusters() != xbar.len() {
        return Err(Error::InconsistentAssignment(format!(
            "{} clusters for {} centroids",
            assignment.num_clusters(),
            xbar.len()
        )));
    }
    let mut stats = Vec::new();
    for (j, cluster) in assignment.clusters.iter().enumerate() {
        if cluster.is_empty() {
            continue;
        }
        let center = xbar.centroid(j);
        let mut weighted_sum = 0.0;
        let mut weight = 0.0;
        let mut max_sq: f64 = 0.0;
        for &i in cluster {
            let d = dist_sq(center, data.point(i));
            let w = data.weight(i) as f64;
            weighted_sum += w * d;
            weight += w;
            max_sq = max_sq.max(d);
        }
        let mean_sq = weighted_sum / weight;
        // All points on the centroid: treat the cluster as spread-free so
        // every member stays a far point.
        let spread_ratio = if mean_sq > 0.0 { max_sq / mean_sq } else { 1.0 };
        let threshold_factor = 1.0 + l * delta * (spread_ratio - 1.0);
        let cutoff = threshold_factor * mean_sq;
        let far_points: Vec<usize> = cluster
            .iter()
            .copied()
            .filter(|&i| dist_sq(center, data.point(i)) >= cutoff)
            .collect();
        debug_assert!(!far_points.is_empty());
        stats.push(ClusterStats {
            cluster: j,
            mean_sq,
            max_sq,
            spread_ratio,
            threshold_factor,
            far_points,
        });
    }
    Ok(stats)
}

/// How the decrease filter thresholds reduced candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionThreshold {
    /// Use the supplied coefficient (the same gamma1 as the unreduced
    /// filter), so the reduced pool is a subset of the unreduced one.
    Gamma(f64),
    /// Use the first nonempty cluster's `eta` as the coefficient. Kept for
    /// comparison; with `eta >= 1` the filter keeps only candidates at
    /// least as good as the best decrease scaled by `eta`.
    LiteralEtaOne,
}

/// Restricts candidate data points to far points whose objective decrease
/// clears the threshold.
///
/// The reference decrease maximum is always taken over the *full*
/// admissible point set, not just the far points, so the gamma reading
/// yields a subset of the unreduced candidate set. An empty result is
/// legal; callers fall back to the unreduced pool.
pub fn reduced_candidates(ctx: &AuxContext<'_>, stats: &[ClusterStats], gamma1: f64) -> Vec<usize> {
    reduced_candidates_with(ctx, stats, ReductionThreshold::Gamma(gamma1))
}

/// [`reduced_candidates`] with an explicit threshold rule.
pub fn reduced_candidates_with(
    ctx: &AuxContext<'_>,
    stats: &[ClusterStats],
    rule: ReductionThreshold,
) -> Vec<usize> {
    let admissible = ctx.data_in_improvement_region();
    let max_decrease = admissible
        .iter()
        .map(|&i| ctx.decrease(ctx.data().point(i)))
        .fold(0.0, f64::max);
    let coefficient = match rule {
        ReductionThreshold::Gamma(g) => g,
        ReductionThreshold::LiteralEtaOne => stats.first().map_or(1.0, |s| s.threshold_factor),
    };
    let cutoff = coefficient * max_decrease;
    let mut union: Vec<usize> = stats.iter().flat_map(|s| s.far_points.clone()).collect();
    union.sort_unstable();
    union.dedup();
    union
        .into_iter()
        .filter(|&i| ctx.nearest_sq()[i] > 0.0 && ctx.decrease(ctx.data().point(i)) >= cutoff)
        .collect()
}
