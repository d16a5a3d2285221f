//! Local-optimality classification and the exact small-instance solver.
//!
//! A centroid system with pairwise distinct centroids is a nontrivial
//! local solution when every centroid with a nonempty attraction set sits
//! on that set's barycenter and every centroid with an empty attraction
//! set stays strictly outside the closed balls spanned by each point and
//! its nearest centroid. Those conditions are checked within an absolute
//! tolerance; distance ties are reported, never guessed.
//!
//! The exact solver enumerates every partition of the data into at most
//! `k` nonempty clusters (optimal centroids are always barycenters of the
//! clusters they serve), so it is feasible only at desk scale and guarded
//! by a partition-count cap.

use serde::Serialize;

use crate::clustering::{dist_sq, CentroidSystem};
use crate::dataset::DataSet;
use crate::error::{Error, Result};

/// Default cap on the number of partitions the exact solver may visit.
pub const DEFAULT_PARTITION_CAP: u64 = 1_000_000;

/// Outcome of the optimality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// All sufficient conditions hold: distinct centroids, barycenter
    /// placement on nonempty attraction sets, ball exclusion on empty ones.
    #[serde(rename = "nontrivial-local-solution")]
    NontrivialLocalSolution,
    /// A necessary condition provably fails.
    #[serde(rename = "fails-necessary")]
    FailsNecessary,
    /// Some point has more than one nearest centroid within tolerance, so
    /// the attraction sets are ambiguous.
    #[serde(rename = "indeterminate-ties")]
    IndeterminateTies,
}

/// Per-centroid check results.
///
/// `barycenter_ok[j]` is `None` when centroid `j` has an empty attraction
/// set (the barycenter condition does not apply); `ball_exclusion_ok[j]`
/// is `None` when it has a nonempty one.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub c1_holds: bool,
    pub unique_nearest: bool,
    pub barycenter_ok: Vec<Option<bool>>,
    pub ball_exclusion_ok: Vec<Option<bool>>,
    pub classification: Classification,
}

/// Classifies `x` against the local-optimality conditions.
///
/// `tol` is an absolute slack, applied per coordinate in the barycenter
/// comparison and per squared distance in tie detection and ball
/// exclusion.
pub fn verify_local(data: &DataSet, x: &CentroidSystem, tol: f64) -> VerifyReport {
    assert_eq!(data.dim(), x.dim(), "dimension mismatch");
    let m = data.len();
    let l = x.len();

    let c1_holds = x.is_pairwise_distinct();

    // Nearest-centroid index sets within tolerance.
    let mut nearest_sq = Vec::with_capacity(m);
    let mut nearest_sets: Vec<Vec<usize>> = Vec::with_capacity(m);
    for i in 0..m {
        let p = data.point(i);
        let dists: Vec<f64> = (0..l).map(|j| dist_sq(p, x.centroid(j))).collect();
        let min = dists.iter().copied().fold(f64::INFINITY, f64::min);
        nearest_sq.push(min);
        nearest_sets.push((0..l).filter(|&j| dists[j] <= min + tol).collect());
    }
    let unique_nearest = nearest_sets.iter().all(|s| s.len() == 1);

    // Attraction sets induced by the tolerance-widened nearest sets.
    let mut attraction: Vec<Vec<usize>> = vec![Vec::new(); l];
    for (i, set) in nearest_sets.iter().enumerate() {
        for &j in set {
            attraction[j].push(i);
        }
    }

    let mut barycenter_ok: Vec<Option<bool>> = vec![None; l];
    let mut ball_exclusion_ok: Vec<Option<bool>> = vec![None; l];
    for j in 0..l {
        if attraction[j].is_empty() {
            // Strictly outside every closed ball spanned by a point and its
            // nearest centroid. The ball radius is the point's minimum
            // distance, so this is exclusion by margin `tol`.
            let outside =
                (0..m).all(|i| dist_sq(data.point(i), x.centroid(j)) > nearest_sq[i] + tol);
            ball_exclusion_ok[j] = Some(outside);
        } else {
            let bary = data
                .barycenter_of(&attraction[j])
                .expect("attraction set is nonempty");
            let ok = bary
                .iter()
                .zip(x.centroid(j))
                .all(|(b, c)| (b - c).abs() <= tol);
            barycenter_ok[j] = Some(ok);
        }
    }

    let classification = if !c1_holds {
        Classification::FailsNecessary
    } else if !unique_nearest {
        Classification::IndeterminateTies
    } else if barycenter_ok.iter().flatten().all(|&ok| ok)
        && ball_exclusion_ok.iter().flatten().all(|&ok| ok)
    {
        Classification::NontrivialLocalSolution
    } else {
        Classification::FailsNecessary
    };

    VerifyReport {
        c1_holds,
        unique_nearest,
        barycenter_ok,
        ball_exclusion_ok,
        classification,
    }
}

/// Result of the exact solver.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// A global minimizer (the first in enumeration order).
    pub best: CentroidSystem,
    /// The global minimum objective.
    pub objective: f64,
    /// All distinct global minimizers, each in canonical (sorted) centroid
    /// order.
    pub optima: Vec<CentroidSystem>,
}

/// Number of partitions of `m` elements into at most `k` nonempty blocks;
/// `None` on overflow.
pub fn partition_count(m: usize, k: usize) -> Option<u128> {
    // Stirling numbers of the second kind, summed over block counts.
    let mut row: Vec<u128> = vec![0; k + 1];
    row[0] = 1;
    for _ in 1..=m {
        let mut next = vec![0u128; k + 1];
        for r in 1..=k {
            let grow = (r as u128).checked_mul(row[r])?;
            next[r] = grow.checked_add(row[r - 1])?;
        }
        row = next;
    }
    let mut total: u128 = 0;
    for count in &row[1..=k] {
        total = total.checked_add(*count)?;
    }
    Some(total)
}

/// Finds the global minimum by enumerating all partitions of the data into
/// at most `k` nonempty clusters and scoring the barycenter system of each.
///
/// Partitions are enumerated as restricted-growth strings, so each
/// unordered partition appears exactly once with blocks in first-occurrence
/// order. When a minimizing partition has fewer than `k` blocks, the
/// returned system is padded with centroids placed far outside the hull of
/// the data, where they attract nothing (this cannot happen for pairwise
/// distinct data with `k <= m`).
pub fn brute_force_global(data: &DataSet, k: usize, cap: u64) -> Result<OracleOutcome> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    let m = data.len();
    if k > m {
        return Err(Error::TooManyClusters { k, m });
    }
    let required = partition_count(m, k).unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(Error::PartitionCapExceeded { required, cap });
    }

    let mut best_objective = f64::INFINITY;
    let mut minimizers: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut labels = vec![0usize; m];
    loop {
        let objective = score_partition(data, &labels);
        // Keep everything within a hair of the running minimum; prune
        // losers as the minimum drops.
        let slack = 1e-12 * best_objective.abs().max(1e-12);
        if objective < best_objective {
            best_objective = objective;
            let keep = 1e-12 * best_objective.abs().max(1e-12);
            minimizers.retain(|&(_, f)| f <= best_objective + keep);
        }
        if objective <= best_objective + slack {
            minimizers.push((labels.clone(), objective));
        }
        if !next_rgs(&mut labels, k) {
            break;
        }
    }
    let keep = 1e-12 * best_objective.abs().max(1e-12);
    minimizers.retain(|&(_, f)| f <= best_objective + keep);

    let mut optima: Vec<CentroidSystem> = Vec::new();
    for (labels, _) in &minimizers {
        let system = canonical_system(data, labels, k);
        if !optima.iter().any(|s| s == &system) {
            optima.push(system);
        }
    }
    let best = optima[0].clone();
    Ok(OracleOutcome {
        best,
        objective: best_objective,
        optima,
    })
}

/// Objective of the barycenter system induced by a label vector. Points
/// may be closer to another block's barycenter; the minimum distance
/// counts, same as for any centroid system.
fn score_partition(data: &DataSet, labels: &[usize]) -> f64 {
    let blocks = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut sums = vec![vec![0.0; data.dim()]; blocks];
    let mut weights = vec![0.0; blocks];
    for (i, &b) in labels.iter().enumerate() {
        let w = data.weight(i) as f64;
        weights[b] += w;
        for (s, c) in sums[b].iter_mut().zip(data.point(i)) {
            *s += w * c;
        }
    }
    for (b, sum) in sums.iter_mut().enumerate() {
        for s in sum.iter_mut() {
            *s /= weights[b];
        }
    }
    let mut total = 0.0;
    for i in 0..data.len() {
        let p = data.point(i);
        let mut best = f64::INFINITY;
        for sum in &sums {
            let d = dist_sq(p, sum);
            if d < best {
                best = d;
            }
        }
        total += data.weight(i) as f64 * best;
    }
    total / data.total_weight()
}

fn canonical_system(data: &DataSet, labels: &[usize], k: usize) -> CentroidSystem {
    let blocks = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (i, &b) in labels.iter().enumerate() {
        members[b].push(i);
    }
    let mut centroids: Vec<Vec<f64>> = members
        .iter()
        .map(|idx| data.barycenter_of(idx).expect("blocks are nonempty"))
        .collect();
    if blocks < k {
        pad_far_from_data(data, &mut centroids, k);
    }
    centroids.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    CentroidSystem::new(centroids).expect("barycenters are finite")
}

/// Appends `k - len` centroids strictly outside every ball spanned by a
/// data point and its nearest real centroid, so they attract nothing.
fn pad_far_from_data(data: &DataSet, centroids: &mut Vec<Vec<f64>>, k: usize) {
    let mut reach: f64 = 1.0;
    for i in 0..data.len() {
        let p = data.point(i);
        let norm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        let nearest = centroids
            .iter()
            .map(|c| dist_sq(p, c).sqrt())
            .fold(f64::INFINITY, f64::min);
        reach = reach.max(norm + nearest + 1.0);
    }
    let mut t = 0;
    while centroids.len() < k {
        let mut pad = vec![0.0; data.dim()];
        pad[0] = reach * (t + 2) as f64;
        centroids.push(pad);
        t += 1;
    }
}

/// Advances `labels` to the next restricted-growth string with block
/// indices below `k`; returns false after the last one.
fn next_rgs(labels: &mut [usize], k: usize) -> bool {
    let m = labels.len();
    // prefix_max[i] = max of labels[..i]
    let mut prefix_max = vec![0usize; m];
    for i in 1..m {
        prefix_max[i] = prefix_max[i - 1].max(labels[i - 1]);
    }
    for i in (1..m).rev() {
        if labels[i] <= prefix_max[i] && labels[i] + 1 < k {
            labels[i] += 1;
            labels[(i + 1)..].fill(0);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DataSet {
        DataSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn square() -> DataSet {
        DataSet::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap()
    }

    fn system(centroids: &[&[f64]]) -> CentroidSystem {
        CentroidSystem::new(centroids.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rgs_enumeration_counts_match_partition_numbers() {
        // Bell-number prefixes: partitions of m items into at most k blocks.
        for (m, k, expect) in [(3, 2, 4), (4, 2, 8), (4, 4, 15), (5, 3, 41)] {
            let mut labels = vec![0usize; m];
            let mut count = 1u64;
            while next_rgs(&mut labels, k) {
                count += 1;
            }
            assert_eq!(count, expect, "m={m} k={k}");
            assert_eq!(partition_count(m, k), Some(expect as u128));
        }
    }

    #[test]
    fn oracle_square_finds_both_edge_splits() {
        let out = brute_force_global(&square(), 2, DEFAULT_PARTITION_CAP).unwrap();
        assert!((out.objective - 0.25).abs() < 1e-15);
        assert_eq!(out.optima.len(), 2);
        let want_a = system(&[&[0.0, 0.5], &[1.0, 0.5]]);
        let want_b = system(&[&[0.5, 0.0], &[0.5, 1.0]]);
        assert!(out.optima.contains(&want_a));
        assert!(out.optima.contains(&want_b));
    }

    #[test]
    fn oracle_triangle_finds_both_optima() {
        let out = brute_force_global(&triangle(), 2, DEFAULT_PARTITION_CAP).unwrap();
        assert!((out.objective - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(out.optima.len(), 2);
        let want_a = system(&[&[0.0, 0.5], &[1.0, 0.0]]);
        let want_b = system(&[&[0.0, 1.0], &[0.5, 0.0]]);
        assert!(out.optima.contains(&want_a));
        assert!(out.optima.contains(&want_b));
    }

    #[test]
    fn oracle_k1_returns_barycenter() {
        let d = triangle();
        let out = brute_force_global(&d, 1, DEFAULT_PARTITION_CAP).unwrap();
        assert_eq!(out.optima.len(), 1);
        assert_eq!(out.best.centroid(0), d.barycenter().as_slice());
        assert!((out.objective - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_respects_cap() {
        let points: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64]).collect();
        let d = DataSet::new(points).unwrap();
        assert!(matches!(
            brute_force_global(&d, 3, 1000),
            Err(Error::PartitionCapExceeded { .. })
        ));
    }

    #[test]
    fn verify_square_local_solution() {
        let d = square();
        let x = system(&[&[2.0 / 3.0, 2.0 / 3.0], &[0.0, 0.0]]);
        let report = verify_local(&d, &x, 1e-9);
        assert!(report.c1_holds);
        assert!(report.unique_nearest);
        assert_eq!(
            report.classification,
            Classification::NontrivialLocalSolution
        );
    }

    #[test]
    fn verify_square_global_solution() {
        let d = square();
        let x = system(&[&[0.5, 0.0], &[0.5, 1.0]]);
        let report = verify_local(&d, &x, 1e-9);
        assert_eq!(
            report.classification,
            Classification::NontrivialLocalSolution
        );
        assert_eq!(report.barycenter_ok, vec![Some(true), Some(true)]);
    }

    #[test]
    fn verify_duplicate_centroids_fail() {
        let d = square();
        let x = system(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let report = verify_local(&d, &x, 1e-9);
        assert!(!report.c1_holds);
        assert_eq!(report.classification, Classification::FailsNecessary);
    }

    #[test]
    fn verify_off_barycenter_fails() {
        let d = triangle();
        let x = system(&[&[0.2, 0.2], &[1.0, 0.0]]);
        let report = verify_local(&d, &x, 1e-9);
        assert_eq!(report.classification, Classification::FailsNecessary);
    }

    #[test]
    fn verify_reports_ties() {
        // A point equidistant from both centroids.
        let d = DataSet::new(vec![vec![0.0, 0.0]]).unwrap();
        let x = system(&[&[-1.0, 0.0], &[1.0, 0.0]]);
        let report = verify_local(&d, &x, 1e-9);
        assert!(!report.unique_nearest);
        assert_eq!(report.classification, Classification::IndeterminateTies);
    }

    #[test]
    fn verify_handles_empty_attraction_sets() {
        // Third centroid far away: empty attraction set, ball exclusion
        // holds, the other two sit on their barycenters.
        let d = DataSet::new(vec![vec![0.0], vec![1.0], vec![10.0], vec![11.0]]).unwrap();
        let x = system(&[&[0.5], &[10.5], &[100.0]]);
        let report = verify_local(&d, &x, 1e-9);
        assert_eq!(report.ball_exclusion_ok[2], Some(true));
        assert_eq!(
            report.classification,
            Classification::NontrivialLocalSolution
        );
    }

    #[test]
    fn oracle_optima_verify_as_local_solutions() {
        for data in [triangle(), square()] {
            let out = brute_force_global(&data, 2, DEFAULT_PARTITION_CAP).unwrap();
            for opt in &out.optima {
                let report = verify_local(&data, opt, 1e-9);
                assert_eq!(
                    report.classification,
                    Classification::NontrivialLocalSolution
                );
            }
        }
    }
}
