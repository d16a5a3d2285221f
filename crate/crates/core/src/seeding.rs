//! Candidate selection for growing a centroid system by one.
//!
//! The cascade narrows the data down to promising spots for the next
//! centroid: admissible data points are filtered by their objective
//! decrease (gamma1), each survivor is replaced by the barycenter of the
//! points it would capture, the distinct barycenters are filtered again
//! (gamma2), and each survivor seeds an inner k-means run. The refined
//! candidates are filtered once more (gamma3). Two procedures consume the
//! refined runs: one keeps only the new centroid of each run as a starting
//! point, the other keeps the whole refined system.
//!
//! The gammas subsume simpler seeding schemes as parameter settings:
//! `gamma1 = 0, gamma2 = 1` keeps every admissible point but only the
//! best-decrease barycenters, the classic modified global seeding; no
//! separate code path exists for it.

use crate::auxiliary::AuxContext;
use crate::clustering::{natural_clustering, CentroidSystem};
use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::kmeans::{self, KmResult};
use crate::params::ControlParams;
use crate::reduction::{cluster_stats, reduced_candidates_with, ReductionThreshold};
use crate::trace::CascadeSummary;

/// A candidate barycenter with the data index that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycenterCandidate {
    pub point: Vec<f64>,
    pub source: usize,
}

/// The staged candidate sets produced for one level.
#[derive(Debug, Clone)]
pub struct CandidateCascade {
    /// Largest objective decrease over all admissible data points.
    pub max_decrease: f64,
    /// Data indices surviving the gamma1 filter, ascending.
    pub point_candidates: Vec<usize>,
    /// Distinct capture-set barycenters of the survivors, in generation
    /// order. None of them coincides with a current centroid.
    pub barycenters: Vec<BarycenterCandidate>,
    /// Largest objective decrease over the candidate barycenters.
    pub max_barycenter_decrease: f64,
    /// Indices into `barycenters` surviving the gamma2 filter.
    pub selected: Vec<usize>,
    /// One starting system per selected barycenter: the current centroids
    /// plus the barycenter appended.
    pub starting_systems: Vec<CentroidSystem>,
    /// Size of the reduced candidate pool when reduction was applied.
    pub reduced_pool: Option<usize>,
}

impl CandidateCascade {
    pub fn summary(&self) -> CascadeSummary {
        CascadeSummary {
            max_decrease: self.max_decrease,
            point_candidates: self.point_candidates.len(),
            barycenters: self.barycenters.len(),
            max_barycenter_decrease: self.max_barycenter_decrease,
            selected: self.selected.len(),
            starting_systems: self.starting_systems.len(),
            reduced_pool: self.reduced_pool,
        }
    }
}

/// Runs the full candidate cascade.
///
/// Fails with [`Error::DegenerateCandidates`] when every data point
/// coincides with a current centroid, which cannot happen for pairwise
/// distinct data while fewer centroids than points exist.
pub fn cascade(ctx: &AuxContext<'_>, gamma1: f64, gamma2: f64) -> Result<CandidateCascade> {
    cascade_impl(ctx, None, gamma1, gamma2)
}

/// Runs the cascade from a pre-restricted candidate pool (the data
/// reduction path). `candidates` replaces the gamma1 stage and must already
/// satisfy the caller's decrease threshold.
pub fn cascade_with_candidates(
    ctx: &AuxContext<'_>,
    candidates: &[usize],
    gamma2: f64,
) -> Result<CandidateCascade> {
    cascade_impl(ctx, Some(candidates), 1.0, gamma2)
}

fn cascade_impl(
    ctx: &AuxContext<'_>,
    override_candidates: Option<&[usize]>,
    gamma1: f64,
    gamma2: f64,
) -> Result<CandidateCascade> {
    let data = ctx.data();
    let admissible = ctx.data_in_improvement_region();
    if admissible.is_empty() {
        return Err(Error::DegenerateCandidates);
    }
    let decreases: Vec<f64> = admissible
        .iter()
        .map(|&i| ctx.decrease(data.point(i)))
        .collect();
    let max_decrease = decreases.iter().copied().fold(0.0, f64::max);

    let point_candidates: Vec<usize> = match override_candidates {
        Some(pool) => {
            if pool.is_empty() {
                return Err(Error::DegenerateCandidates);
            }
            pool.to_vec()
        }
        None => {
            let cutoff = gamma1 * max_decrease;
            admissible
                .iter()
                .zip(&decreases)
                .filter(|&(_, &z)| z >= cutoff)
                .map(|(&i, _)| i)
                .collect()
        }
    };

    // Replace each surviving point by the barycenter of the points it
    // would capture; the point captures at least itself. Distinct
    // barycenters only, first generator wins.
    let mut barycenters: Vec<BarycenterCandidate> = Vec::new();
    for &i in &point_candidates {
        let (captured, _) = ctx.partition_at(data.point(i));
        let point = data
            .barycenter_of(&captured)
            .expect("capture set contains its generator");
        if !barycenters.iter().any(|b| b.point == point) {
            barycenters.push(BarycenterCandidate { point, source: i });
        }
    }

    let barycenter_decreases: Vec<f64> =
        barycenters.iter().map(|b| ctx.decrease(&b.point)).collect();
    let max_barycenter_decrease = barycenter_decreases.iter().copied().fold(0.0, f64::max);
    let cutoff2 = gamma2 * max_barycenter_decrease;
    let selected: Vec<usize> = (0..barycenters.len())
        .filter(|&idx| barycenter_decreases[idx] >= cutoff2)
        .collect();

    let starting_systems: Vec<CentroidSystem> = selected
        .iter()
        .map(|&idx| ctx.xbar().extended(&barycenters[idx].point))
        .collect();

    Ok(CandidateCascade {
        max_decrease,
        point_candidates,
        barycenters,
        max_barycenter_decrease,
        selected,
        starting_systems,
        reduced_pool: None,
    })
}

/// Output of the starting-point procedure.
#[derive(Debug, Clone)]
pub struct Procedure1Output {
    /// Distinct new-centroid positions produced by the inner solver, in
    /// starting-system order.
    pub refined_points: Vec<Vec<f64>>,
    /// Auxiliary objective of each refined point.
    pub refined_objectives: Vec<f64>,
    /// Smallest refined objective.
    pub best_objective: f64,
    /// Refined points surviving the gamma3 filter: the starting points for
    /// the next level.
    pub starting_points: Vec<Vec<f64>>,
    pub cascade: CascadeSummary,
    /// Inner-solver sweeps per starting system, in enumeration order.
    pub km_iterations_per_candidate: Vec<usize>,
    /// Total inner-solver sweeps spent.
    pub km_iterations: usize,
}

/// Runs the cascade, refines every starting system with the inner solver,
/// and keeps the new-centroid positions whose auxiliary objective is within
/// `gamma3` of the best.
pub fn procedure1(
    data: &DataSet,
    xbar: &CentroidSystem,
    params: &ControlParams,
) -> Result<Procedure1Output> {
    let ctx = AuxContext::new(data, xbar);
    let casc = build_cascade(data, xbar, params, &ctx)?;
    let results = run_km_batch(
        data,
        &casc.starting_systems,
        params.tol_conv(),
        params.max_iter(),
    );
    let km_iterations_per_candidate: Vec<usize> = results.iter().map(|r| r.iterations).collect();
    let km_iterations = km_iterations_per_candidate.iter().sum();

    let mut refined_points: Vec<Vec<f64>> = Vec::new();
    for r in &results {
        let last = r.centroids.centroid(r.centroids.len() - 1).to_vec();
        if !refined_points.contains(&last) {
            refined_points.push(last);
        }
    }
    let refined_objectives: Vec<f64> = refined_points
        .iter()
        .map(|y| ctx.aux_objective(y))
        .collect();
    let best_objective = refined_objectives
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let cutoff = params.gamma3() * best_objective;
    let starting_points: Vec<Vec<f64>> = refined_points
        .iter()
        .zip(&refined_objectives)
        .filter(|&(_, &g)| g <= cutoff)
        .map(|(y, _)| y.clone())
        .collect();

    Ok(Procedure1Output {
        refined_points,
        refined_objectives,
        best_objective,
        starting_points,
        cascade: casc.summary(),
        km_iterations_per_candidate,
        km_iterations,
    })
}

/// Output of the new-system procedure.
#[derive(Debug, Clone)]
pub struct Procedure2Output {
    /// Number of distinct refined systems.
    pub refined: usize,
    /// Smallest refined objective.
    pub best_objective: f64,
    /// Refined systems surviving the gamma3 filter, with their objectives.
    pub kept: Vec<(CentroidSystem, f64)>,
    /// The selected system: smallest objective, ties to the lowest
    /// enumeration index.
    pub chosen: CentroidSystem,
    pub chosen_objective: f64,
    pub cascade: CascadeSummary,
    /// Inner-solver sweeps per starting system, in enumeration order.
    pub km_iterations_per_candidate: Vec<usize>,
    pub km_iterations: usize,
}

/// Runs the cascade and the inner solver like [`procedure1`], but keeps the
/// whole refined centroid system of each run and selects one of them.
///
/// The best refined objective equals the best auxiliary objective of
/// [`procedure1`] on the same input: each refined run ends at the same
/// system either way.
pub fn procedure2(
    data: &DataSet,
    xbar: &CentroidSystem,
    params: &ControlParams,
) -> Result<Procedure2Output> {
    let ctx = AuxContext::new(data, xbar);
    let casc = build_cascade(data, xbar, params, &ctx)?;
    let results = run_km_batch(
        data,
        &casc.starting_systems,
        params.tol_conv(),
        params.max_iter(),
    );
    let km_iterations_per_candidate: Vec<usize> = results.iter().map(|r| r.iterations).collect();
    let km_iterations = km_iterations_per_candidate.iter().sum();

    let mut refined: Vec<(CentroidSystem, f64)> = Vec::new();
    for r in &results {
        if !refined.iter().any(|(s, _)| s == &r.centroids) {
            refined.push((r.centroids.clone(), r.objective));
        }
    }
    let best_objective = refined
        .iter()
        .map(|&(_, f)| f)
        .fold(f64::INFINITY, f64::min);
    let cutoff = params.gamma3() * best_objective;
    let kept: Vec<(CentroidSystem, f64)> = refined
        .iter()
        .filter(|&&(_, f)| f <= cutoff)
        .cloned()
        .collect();
    let mut chosen_idx = 0;
    for (idx, &(_, f)) in kept.iter().enumerate() {
        if f < kept[chosen_idx].1 {
            chosen_idx = idx;
        }
    }
    let (chosen, chosen_objective) = kept[chosen_idx].clone();

    Ok(Procedure2Output {
        refined: refined.len(),
        best_objective,
        kept,
        chosen,
        chosen_objective,
        cascade: casc.summary(),
        km_iterations_per_candidate,
        km_iterations,
    })
}

fn build_cascade(
    data: &DataSet,
    xbar: &CentroidSystem,
    params: &ControlParams,
    ctx: &AuxContext<'_>,
) -> Result<CandidateCascade> {
    if params.reduction() {
        let assignment = natural_clustering(data, xbar);
        let delta = params.delta().min(1.0 / xbar.len() as f64);
        let stats = cluster_stats(data, xbar, &assignment, delta)?;
        let rule = if params.reduction_literal_eta1() {
            ReductionThreshold::LiteralEtaOne
        } else {
            ReductionThreshold::Gamma(params.gamma1())
        };
        let pool = reduced_candidates_with(ctx, &stats, rule);
        // Reduction is an accelerator, never a gate: fall back to the full
        // cascade when it filters everything out.
        if !pool.is_empty() {
            let mut casc = cascade_with_candidates(ctx, &pool, params.gamma2())?;
            casc.reduced_pool = Some(pool.len());
            return Ok(casc);
        }
    }
    cascade(ctx, params.gamma1(), params.gamma2())
}

/// Runs the inner solver from every starting system, in order.
///
/// Splits the work across at most `MSSC_THREADS` workers (default: the
/// machine's parallelism); results are collected by starting index, so the
/// output is identical to a serial run.
pub(crate) fn run_km_batch(
    data: &DataSet,
    starts: &[CentroidSystem],
    tol_conv: f64,
    max_iter: usize,
) -> Vec<KmResult> {
    let workers = worker_count(starts.len());
    if workers <= 1 {
        return starts
            .iter()
            .map(|x0| kmeans::run(data, x0, tol_conv, max_iter))
            .collect();
    }
    let chunk = starts.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .map(|batch| {
                scope.spawn(move || {
                    batch
                        .iter()
                        .map(|x0| kmeans::run(data, x0, tol_conv, max_iter))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("inner solver worker panicked"))
            .collect()
    })
}

fn worker_count(tasks: usize) -> usize {
    let hardware = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("MSSC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(hardware);
    cap.min(hardware).min(tasks).max(1)
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

    fn barycenter_system(data: &DataSet) -> CentroidSystem {
        CentroidSystem::new(vec![data.barycenter()]).unwrap()
    }

    fn params(g1: f64, g2: f64, g3: f64) -> ControlParams {
        ControlParams::new(g1, g2, g3).unwrap()
    }

    #[test]
    fn cascade_triangle_keeps_everything_at_small_gammas() {
        let d = triangle();
        let x = barycenter_system(&d);
        let ctx = AuxContext::new(&d, &x);
        let c = cascade(&ctx, 0.3, 0.3).unwrap();
        assert!((c.max_decrease - 5.0 / 27.0).abs() < 1e-15);
        assert_eq!(c.point_candidates, vec![0, 1, 2]);
        // Every point captures only itself, so the barycenters are the
        // points themselves.
        assert_eq!(c.barycenters.len(), 3);
        for (b, i) in c.barycenters.iter().zip(0..) {
            assert_eq!(b.point, d.point(i));
            assert_eq!(b.source, i);
        }
        assert!((c.max_barycenter_decrease - 5.0 / 27.0).abs() < 1e-15);
        assert_eq!(c.selected, vec![0, 1, 2]);
        assert_eq!(c.starting_systems.len(), 3);
    }

    #[test]
    fn cascade_square_is_symmetric_for_any_gammas() {
        let d = square();
        let x = barycenter_system(&d);
        let ctx = AuxContext::new(&d, &x);
        for (g1, g2) in [(0.3, 0.3), (0.5, 0.8), (0.85, 0.99), (1.0, 1.0)] {
            let c = cascade(&ctx, g1, g2).unwrap();
            assert!((c.max_decrease - 1.0 / 8.0).abs() < 1e-15);
            assert_eq!(c.point_candidates.len(), 4);
            assert_eq!(c.barycenters.len(), 4);
            assert!((c.max_barycenter_decrease - 1.0 / 8.0).abs() < 1e-15);
            assert_eq!(c.selected.len(), 4);
        }
    }

    #[test]
    fn cascade_gamma1_one_keeps_only_best_points() {
        let d = triangle();
        let x = barycenter_system(&d);
        let ctx = AuxContext::new(&d, &x);
        let c = cascade(&ctx, 1.0, 0.0).unwrap();
        assert_eq!(c.point_candidates, vec![1, 2]);
    }

    #[test]
    fn cascade_rejects_fully_covered_data() {
        let d = triangle();
        let x = CentroidSystem::new(d.points().to_vec()).unwrap();
        let ctx = AuxContext::new(&d, &x);
        assert!(matches!(
            cascade(&ctx, 0.3, 0.3),
            Err(Error::DegenerateCandidates)
        ));
    }

    #[test]
    fn procedure1_triangle_trace() {
        let d = triangle();
        let x = barycenter_system(&d);
        let out = procedure1(&d, &x, &params(0.3, 0.3, 3.0)).unwrap();
        assert_eq!(
            out.refined_points,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]
        );
        let expect_g = [10.0 / 27.0, 7.0 / 27.0, 7.0 / 27.0];
        for (got, want) in out.refined_objectives.iter().zip(expect_g) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((out.best_objective - 7.0 / 27.0).abs() < 1e-15);
        assert_eq!(out.starting_points, out.refined_points);
    }

    #[test]
    fn procedure1_gamma3_one_keeps_only_minimizers() {
        let d = triangle();
        let x = barycenter_system(&d);
        let out = procedure1(&d, &x, &params(0.3, 0.3, 1.0)).unwrap();
        assert_eq!(out.starting_points, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn procedure1_square_keeps_all_corners() {
        let d = square();
        let x = barycenter_system(&d);
        let out = procedure1(&d, &x, &params(0.3, 0.3, 3.0)).unwrap();
        assert_eq!(out.refined_points.len(), 4);
        for p in &out.refined_points {
            assert!(d.points().contains(p));
        }
        assert!((out.best_objective - 3.0 / 8.0).abs() < 1e-15);
        assert_eq!(out.starting_points.len(), 4);
    }

    #[test]
    fn procedure2_triangle_refined_systems() {
        let d = triangle();
        let x = barycenter_system(&d);
        let out = procedure2(&d, &x, &params(0.3, 0.3, 3.0)).unwrap();
        assert_eq!(out.refined, 3);
        assert!((out.best_objective - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(out.kept.len(), 3);
        // Lowest-index minimizer.
        let chosen = &out.chosen;
        assert!((chosen.centroid(0)[1] - 0.5).abs() < 1e-15);
        assert_eq!(chosen.centroid(1), &[1.0, 0.0]);
        assert!((out.chosen_objective - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn procedure2_square_keeps_four_systems() {
        let d = square();
        let x = barycenter_system(&d);
        for g in [(0.3, 0.3, 3.0), (0.5, 0.8, 1.5), (0.85, 0.99, 1.1)] {
            let out = procedure2(&d, &x, &params(g.0, g.1, g.2)).unwrap();
            assert_eq!(out.refined, 4);
            assert!((out.best_objective - 1.0 / 3.0).abs() < 1e-15);
            assert_eq!(out.kept.len(), 4);
        }
    }

    #[test]
    fn procedure2_refines_at_least_as_far_as_procedure1_scores() {
        // Procedure 1 scores each refined point against the *frozen*
        // current centroids, procedure 2 scores the whole refined system;
        // the refined system is never worse on these fixtures.
        let p = params(0.3, 0.3, 3.0);
        for (d, expect_one, expect_two) in [
            (triangle(), 7.0 / 27.0, 1.0 / 6.0),
            (square(), 3.0 / 8.0, 1.0 / 3.0),
        ] {
            let x = barycenter_system(&d);
            let one = procedure1(&d, &x, &p).unwrap();
            let two = procedure2(&d, &x, &p).unwrap();
            assert!((one.best_objective - expect_one).abs() < 1e-15);
            assert!((two.best_objective - expect_two).abs() < 1e-15);
            assert!(two.best_objective <= one.best_objective + 1e-12);
        }
    }

    #[test]
    fn barycenter_candidates_never_hit_current_centroids() {
        let d = DataSet::new(vec![
            vec![0.0, 0.0],
            vec![0.5, 0.1],
            vec![4.0, 4.0],
            vec![4.5, 3.9],
            vec![8.0, 0.0],
        ])
        .unwrap();
        let x = barycenter_system(&d);
        let ctx = AuxContext::new(&d, &x);
        let c = cascade(&ctx, 0.0, 0.0).unwrap();
        for b in &c.barycenters {
            assert_ne!(b.point.as_slice(), x.centroid(0));
            // The barycenter decreases the objective at least as much as
            // its generator.
            let z_src = ctx.decrease(d.point(b.source));
            let z_bar = ctx.decrease(&b.point);
            assert!(z_bar >= z_src - 1e-12);
        }
    }
}
