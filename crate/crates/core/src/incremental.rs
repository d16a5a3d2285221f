//! The incremental drivers.
//!
//! Both versions grow a centroid system one centroid at a time, starting
//! from the data barycenter. Version 1 treats each level's refined
//! candidates as *starting points only*: it re-runs the inner solver from
//! the frozen current centroids plus each candidate, discarding the rest
//! of the refined system. Version 2 keeps the whole refined system of the
//! winning candidate, which avoids that wasted work and guarantees
//! pairwise distinct centroids throughout.

use std::time::Instant;

use crate::clustering::{
    distance_evaluations, mssc_objective, natural_clustering, Assignment, CentroidSystem,
};
use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::params::ControlParams;
use crate::seeding::{procedure1, procedure2, run_km_batch};
use crate::trace::{LevelTrace, RunTrace};

/// Control-parameter triple recommended for a data set of `m` points:
/// permissive filters for small sets, aggressive pruning for large ones.
pub fn recommend_gammas(m: usize) -> (f64, f64, f64) {
    if m <= 200 {
        (0.3, 0.3, 3.0)
    } else if m <= 6000 {
        (0.5, 0.8, 1.5)
    } else {
        (0.85, 0.99, 1.1)
    }
}

fn check_instance(data: &DataSet, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    if k > data.len() {
        return Err(Error::TooManyClusters { k, m: data.len() });
    }
    if !data.is_pairwise_distinct() {
        return Err(Error::DuplicatePoints);
    }
    Ok(())
}

/// Version 1: each level takes the refined starting points, restarts the
/// inner solver from the frozen current system plus each point, and keeps
/// the run with the smallest objective (ties to the lowest candidate
/// index).
pub fn version1(
    data: &DataSet,
    k: usize,
    params: &ControlParams,
) -> Result<(CentroidSystem, RunTrace)> {
    check_instance(data, k)?;
    let started = Instant::now();
    let evals_before = distance_evaluations();

    let mut xbar = CentroidSystem::new(vec![data.barycenter()])?;
    let initial_objective = mssc_objective(data, &xbar);
    let mut levels = Vec::with_capacity(k - 1);

    for level in 1..k {
        let seeds = procedure1(data, &xbar, params)?;
        let starts: Vec<CentroidSystem> = seeds
            .starting_points
            .iter()
            .map(|y| xbar.extended(y))
            .collect();
        let results = run_km_batch(data, &starts, params.tol_conv(), params.max_iter());
        let mut best = 0;
        for (idx, r) in results.iter().enumerate() {
            if r.objective < results[best].objective {
                best = idx;
            }
        }
        let mut per_candidate = seeds.km_iterations_per_candidate.clone();
        per_candidate.extend(results.iter().map(|r| r.iterations));
        let km_iterations = per_candidate.iter().sum();
        let chosen = results[best].centroids.clone();
        let chosen_objective = results[best].objective;
        levels.push(LevelTrace {
            level,
            cascade: seeds.cascade,
            refined: seeds.refined_points.len(),
            best_candidate_objective: seeds.best_objective,
            kept: seeds.starting_points.len(),
            km_iterations_per_candidate: per_candidate,
            km_iterations,
            chosen: chosen.centroids().to_vec(),
            chosen_objective,
        });
        xbar = chosen;
    }

    let final_objective = levels
        .last()
        .map_or(initial_objective, |l| l.chosen_objective);
    let trace = RunTrace {
        initial_objective,
        levels,
        final_objective,
        wall_time: started.elapsed(),
        distance_evals: distance_evaluations() - evals_before,
    };
    Ok((xbar, trace))
}

/// Version 2: each level adopts the refined system selected by the
/// new-system procedure. The final system is the minimizer among the last
/// level's kept candidates (ties to the lowest index), and its
/// nearest-centroid clustering is returned alongside.
pub fn version2(
    data: &DataSet,
    k: usize,
    params: &ControlParams,
) -> Result<(CentroidSystem, Assignment, RunTrace)> {
    check_instance(data, k)?;
    let started = Instant::now();
    let evals_before = distance_evaluations();

    let mut xbar = CentroidSystem::new(vec![data.barycenter()])?;
    let initial_objective = mssc_objective(data, &xbar);
    let mut levels = Vec::with_capacity(k - 1);

    for level in 1..k {
        let out = procedure2(data, &xbar, params)?;
        levels.push(LevelTrace {
            level,
            cascade: out.cascade.clone(),
            refined: out.refined,
            best_candidate_objective: out.best_objective,
            kept: out.kept.len(),
            km_iterations_per_candidate: out.km_iterations_per_candidate.clone(),
            km_iterations: out.km_iterations,
            chosen: out.chosen.centroids().to_vec(),
            chosen_objective: out.chosen_objective,
        });
        xbar = out.chosen;
    }

    let final_objective = levels
        .last()
        .map_or(initial_objective, |l| l.chosen_objective);
    let assignment = natural_clustering(data, &xbar);
    let trace = RunTrace {
        initial_objective,
        levels,
        final_objective,
        wall_time: started.elapsed(),
        distance_evals: distance_evaluations() - evals_before,
    };
    Ok((xbar, assignment, trace))
}
