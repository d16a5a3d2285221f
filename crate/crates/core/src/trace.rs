//! Run traces for the incremental drivers.

use std::time::Duration;

use serde_json::{json, Value};

/// Per-level summary of the candidate cascade.
#[derive(Debug, Clone)]
pub struct CascadeSummary {
    /// Largest objective decrease over admissible data points.
    pub max_decrease: f64,
    /// Number of data points kept by the gamma1 filter.
    pub point_candidates: usize,
    /// Number of distinct candidate barycenters.
    pub barycenters: usize,
    /// Largest objective decrease over candidate barycenters.
    pub max_barycenter_decrease: f64,
    /// Number of barycenters kept by the gamma2 filter.
    pub selected: usize,
    /// Number of starting systems handed to the inner solver.
    pub starting_systems: usize,
    /// Size of the reduced candidate pool, when reduction was applied.
    pub reduced_pool: Option<usize>,
}

/// Record of one incremental level (growing `level` centroids to
/// `level + 1`).
#[derive(Debug, Clone)]
pub struct LevelTrace {
    pub level: usize,
    pub cascade: CascadeSummary,
    /// Distinct refined candidates after the inner solver runs.
    pub refined: usize,
    /// Best candidate objective at this level.
    pub best_candidate_objective: f64,
    /// Candidates surviving the gamma3 filter.
    pub kept: usize,
    /// Inner-solver sweeps per candidate run, in enumeration order (for
    /// the re-seeding driver the restart runs follow the candidate runs).
    pub km_iterations_per_candidate: Vec<usize>,
    /// Total inner-solver sweeps spent on this level.
    pub km_iterations: usize,
    /// The centroid system chosen for the next level.
    pub chosen: Vec<Vec<f64>>,
    /// Objective of the chosen system.
    pub chosen_objective: f64,
}

/// Full trace of an incremental run.
///
/// `wall_time` is kept for diagnostics but never serialized: output files
/// must be byte-identical across runs of the same input.
#[derive(Debug, Clone)]
pub struct RunTrace {
    /// Objective of the single-centroid start (the data barycenter).
    pub initial_objective: f64,
    pub levels: Vec<LevelTrace>,
    pub final_objective: f64,
    pub wall_time: Duration,
    pub distance_evals: u64,
}

impl RunTrace {
    /// The objective sequence `f_1 >= f_2 >= ... >= f_k` across levels.
    pub fn objective_sequence(&self) -> Vec<f64> {
        let mut seq = vec![self.initial_objective];
        seq.extend(self.levels.iter().map(|l| l.chosen_objective));
        seq
    }

    /// JSON form without per-level centroid systems.
    pub fn summary_value(&self) -> Value {
        self.to_value(false)
    }

    /// JSON form including the chosen centroid system of every level.
    pub fn full_value(&self) -> Value {
        self.to_value(true)
    }

    fn to_value(&self, include_systems: bool) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|l| {
                let mut level = json!({
                    "level": l.level,
                    "max_decrease": l.cascade.max_decrease,
                    "point_candidates": l.cascade.point_candidates,
                    "barycenters": l.cascade.barycenters,
                    "max_barycenter_decrease": l.cascade.max_barycenter_decrease,
                    "selected": l.cascade.selected,
                    "starting_systems": l.cascade.starting_systems,
                    "refined": l.refined,
                    "best_candidate_objective": l.best_candidate_objective,
                    "kept": l.kept,
                    "km_iterations": l.km_iterations,
                    "objective": l.chosen_objective,
                });
                if let Some(pool) = l.cascade.reduced_pool {
                    level["reduced_pool"] = json!(pool);
                }
                if include_systems {
                    level["chosen"] = json!(l.chosen);
                    level["km_iterations_per_candidate"] = json!(l.km_iterations_per_candidate);
                }
                level
            })
            .collect();
        json!({
            "initial_objective": self.initial_objective,
            "levels": levels,
            "final_objective": self.final_objective,
            "distance_evals": self.distance_evals,
        })
    }
}
