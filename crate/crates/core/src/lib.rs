//! Minimum sum-of-squares clustering with incremental seeding.
//!
//! The library solves the classic task of partitioning a finite point set
//! into `k` clusters so that the mean squared distance from each point to
//! its cluster centroid is as small as possible. Centroid systems are
//! built one centroid at a time: each level picks candidate positions for
//! the next centroid by how much they lower the objective, polishes them
//! with k-means, and carries the best system forward. Two driver variants
//! are provided ([`incremental::version1`] re-seeds from frozen centroids,
//! [`incremental::version2`] keeps whole refined systems), along with a
//! far-point data reduction for large sets, a local-optimality verifier,
//! and an exact enumeration solver for desk-scale instances.
//!
//! All operations are pure functions over immutable inputs and safe to
//! call concurrently. Candidate refinement fans out across threads
//! (capped by the `MSSC_THREADS` environment variable) with results
//! collected in deterministic order, so outputs are identical to serial
//! runs.

pub mod auxiliary;
pub mod clustering;
pub mod dataset;
pub mod error;
pub mod incremental;
pub mod io;
pub mod kmeans;
pub mod params;
pub mod reduction;
pub mod seeding;
pub mod trace;
pub mod verify;

pub use auxiliary::AuxContext;
pub use clustering::{
    assignment_objective, dist_sq, mssc_objective, natural_clustering, Assignment, CentroidSystem,
};
pub use dataset::{dedup, dedup_with_map, DataSet};
pub use error::{Error, Result};
pub use incremental::{recommend_gammas, version1, version2};
pub use kmeans::KmResult;
pub use params::ControlParams;
pub use trace::{LevelTrace, RunTrace};
pub use verify::{
    brute_force_global, verify_local, Classification, OracleOutcome, VerifyReport,
    DEFAULT_PARTITION_CAP,
};
