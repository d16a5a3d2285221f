//! C ABI for the clustering library.
//!
//! Data sets and clustering results live behind opaque handles; every
//! fallible call returns an [`MsscStatus`] and writes its result through
//! out-pointers. Points and centroids cross the boundary as row-major
//! `f64` buffers. Input points are deduplicated on construction (weights
//! keep objectives equal to the raw multiset), and labels are reported
//! per original input row.

use std::ptr;

use mssc::clustering::{natural_clustering, CentroidSystem};
use mssc::dataset::{dedup_with_map, DataSet};
use mssc::error::Error;
use mssc::params::ControlParams;
use mssc::verify::Classification;
use mssc::{incremental, kmeans, recommend_gammas, verify};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsscStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range (k, gammas, tolerances, buffer sizes).
    InvalidArgument = 2,
    /// The point buffer contained non-finite values or had a bad shape.
    InvalidData = 3,
    /// The exact solver would exceed its partition cap.
    CapExceeded = 4,
}

/// Incremental driver variant.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsscAlgorithm {
    /// Re-seeds the inner solver from frozen centroids each level.
    V1 = 0,
    /// Carries whole refined systems between levels.
    V2 = 1,
}

/// Outcome of the local-optimality check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsscClassification {
    NontrivialLocalSolution = 0,
    FailsNecessary = 1,
    IndeterminateTies = 2,
}

/// Control parameters for the incremental drivers. Obtain defaults from
/// [`mssc_params_default`] and override fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MsscParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Far-point reduction coefficient in (0, 1).
    pub delta: f64,
    /// Inner-solver stopping displacement (Euclidean norm).
    pub tol_conv: f64,
    /// Inner-solver iteration cap.
    pub max_iter: usize,
    /// Enable the far-point candidate reduction.
    pub use_reduction: bool,
}

/// Opaque data-set handle.
pub struct MsscDataset {
    data: DataSet,
    dedup_map: Vec<usize>,
    raw_len: usize,
}

/// Opaque clustering-result handle.
pub struct MsscClustering {
    centroids: Vec<Vec<f64>>,
    dim: usize,
    /// One label per original input row.
    labels: Vec<usize>,
    objective: f64,
    iterations: usize,
    converged: bool,
}

fn status_of(err: &Error) -> MsscStatus {
    match err {
        Error::PartitionCapExceeded { .. } => MsscStatus::CapExceeded,
        Error::EmptyDataSet
        | Error::DimensionMismatch { .. }
        | Error::NonFiniteCoordinate { .. }
        | Error::ZeroWeight { .. }
        | Error::DuplicatePoints => MsscStatus::InvalidData,
        _ => MsscStatus::InvalidArgument,
    }
}

unsafe fn slice_from<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

/// Creates a data set from `m` points of dimension `n`, stored row-major in
/// `points`. Coinciding points are merged with multiplicity bookkeeping.
///
/// # Safety
/// `points` must reference at least `m * n` readable doubles and `out` must
/// be a valid pointer. The handle must be released with
/// [`mssc_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn mssc_dataset_new(
    points: *const f64,
    m: usize,
    n: usize,
    out: *mut *mut MsscDataset,
) -> MsscStatus {
    if out.is_null() {
        return MsscStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let Some(buffer) = slice_from(points, m.saturating_mul(n)) else {
        return MsscStatus::NullPointer;
    };
    if m == 0 || n == 0 {
        return MsscStatus::InvalidData;
    }
    let rows: Vec<Vec<f64>> = buffer.chunks(n).map(<[f64]>::to_vec).collect();
    match DataSet::new(rows) {
        Ok(raw) => {
            let raw_len = raw.len();
            let (data, dedup_map) = dedup_with_map(&raw);
            *out = Box::into_raw(Box::new(MsscDataset {
                data,
                dedup_map,
                raw_len,
            }));
            MsscStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a data-set handle; null is ignored.
///
/// # Safety
/// `ds` must have come from [`mssc_dataset_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mssc_dataset_free(ds: *mut MsscDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of distinct points after deduplication.
///
/// # Safety
/// `ds` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mssc_dataset_len(ds: *const MsscDataset, out: *mut usize) -> MsscStatus {
    let (Some(ds), false) = (ds.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = ds.data.len();
    MsscStatus::Ok
}

/// Point dimension.
///
/// # Safety
/// `ds` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mssc_dataset_dim(ds: *const MsscDataset, out: *mut usize) -> MsscStatus {
    let (Some(ds), false) = (ds.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = ds.data.dim();
    MsscStatus::Ok
}

/// Default parameters with the gamma triple recommended for `m` points.
#[no_mangle]
pub extern "C" fn mssc_params_default(m: usize) -> MsscParams {
    let (gamma1, gamma2, gamma3) = recommend_gammas(m);
    MsscParams {
        gamma1,
        gamma2,
        gamma3,
        delta: 1e-3,
        tol_conv: 0.0,
        max_iter: 1000,
        use_reduction: false,
    }
}

/// Writes the recommended gamma triple for `m` points.
///
/// # Safety
/// All three out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mssc_recommend_gammas(
    m: usize,
    gamma1: *mut f64,
    gamma2: *mut f64,
    gamma3: *mut f64,
) -> MsscStatus {
    if gamma1.is_null() || gamma2.is_null() || gamma3.is_null() {
        return MsscStatus::NullPointer;
    }
    let (g1, g2, g3) = recommend_gammas(m);
    *gamma1 = g1;
    *gamma2 = g2;
    *gamma3 = g3;
    MsscStatus::Ok
}

fn control_params(params: &MsscParams) -> Result<ControlParams, Error> {
    Ok(
        ControlParams::new(params.gamma1, params.gamma2, params.gamma3)?
            .with_delta(params.delta)?
            .with_tol_conv(params.tol_conv)?
            .with_max_iter(params.max_iter)?
            .with_reduction(params.use_reduction),
    )
}

fn clustering_handle(
    ds: &MsscDataset,
    centroids: CentroidSystem,
    objective: f64,
    iterations: usize,
    converged: bool,
) -> MsscClustering {
    let assignment = natural_clustering(&ds.data, &centroids);
    let labels = (0..ds.raw_len)
        .map(|raw| assignment.cluster_of[ds.dedup_map[raw]])
        .collect();
    MsscClustering {
        dim: centroids.dim(),
        centroids: centroids.into_centroids(),
        labels,
        objective,
        iterations,
        converged,
    }
}

/// Runs an incremental driver and returns a clustering handle.
///
/// # Safety
/// `ds`, `params`, and `out` must be valid pointers; the handle must be
/// released with [`mssc_clustering_free`].
#[no_mangle]
pub unsafe extern "C" fn mssc_cluster(
    ds: *const MsscDataset,
    k: usize,
    algorithm: MsscAlgorithm,
    params: *const MsscParams,
    out: *mut *mut MsscClustering,
) -> MsscStatus {
    let (Some(ds), Some(params), false) = (ds.as_ref(), params.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = ptr::null_mut();
    let control = match control_params(params) {
        Ok(c) => c,
        Err(e) => return status_of(&e),
    };
    let outcome = match algorithm {
        MsscAlgorithm::V1 => incremental::version1(&ds.data, k, &control).map(|(x, trace)| {
            let iterations = trace.levels.iter().map(|l| l.km_iterations).sum();
            (x, trace.final_objective, iterations)
        }),
        MsscAlgorithm::V2 => incremental::version2(&ds.data, k, &control).map(|(x, _, trace)| {
            let iterations = trace.levels.iter().map(|l| l.km_iterations).sum();
            (x, trace.final_objective, iterations)
        }),
    };
    match outcome {
        Ok((x, objective, iterations)) => {
            let handle = clustering_handle(ds, x, objective, iterations, true);
            *out = Box::into_raw(Box::new(handle));
            MsscStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Runs plain k-means from `k` initial centroids (row-major in `init`).
///
/// # Safety
/// `ds` and `out` must be valid; `init` must reference `k * dim` readable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn mssc_kmeans(
    ds: *const MsscDataset,
    init: *const f64,
    k: usize,
    tol_conv: f64,
    max_iter: usize,
    out: *mut *mut MsscClustering,
) -> MsscStatus {
    let (Some(ds), false) = (ds.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = ptr::null_mut();
    if k == 0 || max_iter == 0 || tol_conv.is_nan() || tol_conv < 0.0 {
        return MsscStatus::InvalidArgument;
    }
    let dim = ds.data.dim();
    let Some(buffer) = slice_from(init, k.saturating_mul(dim)) else {
        return MsscStatus::NullPointer;
    };
    let rows: Vec<Vec<f64>> = buffer.chunks(dim).map(<[f64]>::to_vec).collect();
    let x0 = match CentroidSystem::new(rows) {
        Ok(x0) => x0,
        Err(e) => return status_of(&e),
    };
    let result = kmeans::run(&ds.data, &x0, tol_conv, max_iter);
    let handle = clustering_handle(
        ds,
        result.centroids,
        result.objective,
        result.iterations,
        result.converged,
    );
    *out = Box::into_raw(Box::new(handle));
    MsscStatus::Ok
}

/// Releases a clustering handle; null is ignored.
///
/// # Safety
/// `c` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_free(c: *mut MsscClustering) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of centroids.
///
/// # Safety
/// `c` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_k(
    c: *const MsscClustering,
    out: *mut usize,
) -> MsscStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = c.centroids.len();
    MsscStatus::Ok
}

/// Objective value of the clustering.
///
/// # Safety
/// `c` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_objective(
    c: *const MsscClustering,
    out: *mut f64,
) -> MsscStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = c.objective;
    MsscStatus::Ok
}

/// Total inner-solver iterations spent.
///
/// # Safety
/// `c` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_iterations(
    c: *const MsscClustering,
    out: *mut usize,
) -> MsscStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = c.iterations;
    MsscStatus::Ok
}

/// Whether the run converged within its iteration cap. Meaningful for
/// [`mssc_kmeans`] results; the incremental drivers and the exact solver
/// always report true.
///
/// # Safety
/// `c` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_converged(
    c: *const MsscClustering,
    out: *mut bool,
) -> MsscStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    *out = c.converged;
    MsscStatus::Ok
}

/// Copies the centroids row-major into `buffer` (`len >= k * dim`).
///
/// # Safety
/// `c` must be valid and `buffer` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_centroids(
    c: *const MsscClustering,
    buffer: *mut f64,
    len: usize,
) -> MsscStatus {
    let Some(c) = c.as_ref() else {
        return MsscStatus::NullPointer;
    };
    if buffer.is_null() {
        return MsscStatus::NullPointer;
    }
    let needed = c.centroids.len() * c.dim;
    if len < needed {
        return MsscStatus::InvalidArgument;
    }
    let out = std::slice::from_raw_parts_mut(buffer, needed);
    for (row, centroid) in out.chunks_mut(c.dim).zip(&c.centroids) {
        row.copy_from_slice(centroid);
    }
    MsscStatus::Ok
}

/// Copies one cluster label per original input row into `buffer`
/// (`len >= m_raw`).
///
/// # Safety
/// `c` must be valid and `buffer` writable for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn mssc_clustering_labels(
    c: *const MsscClustering,
    buffer: *mut usize,
    len: usize,
) -> MsscStatus {
    let Some(c) = c.as_ref() else {
        return MsscStatus::NullPointer;
    };
    if buffer.is_null() {
        return MsscStatus::NullPointer;
    }
    if len < c.labels.len() {
        return MsscStatus::InvalidArgument;
    }
    let out = std::slice::from_raw_parts_mut(buffer, c.labels.len());
    out.copy_from_slice(&c.labels);
    MsscStatus::Ok
}

/// Classifies a candidate centroid system (row-major, `k` rows) against
/// the local-optimality conditions with absolute tolerance `tol`.
///
/// # Safety
/// `ds` and `out` must be valid; `centroids` must reference `k * dim`
/// readable doubles.
#[no_mangle]
pub unsafe extern "C" fn mssc_verify(
    ds: *const MsscDataset,
    centroids: *const f64,
    k: usize,
    tol: f64,
    out: *mut MsscClassification,
) -> MsscStatus {
    let (Some(ds), false) = (ds.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    if k == 0 || tol.is_nan() || tol < 0.0 {
        return MsscStatus::InvalidArgument;
    }
    let dim = ds.data.dim();
    let Some(buffer) = slice_from(centroids, k.saturating_mul(dim)) else {
        return MsscStatus::NullPointer;
    };
    let rows: Vec<Vec<f64>> = buffer.chunks(dim).map(<[f64]>::to_vec).collect();
    let system = match CentroidSystem::new(rows) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let report = verify::verify_local(&ds.data, &system, tol);
    *out = match report.classification {
        Classification::NontrivialLocalSolution => MsscClassification::NontrivialLocalSolution,
        Classification::FailsNecessary => MsscClassification::FailsNecessary,
        Classification::IndeterminateTies => MsscClassification::IndeterminateTies,
    };
    MsscStatus::Ok
}

/// Solves a desk-scale instance exactly. Writes the global minimum to
/// `objective`, the number of distinct global minimizers to `num_optima`,
/// and returns the first minimizer as a clustering handle.
///
/// # Safety
/// All pointers must be valid; the handle must be released with
/// [`mssc_clustering_free`].
#[no_mangle]
pub unsafe extern "C" fn mssc_oracle(
    ds: *const MsscDataset,
    k: usize,
    cap: u64,
    objective: *mut f64,
    num_optima: *mut usize,
    out: *mut *mut MsscClustering,
) -> MsscStatus {
    let (Some(ds), false) = (ds.as_ref(), out.is_null()) else {
        return MsscStatus::NullPointer;
    };
    if objective.is_null() || num_optima.is_null() {
        return MsscStatus::NullPointer;
    }
    *out = ptr::null_mut();
    match verify::brute_force_global(&ds.data, k, cap) {
        Ok(outcome) => {
            *objective = outcome.objective;
            *num_optima = outcome.optima.len();
            let handle = clustering_handle(ds, outcome.best, outcome.objective, 0, true);
            *out = Box::into_raw(Box::new(handle));
            MsscStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
