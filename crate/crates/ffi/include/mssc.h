#ifndef MSSC_H
#define MSSC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum MsscStatus {
  MSSC_STATUS_OK = 0,
  // A required pointer argument was null.
  MSSC_STATUS_NULL_POINTER = 1,
  // An argument was out of range (k, gammas, tolerances, buffer sizes).
  MSSC_STATUS_INVALID_ARGUMENT = 2,
  // The point buffer contained non-finite values or had a bad shape.
  MSSC_STATUS_INVALID_DATA = 3,
  // The exact solver would exceed its partition cap.
  MSSC_STATUS_CAP_EXCEEDED = 4,
} MsscStatus;

// Incremental driver variant.
typedef enum MsscAlgorithm {
  // Re-seeds the inner solver from frozen centroids each level.
  MSSC_ALGORITHM_V1 = 0,
  // Carries whole refined systems between levels.
  MSSC_ALGORITHM_V2 = 1,
} MsscAlgorithm;

// Outcome of the local-optimality check.
typedef enum MsscClassification {
  MSSC_CLASSIFICATION_NONTRIVIAL_LOCAL_SOLUTION = 0,
  MSSC_CLASSIFICATION_FAILS_NECESSARY = 1,
  MSSC_CLASSIFICATION_INDETERMINATE_TIES = 2,
} MsscClassification;

// Opaque clustering-result handle.
typedef struct MsscClustering MsscClustering;

// Opaque data-set handle.
typedef struct MsscDataset MsscDataset;

// Control parameters for the incremental drivers. Obtain defaults from
// [`mssc_params_default`] and override fields as needed.
typedef struct MsscParams {
  double gamma1;
  double gamma2;
  double gamma3;
  // Far-point reduction coefficient in (0, 1).
  double delta;
  // Inner-solver stopping displacement (Euclidean norm).
  double tol_conv;
  // Inner-solver iteration cap.
  size_t max_iter;
  // Enable the far-point candidate reduction.
  bool use_reduction;
} MsscParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a data set from `m` points of dimension `n`, stored row-major in
// `points`. Coinciding points are merged with multiplicity bookkeeping.
//
// # Safety
// `points` must reference at least `m * n` readable doubles and `out` must
// be a valid pointer. The handle must be released with
// [`mssc_dataset_free`].
enum MsscStatus mssc_dataset_new(const double *points,
                                 size_t m,
                                 size_t n,
                                 struct MsscDataset **out);

// Releases a data-set handle; null is ignored.
//
// # Safety
// `ds` must have come from [`mssc_dataset_new`] and not be freed twice.
void mssc_dataset_free(struct MsscDataset *ds);

// Number of distinct points after deduplication.
//
// # Safety
// `ds` and `out` must be valid pointers.
enum MsscStatus mssc_dataset_len(const struct MsscDataset *ds, size_t *out);

// Point dimension.
//
// # Safety
// `ds` and `out` must be valid pointers.
enum MsscStatus mssc_dataset_dim(const struct MsscDataset *ds, size_t *out);

// Default parameters with the gamma triple recommended for `m` points.
struct MsscParams mssc_params_default(size_t m);

// Writes the recommended gamma triple for `m` points.
//
// # Safety
// All three out-pointers must be valid.
enum MsscStatus mssc_recommend_gammas(size_t m, double *gamma1, double *gamma2, double *gamma3);

// Runs an incremental driver and returns a clustering handle.
//
// # Safety
// `ds`, `params`, and `out` must be valid pointers; the handle must be
// released with [`mssc_clustering_free`].
enum MsscStatus mssc_cluster(const struct MsscDataset *ds,
                             size_t k,
                             enum MsscAlgorithm algorithm,
                             const struct MsscParams *params,
                             struct MsscClustering **out);

// Runs plain k-means from `k` initial centroids (row-major in `init`).
//
// # Safety
// `ds` and `out` must be valid; `init` must reference `k * dim` readable
// doubles.
enum MsscStatus mssc_kmeans(const struct MsscDataset *ds,
                            const double *init,
                            size_t k,
                            double tol_conv,
                            size_t max_iter,
                            struct MsscClustering **out);

// Releases a clustering handle; null is ignored.
//
// # Safety
// `c` must have come from this library and not be freed twice.
void mssc_clustering_free(struct MsscClustering *c);

// Number of centroids.
//
// # Safety
// `c` and `out` must be valid pointers.
enum MsscStatus mssc_clustering_k(const struct MsscClustering *c, size_t *out);

// Objective value of the clustering.
//
// # Safety
// `c` and `out` must be valid pointers.
enum MsscStatus mssc_clustering_objective(const struct MsscClustering *c, double *out);

// Total inner-solver iterations spent.
//
// # Safety
// `c` and `out` must be valid pointers.
enum MsscStatus mssc_clustering_iterations(const struct MsscClustering *c, size_t *out);

// Whether the run converged within its iteration cap. Meaningful for
// [`mssc_kmeans`] results; the incremental drivers and the exact solver
// always report true.
//
// # Safety
// `c` and `out` must be valid pointers.
enum MsscStatus mssc_clustering_converged(const struct MsscClustering *c, bool *out);

// Copies the centroids row-major into `buffer` (`len >= k * dim`).
//
// # Safety
// `c` must be valid and `buffer` writable for `len` doubles.
enum MsscStatus mssc_clustering_centroids(const struct MsscClustering *c,
                                          double *buffer,
                                          size_t len);

// Copies one cluster label per original input row into `buffer`
// (`len >= m_raw`).
//
// # Safety
// `c` must be valid and `buffer` writable for `len` entries.
enum MsscStatus mssc_clustering_labels(const struct MsscClustering *c, size_t *buffer, size_t len);

// Classifies a candidate centroid system (row-major, `k` rows) against
// the local-optimality conditions with absolute tolerance `tol`.
//
// # Safety
// `ds` and `out` must be valid; `centroids` must reference `k * dim`
// readable doubles.
enum MsscStatus mssc_verify(const struct MsscDataset *ds,
                            const double *centroids,
                            size_t k,
                            double tol,
                            enum MsscClassification *out);

// Solves a desk-scale instance exactly. Writes the global minimum to
// `objective`, the number of distinct global minimizers to `num_optima`,
// and returns the first minimizer as a clustering handle.
//
// # Safety
// All pointers must be valid; the handle must be released with
// [`mssc_clustering_free`].
enum MsscStatus mssc_oracle(const struct MsscDataset *ds,
                            size_t k,
                            uint64_t cap,
                            double *objective,
                            size_t *num_optima,
                            struct MsscClustering **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MSSC_H */
