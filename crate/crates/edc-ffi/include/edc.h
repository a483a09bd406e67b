#ifndef EDC_H
#define EDC_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Error codes returned by every API function.
 */
typedef enum EdcStatus {
  EDC_STATUS_OK = 0,
  EDC_STATUS_NULL_POINTER = 1,
  EDC_STATUS_INVALID_ARGUMENT = 2,
  EDC_STATUS_RUNTIME_ERROR = 3,
} EdcStatus;

/**
 * Algorithm variant.
 */
typedef enum EdcAlgorithm {
  /**
   * Eigenspace transform + random decomposition.
   */
  EDC_ALGORITHM_EDC = 0,
  /**
   * Decomposition in the original space (transform ablation).
   */
  EDC_ALGORITHM_ODC = 1,
  /**
   * Plain Gaussian EDA on the full problem.
   */
  EDC_ALGORITHM_GSMGEDA = 2,
} EdcAlgorithm;

/**
 * Benchmark function family.
 */
typedef enum EdcFamily {
  EDC_FAMILY_SPHERE = 0,
  EDC_FAMILY_SCHWEFEL12 = 1,
  EDC_FAMILY_ELLIPTIC = 2,
  EDC_FAMILY_RASTRIGIN = 3,
  EDC_FAMILY_ACKLEY = 4,
  EDC_FAMILY_ROSENBROCK = 5,
} EdcFamily;

/**
 * Rotation structure of a benchmark function.
 */
typedef enum EdcRotation {
  /**
   * Axis-aligned; `group_size` is ignored.
   */
  EDC_ROTATION_NONE = 0,
  /**
   * One full-dimension rotation; `group_size` is ignored.
   */
  EDC_ROTATION_FULL = 1,
  /**
   * Independent rotations on consecutive groups of `group_size`.
   */
  EDC_ROTATION_GROUPED = 2,
} EdcRotation;

/**
 * Opaque benchmark function handle.
 */
typedef struct EdcFunction EdcFunction;

/**
 * Opaque result handle: best solution, fitness, and convergence trace.
 */
typedef struct EdcResult EdcResult;

/**
 * Run parameters. Obtain defaults via `edc_params_default`.
 */
typedef struct EdcParams {
  enum EdcAlgorithm algorithm;
  uint64_t population_size;
  double selection_ratio;
  uint64_t pool_generations;
  uint64_t subproblem_size;
  double eta_forward;
  double eta_backward;
  uint64_t max_fes;
  uint64_t seed;
} EdcParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fills `params` with the standard defaults (p=1000, tau=0.5, l=20,
 * s=30, eta_f=2, eta_b=0.5, budget 1e6).
 */
enum EdcStatus edc_params_default(struct EdcParams *params);

/**
 * Creates a benchmark function. `group_size` is only read for
 * `EDC_ROTATION_GROUPED`. The handle must be released with
 * `edc_function_destroy`.
 */
enum EdcStatus edc_function_create(enum EdcFamily family,
                                   uint64_t dimension,
                                   bool shifted,
                                   enum EdcRotation rotation,
                                   uint64_t group_size,
                                   uint64_t seed,
                                   struct EdcFunction **out);

void edc_function_destroy(struct EdcFunction *f);

enum EdcStatus edc_function_dimension(const struct EdcFunction *f, uint64_t *out);

/**
 * Evaluates the function at `x` (length `len`, which must equal the
 * dimension).
 */
enum EdcStatus edc_function_evaluate(const struct EdcFunction *f,
                                     const double *x,
                                     uint64_t len,
                                     double *out);

/**
 * Copies the known optimum point into `buf` (length `len` = dimension).
 */
enum EdcStatus edc_function_optimum(const struct EdcFunction *f, double *buf, uint64_t len);

/**
 * Function error value of a fitness: fitness minus the true optimum,
 * clipped at zero.
 */
enum EdcStatus edc_function_fev(const struct EdcFunction *f, double fitness, double *out);

/**
 * Runs the optimizer to its evaluation budget. The result handle must
 * be released with `edc_result_destroy`.
 */
enum EdcStatus edc_optimize(const struct EdcFunction *f,
                            const struct EdcParams *params,
                            struct EdcResult **out);

void edc_result_destroy(struct EdcResult *r);

enum EdcStatus edc_result_best_fitness(const struct EdcResult *r, double *out);

/**
 * Final function error value (raw, no reporting floor).
 */
enum EdcStatus edc_result_fev(const struct EdcResult *r, double *out);

enum EdcStatus edc_result_fe_count(const struct EdcResult *r, uint64_t *out);

enum EdcStatus edc_result_dimension(const struct EdcResult *r, uint64_t *out);

/**
 * Copies the best solution into `buf` (length `len` = dimension).
 */
enum EdcStatus edc_result_best_point(const struct EdcResult *r, double *buf, uint64_t len);

/**
 * Number of (fe_count, best_fev) points in the convergence trace.
 */
enum EdcStatus edc_result_trace_len(const struct EdcResult *r, uint64_t *out);

/**
 * Reads trace point `index` into `out_fe` and `out_fev`.
 */
enum EdcStatus edc_result_trace_point(const struct EdcResult *r,
                                      uint64_t index,
                                      uint64_t *out_fe,
                                      double *out_fev);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EDC_H */
