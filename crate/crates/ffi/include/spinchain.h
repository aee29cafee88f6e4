#ifndef SPINCHAIN_H
#define SPINCHAIN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpinchainStatus {
  SPINCHAIN_STATUS_OK = 0,
  SPINCHAIN_STATUS_NULL_POINTER = 1,
  SPINCHAIN_STATUS_INVALID_PARAMETER = 2,
  SPINCHAIN_STATUS_INVALID_SEPARATION = 3,
  SPINCHAIN_STATUS_NON_CONVERGENCE = 4,
  SPINCHAIN_STATUS_INVALID_STATE = 5,
  SPINCHAIN_STATUS_OUT_OF_RANGE = 6,
  SPINCHAIN_STATUS_INVALID_SWEEP = 7,
  SPINCHAIN_STATUS_NO_CRITICAL_POINT = 8,
  SPINCHAIN_STATUS_INTERNAL = 9,
} SpinchainStatus;

typedef enum SpinchainAxis {
  SPINCHAIN_AXIS_J = 0,
  SPINCHAIN_AXIS_GAMMA = 1,
  SPINCHAIN_AXIS_D = 2,
} SpinchainAxis;

typedef enum SpinchainMeasure {
  SPINCHAIN_MEASURE_QFI = 0,
  SPINCHAIN_MEASURE_L1 = 1,
  SPINCHAIN_MEASURE_REC = 2,
} SpinchainMeasure;

/**
 * Opaque sweep handle.
 */
typedef struct SpinchainSweep SpinchainSweep;

typedef struct SpinchainParams {
  double j;
  double gamma;
  double d;
} SpinchainParams;

typedef struct SpinchainCorrelations {
  uint32_t r;
  double mz;
  double xx;
  double yy;
  double zz;
} SpinchainCorrelations;

typedef struct SpinchainMeasures {
  double qfi;
  double c_l1;
  double c_rec;
} SpinchainMeasures;

/**
 * One sweep row. `status` is non-`Ok` for flagged rows, whose correlator
 * and measure fields are NaN.
 */
typedef struct SpinchainRow {
  struct SpinchainParams params;
  struct SpinchainCorrelations correlations;
  struct SpinchainMeasures measures;
  /**
   * Derivatives with respect to the sweep axis.
   */
  struct SpinchainMeasures derivatives;
  enum SpinchainStatus status;
} SpinchainRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Thermodynamic-limit magnetization and correlators at separation `r`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SpinchainStatus spinchain_correlations(struct SpinchainParams params,
                                            uint32_t r,
                                            struct SpinchainCorrelations *out);

/**
 * QFI, l1 coherence and relative entropy of coherence of the spin pair at
 * separation `r`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SpinchainStatus spinchain_measures(struct SpinchainParams params,
                                        uint32_t r,
                                        struct SpinchainMeasures *out);

/**
 * Runs a sweep over `axis`; the axis field of `fixed` is ignored. On
 * success `*out` owns a handle that must be passed to
 * [`spinchain_sweep_free`].
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SpinchainStatus spinchain_sweep_new(enum SpinchainAxis axis,
                                         double start,
                                         double stop,
                                         double step,
                                         struct SpinchainParams fixed,
                                         uint32_t r,
                                         struct SpinchainSweep **out);

/**
 * Number of rows; 0 for a null handle.
 *
 * # Safety
 * `sweep` must be null or a live handle from [`spinchain_sweep_new`].
 */
size_t spinchain_sweep_len(const struct SpinchainSweep *sweep);

/**
 * Copies row `index` into `*out`.
 *
 * # Safety
 * `sweep` must be null or a live handle; `out` must be null or valid for
 * writes.
 */
enum SpinchainStatus spinchain_sweep_row(const struct SpinchainSweep *sweep,
                                         size_t index,
                                         struct SpinchainRow *out);

/**
 * Location of the strongest kink of `which` along a J sweep.
 *
 * # Safety
 * `sweep` must be null or a live handle; `j_star` must be null or valid
 * for writes.
 */
enum SpinchainStatus spinchain_sweep_critical_point(const struct SpinchainSweep *sweep,
                                                    enum SpinchainMeasure which,
                                                    double *j_star);

/**
 * Releases a sweep handle; null is ignored.
 *
 * # Safety
 * `sweep` must be null or a handle from [`spinchain_sweep_new`] that has not
 * been freed.
 */
void spinchain_sweep_free(struct SpinchainSweep *sweep);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *spinchain_status_message(enum SpinchainStatus status);

/**
 * Library version, NUL-terminated.
 */
const char *spinchain_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINCHAIN_H */
