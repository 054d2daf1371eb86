#ifndef ASYM_MHD_H
#define ASYM_MHD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum AmhdStatus {
  AMHD_STATUS_OK = 0,
  AMHD_STATUS_ERROR = 1,
  AMHD_STATUS_CONFIG_ERROR = 2,
  AMHD_STATUS_BLOW_UP = 3,
  AMHD_STATUS_PROPERTY_FAILURE = 4,
  AMHD_STATUS_NULL_POINTER = 5,
  AMHD_STATUS_INVALID_ARGUMENT = 6,
  AMHD_STATUS_PANIC = 7,
} AmhdStatus;

// Which field [`amhd_simulation_copy_coefficients`] reads.
typedef enum AmhdField {
  AMHD_FIELD_VELOCITY = 0,
  AMHD_FIELD_MAGNETIC = 1,
} AmhdField;

// Opaque simulation handle.
typedef struct AmhdSimulation AmhdSimulation;

// Diagnostics of the current state. Unused momentum entries are zero.
typedef struct AmhdInvariants {
  double t;
  double energy;
  double cross_helicity;
  double momentum[3];
  // False on 2D grids and for a magnetic field with nonzero mean.
  bool has_magnetic_helicity;
  double magnetic_helicity;
  double max_div_v;
  double max_div_b;
} AmhdInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *amhd_version(void);

// Message for the most recent failure on this thread, or null if the last
// call succeeded. Valid until the next library call on this thread.
const char *amhd_last_error_message(void);

// Parse a TOML configuration and build its initial state.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a valid pointer.
// On success `*out` owns a handle that must be released with
// [`amhd_simulation_free`]; on failure `*out` is set to null.
enum AmhdStatus amhd_simulation_new(const char *config_toml, struct AmhdSimulation **out);

// Release a handle. Null is ignored.
//
// # Safety
// `sim` must be null or a handle from [`amhd_simulation_new`] that has not
// been freed.
void amhd_simulation_free(struct AmhdSimulation *sim);

// Advance by `n_steps` RK4 steps of the configured `dt`. On blow-up the
// handle keeps the last finite state.
//
// # Safety
// `sim` must be a live handle not used concurrently from another thread.
enum AmhdStatus amhd_simulation_step(struct AmhdSimulation *sim, size_t n_steps);

// Current simulation time.
//
// # Safety
// `sim` must be a live handle and `out_t` a valid pointer.
enum AmhdStatus amhd_simulation_time(const struct AmhdSimulation *sim, double *out_t);

// Grid dimension and points per axis.
//
// # Safety
// `sim` must be a live handle; both out pointers must be valid.
enum AmhdStatus amhd_simulation_grid(const struct AmhdSimulation *sim,
                                     size_t *out_dim,
                                     size_t *out_n_points);

// Diagnostics of the current state.
//
// # Safety
// `sim` must be a live handle and `out` a valid pointer.
enum AmhdStatus amhd_simulation_invariants(const struct AmhdSimulation *sim,
                                           struct AmhdInvariants *out);

// Relative skew part `‖T − Tᵀ‖ / ‖T‖` of the stress tensor of the current
// state under the configured weights.
//
// # Safety
// `sim` must be a live handle and `out` a valid pointer.
enum AmhdStatus amhd_simulation_stress_asymmetry(const struct AmhdSimulation *sim, double *out);

// Number of doubles [`amhd_simulation_copy_coefficients`] writes for one
// component: `2 · n_points^dim`.
//
// # Safety
// `sim` must be a live handle and `out_len` a valid pointer.
enum AmhdStatus amhd_simulation_component_len(const struct AmhdSimulation *sim, size_t *out_len);

// Copy one component's Fourier coefficients as interleaved `(re, im)`
// pairs in the snapshot ordering (first axis fastest). `component` is
// 0-based.
//
// # Safety
// `sim` must be a live handle and `out` must have room for `capacity`
// doubles.
enum AmhdStatus amhd_simulation_copy_coefficients(const struct AmhdSimulation *sim,
                                                  enum AmhdField field,
                                                  size_t component,
                                                  double *out,
                                                  size_t capacity);

// Write the current state as an `MHDC` snapshot.
//
// # Safety
// `sim` must be a live handle and `path` a NUL-terminated string.
enum AmhdStatus amhd_simulation_write_snapshot(const struct AmhdSimulation *sim, const char *path);

// Run the algebra identity suite on a 2D grid. Returns
// [`AmhdStatus::PropertyFailure`] if any identity misses its default
// tolerance; `out_worst`, if non-null, receives the largest ratio of residual
// to tolerance.
//
// # Safety
// `out_worst` must be null or a valid pointer.
enum AmhdStatus amhd_algebra_check(uint64_t seed,
                                   size_t trials,
                                   size_t n_points,
                                   double *out_worst);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASYM_MHD_H */
