#ifndef RISIM_H
#define RISIM_H

/* Generated by cbindgen from risim-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum RisimStatus {
  RISIM_STATUS_OK = 0,
  // A required pointer argument was null.
  RISIM_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  RISIM_STATUS_INVALID_UTF8 = 2,
  // A file could not be read or written.
  RISIM_STATUS_IO_ERROR = 3,
  // A scene or sample file could not be decoded.
  RISIM_STATUS_PARSE_ERROR = 4,
  // An argument violates a documented precondition.
  RISIM_STATUS_INVALID_INPUT = 5,
  // A request exceeds a hard enumeration limit.
  RISIM_STATUS_CAPACITY_EXCEEDED = 6,
  // A caller-provided buffer is too small.
  RISIM_STATUS_BUFFER_TOO_SMALL = 7,
  // An unexpected internal failure; the library state is unchanged.
  RISIM_STATUS_INTERNAL_ERROR = 8,
} RisimStatus;

// Near/far field boundary conventions.
typedef enum RisimBoundaryConvention {
  // `2*M*N*dx*dy / lambda`.
  RISIM_BOUNDARY_CONVENTION_EFFECTIVE = 0,
  // `2*M*N*dx*dy / lambda^2`.
  RISIM_BOUNDARY_CONVENTION_AS_PRINTED = 1,
} RisimBoundaryConvention;

// Scene parameter swept by [`risim_sweep_csv`].
typedef enum RisimSweepParameter {
  // Transmitter distance in metres.
  RISIM_SWEEP_PARAMETER_D1 = 0,
  // Receiver distance in metres.
  RISIM_SWEEP_PARAMETER_D2 = 1,
  // Receiver zenith angle in degrees.
  RISIM_SWEEP_PARAMETER_THETA2 = 2,
} RisimSweepParameter;

// Surface configuration applied before an evaluation or at each sweep
// point.
typedef enum RisimConfiguration {
  // Two-state configuration search with 64 reference angles.
  RISIM_CONFIGURATION_ONE_BIT = 0,
  // Ideal continuous co-phasing (aligned-power bound).
  RISIM_CONFIGURATION_CONTINUOUS_ALIGNED = 1,
  // All elements in state 0.
  RISIM_CONFIGURATION_ALL_ZERO = 2,
} RisimConfiguration;

// Opaque scene handle.
typedef struct RisimScene RisimScene;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the underlying library; static storage, never freed.
const char *risim_version(void);

// Message describing the most recent failure on this thread. Valid until
// the next failing risim call on the same thread; never null.
const char *risim_last_error_message(void);

// Create a scene from a JSON description in memory.
//
// # Safety
// `json` must be a NUL-terminated string; `out_scene` must be writable.
enum RisimStatus risim_scene_from_json(const char *json, struct RisimScene **out_scene);

// Create a scene from a JSON file on disk.
//
// # Safety
// `path` must be a NUL-terminated string; `out_scene` must be writable.
enum RisimStatus risim_scene_load(const char *path, struct RisimScene **out_scene);

// Free a scene handle. Null is accepted and ignored.
//
// # Safety
// `handle` must be null or a pointer returned by a risim_scene_*
// constructor that has not been freed yet.
void risim_scene_free(struct RisimScene *handle);

// Number of elements of the scene's surface (`rows * cols`).
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_element_count(const struct RisimScene *handle, size_t *out_count);

// Near/far field boundary of the scene's aperture in metres.
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_field_boundary(const struct RisimScene *handle,
                                      enum RisimBoundaryConvention convention,
                                      double *out_distance_m);

// Per-element radar cross section of the scene's reflection model, m².
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_rcs(const struct RisimScene *handle,
                           double theta_r_rad,
                           double *out_sigma_m2);

// Reflection phase of one element for the given control state, radians
// in `[0, 2*pi)`.
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_phase_shift(const struct RisimScene *handle,
                                   double theta_r_rad,
                                   uint8_t state,
                                   double *out_phase_rad);

// Received power for the given row-major control states (`len` must be
// `rows*cols`); a null `states` pointer means the all-zero grid.
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_received_power(const struct RisimScene *handle,
                                      const uint8_t *states,
                                      size_t len,
                                      double *out_pr_w,
                                      double *out_attenuation_db);

// Received power of the plane-mirror (specular) baseline with mean
// reflection amplitude `mu_bar` in `(0, 1]`.
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_specular_power(const struct RisimScene *handle,
                                      double mu_bar,
                                      double *out_pr_w,
                                      double *out_attenuation_db);

// Run the one-bit configuration search and write the chosen row-major
// states into `out_states` (`len` must be at least `rows*cols`).
// `out_pr_w` may be null when only the states are wanted.
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_configure_one_bit(const struct RisimScene *handle,
                                         uint32_t reference_scan,
                                         uint8_t *out_states,
                                         size_t len,
                                         double *out_pr_w);

// Sweep one scene parameter and write the result table as CSV to
// `out_path` (header `param,value,...`, columns per requested model).
//
// # Safety
// Pointers must be valid as documented on the crate.
enum RisimStatus risim_sweep_csv(const struct RisimScene *handle,
                                 enum RisimSweepParameter parameter,
                                 double from,
                                 double to,
                                 size_t steps,
                                 bool include_proposed,
                                 bool include_specular,
                                 enum RisimConfiguration configuration,
                                 const char *out_path);

// Least-squares fit of the cosine phase law from `len` samples.
//
// # Safety
// The sample arrays must hold `len` readable doubles each.
enum RisimStatus risim_fit_phase(const double *theta_rad,
                                 const double *phase_rad,
                                 size_t len,
                                 double *out_amplitude_rad,
                                 double *out_offset_rad);

// Least-squares fit of the cross-section floor constant from `len`
// samples, holding the aperture term fixed.
//
// # Safety
// The sample arrays must hold `len` readable doubles each.
enum RisimStatus risim_fit_rcs_floor(const double *theta_rad,
                                     const double *sigma_m2,
                                     size_t len,
                                     double element_area_m2,
                                     double wavelength_m,
                                     double *out_c_m2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RISIM_H */
