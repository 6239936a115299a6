/* Copyright 2026 The platelab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the damped plate laboratory. All functions return a status
 * code; on failure platelab_last_error() describes the problem for the
 * calling thread. Handles are opaque and must be released with
 * platelab_model_destroy. A model handle may be read from several threads
 * at once.
 */

#ifndef PLATELAB_PLATELAB_H_
#define PLATELAB_PLATELAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PLATELAB_BUILDING)
#define PLATELAB_API __attribute__((visibility("default")))
#else
#define PLATELAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* The first four values double as CLI exit codes. */
typedef enum platelab_status {
  PLATELAB_OK = 0,
  PLATELAB_CONFIG_ERROR = 1,
  PLATELAB_NUMERICAL_ERROR = 2,
  PLATELAB_VERIFY_FAILED = 3,
  PLATELAB_INVALID_ARGUMENT = 4,
  PLATELAB_INTERNAL_ERROR = 5
} platelab_status;

typedef struct platelab_model platelab_model;

PLATELAB_API const char* platelab_version(void);

/* Message of the last failed call on this thread, "" if none. */
PLATELAB_API const char* platelab_last_error(void);

/* Interval (0, length) damped on (0, ell) with coefficient d. */
PLATELAB_API platelab_status platelab_model_create_1d(double length, double ell, double d,
                                                      int n_modes, platelab_model** out);

/* Rectangle (0, lx) x (0, ly) damped on the strip (0, ell) x (0, ly). */
PLATELAB_API platelab_status platelab_model_create_2d(double lx, double ly, double ell,
                                                      double d, int n_modes,
                                                      platelab_model** out);

PLATELAB_API void platelab_model_destroy(platelab_model* model);

PLATELAB_API size_t platelab_model_n_modes(const platelab_model* model);

/* Dirichlet Laplacian eigenvalues, non-decreasing; `len` >= n_modes. */
PLATELAB_API platelab_status platelab_model_eigenvalues(const platelab_model* model,
                                                        double* out, size_t len);

/* All 2 n_modes generator eigenvalues, sorted by |Im|; `len` >= 2 n_modes.
 * `abscissa` may be NULL. */
PLATELAB_API platelab_status platelab_model_spectrum(const platelab_model* model,
                                                     double* re, double* im, size_t len,
                                                     double* abscissa);

/* Energy-norm resolvent norm at i*mu. */
PLATELAB_API platelab_status platelab_model_resolvent_norm(const platelab_model* model,
                                                           double mu, double* out);

/* Energy of real modal coefficients u, v of length n_modes. */
PLATELAB_API platelab_status platelab_model_energy(const platelab_model* model,
                                                   const double* u, const double* v,
                                                   size_t n, double* out);

/* Runs a CLI command. `config_path` may be NULL for carleman and verify.
 * `seed` overrides the config seeds when `has_seed` is nonzero. The one-line
 * summary is copied (truncated, NUL-terminated) into `summary`. The return
 * value is the command's exit code. */
PLATELAB_API platelab_status platelab_run(const char* command, const char* config_path,
                                          const char* out_dir, int plot_data, int has_seed,
                                          uint64_t seed, char* summary, size_t summary_len);

#ifdef __cplusplus
}
#endif

#endif /* PLATELAB_PLATELAB_H_ */
