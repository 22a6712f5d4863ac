/* Copyright 2026 The nlmagic Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the nlmagic shared library.
 *
 * Conventions:
 *   - every fallible call returns an nlm_status; on failure the handle and
 *     string outputs are untouched and nlm_last_error() describes the cause
 *     (thread-local, valid until the next failing call on that thread);
 *   - objects are created behind opaque handles and released with their
 *     matching _free function;
 *   - structured results are returned as JSON strings allocated by the
 *     library; release them with nlm_string_free.
 *
 * File formats:
 *   state (JSON):    { "dim": N, "amplitudes": [[[re, im], ...], ...] }
 *                    row-major over the A index, then the B index;
 *   spectrum (JSON): { "dim": N, "lambdas": [...] } Schmidt coefficients;
 *   scan CSV:        dim,lambda_0..lambda_{N-1},m_formula,m_numerical,
 *                    residual,n_starts,max_iter,converged_fraction,seed
 *   grid CSV:        x,y,p0,p1,p2[,p3,p4],m
 *   band-slice CSV:  x,y,q0,q1,q2,lambda3_sq,residual
 */

#ifndef NLM_H
#define NLM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlm_status {
  NLM_OK = 0,
  NLM_ERR_NULL = 1,             /* required pointer argument was NULL */
  NLM_ERR_INVALID_ARGUMENT = 2, /* input violated a documented precondition */
  NLM_ERR_RUNTIME = 3,          /* I/O or numerical failure */
  NLM_ERR_INTERNAL = 4
} nlm_status;

typedef enum nlm_method {
  NLM_METHOD_CLOSED_FORM = 0, /* spectrum-invariant expressions, dims 2..5 */
  NLM_METHOD_ORACLE = 1       /* quadruple sum, any dim >= 2 */
} nlm_method;

typedef enum nlm_gradient_mode {
  NLM_GRADIENT_FINITE_DIFFERENCE = 0,
  NLM_GRADIENT_ANALYTIC = 1
} nlm_gradient_mode;

/* Bipartite pure-state Schmidt coefficients, sorted descending. */
typedef struct nlm_spectrum nlm_spectrum;
/* Normalised pure state of two N-level systems. */
typedef struct nlm_state nlm_state;

typedef struct nlm_optimizer_options {
  int n_starts;          /* >= 1 */
  int max_iter;          /* per start, >= 1 */
  double grad_tolerance; /* max-norm stopping threshold, > 0 */
  uint64_t seed;
  double init_scale;     /* std-dev of the random initial angles */
  int gradient_mode;     /* nlm_gradient_mode */
} nlm_optimizer_options;

const char* nlm_version(void);
const char* nlm_last_error(void);
void nlm_string_free(char* s);

/* Fills the defaults: 1 start, 300 iterations, tolerance 1e-9, seed 0,
 * init scale 1.0, finite-difference gradient. */
void nlm_optimizer_options_init(nlm_optimizer_options* opts);

/* ---- spectra ---------------------------------------------------------- */

/* When normalize is non-zero the entries are scaled to unit Euclidean norm
 * first and *deviation (when non-NULL) receives |sum lambda^2 - 1| of the
 * raw input; otherwise the input must already be normalised to 1e-12. */
nlm_status nlm_spectrum_create(int dim, const double* lambdas, int normalize,
                               double* deviation, nlm_spectrum** out);
nlm_status nlm_spectrum_load_json(const char* path, int normalize,
                                  double* deviation, nlm_spectrum** out);
nlm_status nlm_spectrum_save_json(const nlm_spectrum* spec, const char* path);
int nlm_spectrum_dim(const nlm_spectrum* spec);
/* Copies the descending coefficients into out[0..dim); capacity in doubles. */
nlm_status nlm_spectrum_lambdas(const nlm_spectrum* spec, double* out,
                                size_t capacity);
void nlm_spectrum_free(nlm_spectrum* spec);

/* ---- states ----------------------------------------------------------- */

/* amplitudes: row-major [re, im] pairs, 2*dim*dim doubles. */
nlm_status nlm_state_create(int dim, const double* amplitudes, nlm_state** out);
nlm_status nlm_state_load_json(const char* path, nlm_state** out);
nlm_status nlm_state_save_json(const nlm_state* state, const char* path);
nlm_status nlm_state_from_spectrum(const nlm_spectrum* spec, nlm_state** out);
/* Applies seeded Haar-random local unitaries U_A (x) U_B. */
nlm_status nlm_state_scramble(const nlm_state* state, uint64_t seed,
                              nlm_state** out);
/* Schmidt spectrum of the state (singular values of the amplitude matrix). */
nlm_status nlm_state_spectrum(const nlm_state* state, nlm_spectrum** out);
int nlm_state_dim(const nlm_state* state);
/* Second stabiliser Renyi entropy in the current basis (not minimised). */
nlm_status nlm_state_m2(const nlm_state* state, double* out);
void nlm_state_free(nlm_state* state);

/* ---- spectrum computations (JSON results) ----------------------------- */

/* {"p2":..,"p3":..,"p4":..,"pHalf":..,"eN":..,"antiFlatness":..} */
nlm_status nlm_invariants_json(const nlm_spectrum* spec, char** out_json);

/* Non-local magic attained on Schmidt-aligned orderings; method is an
 * nlm_method. {"value":..,"f_of_lambda":..,"argmax_ordering":[..],
 * "method":"closedForm"|"oracle"} plus "note" when the expression carries
 * a caveat. */
nlm_status nlm_schmidt_nlm_json(const nlm_spectrum* spec, int method,
                                char** out_json);

/* ---- optimisation ------------------------------------------------------ */

/* Multi-start local-unitary minimisation of the entropy.
 * {"min_value":..,"best_theta_a":[..],"best_theta_b":[..],
 *  "per_start_values":[..],"converged":[..],"evaluations":..} */
nlm_status nlm_optimize_json(const nlm_state* state,
                             const nlm_optimizer_options* opts,
                             char** out_json);

/* ---- scans and grids (CSV files) --------------------------------------- */

/* Samples num_samples spectra of dimension dim (2..5), runs formula vs
 * numerical minimisation per sample, writes the scan CSV. Deterministic for
 * a fixed seed. */
nlm_status nlm_scan_csv(int dim, int num_samples,
                        const nlm_optimizer_options* opts,
                        const char* out_path);

/* {"count":..,"mean_abs":..,"std_abs":..,"fraction_below":..,
 *  "threshold":..,"max_residual":..,"negative_count":..} */
nlm_status nlm_scan_stats_json(const char* scan_csv_path, double threshold,
                               char** out_json);

/* Qutrit probability-simplex lattice with spacing 1/resolution. */
nlm_status nlm_grid3_csv(int resolution, const char* out_path);
/* Same lattice on the (p0,p1,p2,0,0) slice of the N=5 simplex. */
nlm_status nlm_grid5_slice_csv(int resolution, const char* out_path);

/* Filters an N=4 scan CSV into per-center band slices on lambda_3^2 and
 * writes <out_prefix>_<center>.csv for each center. The report lists the
 * files and their row counts: {"files":[..],"counts":[..]}. */
nlm_status nlm_slice4_csv(const char* scan_csv_path, const double* centers,
                          int num_centers, double halfwidth,
                          const char* out_prefix, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* NLM_H */
