// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

/*
 * beamctl: boundary null controls for the structurally damped beam
 *
 *   u_tt + A^2 u + rho A u_t = 0  on (0, pi),
 *
 * synthesized by the moment method and verified against an independent
 * integrator.
 *
 * Every function returns a beamctl_status. On failure the thread-local
 * beamctl_last_error_message() / beamctl_last_error_cause() describe it.
 * Strings returned through char** are heap-allocated; release them with
 * beamctl_string_free(). Handles are released with their *_destroy function,
 * which accepts NULL.
 */
#ifndef BEAMCTL_BEAMCTL_H
#define BEAMCTL_BEAMCTL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BEAMCTL_BUILDING)
#    define BEAMCTL_API __declspec(dllexport)
#  else
#    define BEAMCTL_API __declspec(dllimport)
#  endif
#else
#  define BEAMCTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum beamctl_status {
  BEAMCTL_OK = 0,
  BEAMCTL_ERR_INTERNAL = 1,
  BEAMCTL_ERR_DOMAIN = 2,
  BEAMCTL_ERR_UNCONTROLLABLE = 3,
  BEAMCTL_ERR_NUMERICAL = 4
} beamctl_status;

typedef enum beamctl_boundary {
  BEAMCTL_DIRICHLET = 0,
  BEAMCTL_NEUMANN = 1
} beamctl_boundary;

typedef enum beamctl_verdict {
  BEAMCTL_CONTROLLED = 0,
  BEAMCTL_RESIDUAL_TOO_LARGE = 1,
  BEAMCTL_UNCONTROLLABLE = 2
} beamctl_verdict;

typedef struct beamctl_config beamctl_config;
typedef struct beamctl_state beamctl_state;
typedef struct beamctl_synthesis beamctl_synthesis;
typedef struct beamctl_experiment beamctl_experiment;
typedef struct beamctl_sweep beamctl_sweep;
typedef struct beamctl_condensation beamctl_condensation;

BEAMCTL_API const char* beamctl_version(void);
BEAMCTL_API const char* beamctl_last_error_message(void);
/* Short class name such as "ResonanceDefect"; empty when none. */
BEAMCTL_API const char* beamctl_last_error_cause(void);
BEAMCTL_API void beamctl_string_free(char* s);

/* ---- configuration ------------------------------------------------------ */

/* Defaults: Dirichlet, rho = 1, 6 modes, T = 1, 256 bits, no regularization,
 * autoscale on with ceiling 1024 bits, tolerance 1e-6, automatic RK4 steps. */
BEAMCTL_API beamctl_status beamctl_config_create(beamctl_config** out);
BEAMCTL_API void beamctl_config_destroy(beamctl_config* cfg);
/* Exact: "2.5", "5/2", "3", "1e-1". */
BEAMCTL_API beamctl_status beamctl_config_set_rho(beamctl_config* cfg, const char* rho);
/* The exact binary value of the double is used. */
BEAMCTL_API beamctl_status beamctl_config_set_rho_double(beamctl_config* cfg, double rho);
BEAMCTL_API beamctl_status beamctl_config_set_modes(beamctl_config* cfg, int n_modes);
BEAMCTL_API beamctl_status beamctl_config_set_horizon(beamctl_config* cfg, double horizon);
BEAMCTL_API beamctl_status beamctl_config_set_boundary(beamctl_config* cfg, beamctl_boundary b);
BEAMCTL_API beamctl_status beamctl_config_set_precision_bits(beamctl_config* cfg, unsigned bits);
BEAMCTL_API beamctl_status beamctl_config_set_regularization(beamctl_config* cfg, double reg);
BEAMCTL_API beamctl_status beamctl_config_set_autoscale(beamctl_config* cfg, int enabled);
BEAMCTL_API beamctl_status beamctl_config_set_precision_ceiling(beamctl_config* cfg, unsigned bits);
BEAMCTL_API beamctl_status beamctl_config_set_tolerance(beamctl_config* cfg, double tol);
/* 0 selects a step count from the stiffness of the truncated system. */
BEAMCTL_API beamctl_status beamctl_config_set_oracle_steps(beamctl_config* cfg, long steps);
BEAMCTL_API beamctl_status beamctl_config_json(const beamctl_config* cfg, char** out);

/* ---- initial data ------------------------------------------------------- */

/* Zero data on modes 1..n_modes (plus phi_0 for Neumann). */
BEAMCTL_API beamctl_status beamctl_state_create(beamctl_boundary b, int n_modes, beamctl_state** out);
/* "mode1" or "random-seeded:<seed>". */
BEAMCTL_API beamctl_status beamctl_state_fixture(const char* name, beamctl_boundary b, int n_modes,
                                                 beamctl_state** out);
BEAMCTL_API void beamctl_state_destroy(beamctl_state* s);
/* Mode 0 addresses phi_0 (Neumann only). */
BEAMCTL_API beamctl_status beamctl_state_set_mode(beamctl_state* s, int mode, double value, double velocity);
/* Exact decimal / rational strings. */
BEAMCTL_API beamctl_status beamctl_state_set_mode_text(beamctl_state* s, int mode, const char* value,
                                                       const char* velocity);
/* "n:value:velocity,n:value:velocity,..." */
BEAMCTL_API beamctl_status beamctl_state_set_data(beamctl_state* s, const char* triples);

/* ---- spectrum and moment system ---------------------------------------- */

BEAMCTL_API beamctl_status beamctl_spectrum_csv(const beamctl_config* cfg, char** out);
BEAMCTL_API beamctl_status beamctl_spectrum_json(const beamctl_config* cfg, char** out);
BEAMCTL_API beamctl_status beamctl_moment_system_json(const beamctl_config* cfg, const beamctl_state* s,
                                                      char** out);

/* ---- synthesis ---------------------------------------------------------- */

BEAMCTL_API beamctl_status beamctl_synthesize(const beamctl_config* cfg, const beamctl_state* s,
                                              beamctl_synthesis** out);
BEAMCTL_API void beamctl_synthesis_destroy(beamctl_synthesis* syn);
BEAMCTL_API beamctl_status beamctl_synthesis_json(const beamctl_synthesis* syn, char** out);
BEAMCTL_API beamctl_status beamctl_synthesis_control_csv(const beamctl_synthesis* syn, int samples, char** out);
BEAMCTL_API beamctl_status beamctl_synthesis_cost(const beamctl_synthesis* syn, double* cost);
BEAMCTL_API beamctl_status beamctl_synthesis_residual(const beamctl_synthesis* syn, double* residual);
BEAMCTL_API beamctl_status beamctl_synthesis_precision(const beamctl_synthesis* syn, unsigned* bits);
BEAMCTL_API beamctl_status beamctl_synthesis_evaluate(const beamctl_synthesis* syn, double t, double* f,
                                                      double* f_prime, double* f_double_prime);
/* Final state norm (measurement scale) relative to the initial one, closed form. */
BEAMCTL_API beamctl_status beamctl_synthesis_final_relative(const beamctl_synthesis* syn, double* rel);

/* ---- verification ------------------------------------------------------- */

/* BEAMCTL_OK whenever an experiment ran; inspect the verdict. */
BEAMCTL_API beamctl_status beamctl_verify(const beamctl_config* cfg, const beamctl_state* s,
                                          beamctl_experiment** out);
BEAMCTL_API void beamctl_experiment_destroy(beamctl_experiment* e);
BEAMCTL_API beamctl_status beamctl_experiment_json(const beamctl_experiment* e, char** out);
BEAMCTL_API beamctl_status beamctl_experiment_verdict(const beamctl_experiment* e, beamctl_verdict* v);
/* Status class of the cause (BEAMCTL_OK when Controlled). */
BEAMCTL_API beamctl_status beamctl_experiment_cause_status(const beamctl_experiment* e, beamctl_status* st);
/* Borrowed pointer valid for the handle's lifetime; "" when none. */
BEAMCTL_API const char* beamctl_experiment_cause(const beamctl_experiment* e);
BEAMCTL_API beamctl_status beamctl_experiment_final_relative(const beamctl_experiment* e, double* closed_form,
                                                             double* oracle);

BEAMCTL_API beamctl_status beamctl_cost_sweep(const beamctl_config* cfg, const beamctl_state* s,
                                              const double* horizons, size_t count, beamctl_sweep** out);
BEAMCTL_API void beamctl_sweep_destroy(beamctl_sweep* sw);
BEAMCTL_API beamctl_status beamctl_sweep_csv(const beamctl_sweep* sw, char** out);
BEAMCTL_API beamctl_status beamctl_sweep_json(const beamctl_sweep* sw, char** out);
/* fitted = 0 when the fit was skipped (e.g. all costs zero). */
BEAMCTL_API beamctl_status beamctl_sweep_fit(const beamctl_sweep* sw, int* fitted, double* slope,
                                             double* r_squared, int* monotone);

BEAMCTL_API beamctl_status beamctl_crosscheck_json(const beamctl_config* cfg, int trials, uint64_t seed,
                                                   char** out);

/* RK4 trajectory (t,n,value,velocity); syn may be NULL for free evolution.
 * steps = 0 selects the automatic count. */
BEAMCTL_API beamctl_status beamctl_simulate_csv(const beamctl_config* cfg, const beamctl_state* s,
                                                const beamctl_synthesis* syn, long steps, int samples,
                                                char** out);

/* ---- condensation ------------------------------------------------------- */

/* r: "p/q" (rational, rejected with BEAMCTL_ERR_UNCONTROLLABLE), "sqrt(2)",
 * "golden", "liouville", or a decimal approximation. bits: phase precision. */
BEAMCTL_API beamctl_status beamctl_condensation_compute(const char* r, int n_max, unsigned bits,
                                                beamctl_condensation** out);
/* r from the configuration's damping (rho > 2). */
BEAMCTL_API beamctl_status beamctl_condensation_from_config(const beamctl_config* cfg, int n_max,
                                                            beamctl_condensation** out);
BEAMCTL_API void beamctl_condensation_destroy(beamctl_condensation* c);
BEAMCTL_API beamctl_status beamctl_condensation_csv(const beamctl_condensation* c, char** out);
BEAMCTL_API beamctl_status beamctl_condensation_json(const beamctl_condensation* c, char** out);
BEAMCTL_API beamctl_status beamctl_condensation_estimate(const beamctl_condensation* c, double* estimate);

#ifdef __cplusplus
}
#endif

#endif /* BEAMCTL_BEAMCTL_H */
