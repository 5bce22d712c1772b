// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// End-to-end experiments: synthesize, integrate both ways, measure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biorth_synthesis.hpp"
#include "errors.hpp"
#include "modal_dynamics.hpp"

namespace beamctl {

enum class Verdict { Controlled, ResidualTooLarge, Uncontrollable };
const char* to_string(Verdict v);

struct ExperimentResult {
  BeamConfig config;
  // Measurement scale X^a x X^b (see measurement_scale).
  Real initial_value_norm{0};
  Real initial_velocity_norm{0};
  Real final_value_norm{0};      // closed-form path
  Real final_velocity_norm{0};
  Real oracle_value_norm{0};     // RK4 path
  Real oracle_velocity_norm{0};
  Real final_relative{0};
  Real oracle_relative{0};
  Real oracle_deviation{0};      // |duhamel - rk4| / initial norm
  Real control_cost{0};
  Real residual_norm{0};
  Real gram_condition{0};
  unsigned precision_used = 0;
  long oracle_steps = 0;
  Verdict verdict = Verdict::Uncontrollable;
  Status cause_status = Status::Ok;
  std::string cause;             // error class name, empty when none
  std::string cause_message;
  std::vector<CollisionRecord> collisions;
  std::optional<SynthesisReport> synthesis;
};

/// Runs screening, synthesis, the closed-form final state and the RK4
/// oracle. Upstream failures become verdict Uncontrollable with the cause
/// recorded; DomainError (bad configuration) propagates.
ExperimentResult null_control_experiment(const BeamConfig& config, const ModalState& state0);

struct SweepPoint {
  double horizon = 0;
  bool ok = false;
  Real cost{0};
  Real residual{0};
  Real final_relative{0};
  unsigned precision_used = 0;
  Verdict verdict = Verdict::Uncontrollable;
  std::string cause;
};

struct CostSweep {
  std::vector<SweepPoint> points;  // input order
  bool fitted = false;
  std::string fit_note;
  // log cost = intercept + slope / T over the successful nonzero points
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::size_t fit_points = 0;
  bool monotone = true;            // cost non-increasing in T
};

/// Per-horizon synthesis, verdict from the closed-form final state.
CostSweep cost_sweep(const BeamConfig& config, const ModalState& state0,
                     const std::vector<double>& horizons);

struct CrosscheckReport {
  int trials = 0;
  double duhamel_vs_oracle = 0;     // worst relative deviation, random controls
  double free_vs_oracle = 0;        // worst relative deviation, control off
  double gram_vs_quadrature = 0;    // worst |G_ab - quad| / sqrt(G_aa G_bb)
  long oracle_steps = 0;
};

/// Randomized comparisons of the closed forms against independent numerics.
CrosscheckReport crosscheck_suite(const BeamConfig& config, int trials, std::uint64_t seed = 1);

/// u0 = phi_1 (Dirichlet) or u0 = phi_1 restricted to controllable modes.
ModalState fixture_mode1(Boundary boundary, int n_modes);
/// Uniform [-1, 1] coefficients scaled by n^{-a}, n^{-b}, on controllable
/// modes only (odd modes for Neumann; the zero mode stays 0).
ModalState fixture_random(Boundary boundary, int n_modes, std::uint64_t seed);
/// "mode1" or "random-seeded:<seed>".
ModalState make_fixture(const std::string& name, Boundary boundary, int n_modes);

struct ModeDatum {
  int mode = 0;
  Real value{0};
  Real velocity{0};
};

/// Zero state with the listed modes set; mode 0 addresses the Neumann phi_0.
ModalState state_from_data(Boundary boundary, int n_modes, const std::vector<ModeDatum>& data);
/// "n:value:velocity,n:value:velocity,..."
std::vector<ModeDatum> parse_mode_data(const std::string& text);

/// Least-squares line y = a + b x with coefficient of determination.
struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double max_abs_residual = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace beamctl
