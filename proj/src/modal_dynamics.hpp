// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Modal states, free evolution, lifting, closed-form Duhamel responses,
// Sobolev-scale norms and the RK4 oracle integrator.

#include <optional>
#include <utility>
#include <vector>

#include "control_signal.hpp"
#include "spectrum.hpp"

namespace beamctl {

/// Coefficients of (u, u_t) in the normalized eigenbasis. Slot n holds mode
/// n for n = 1..N; slot 0 holds the phi_0 coefficient (Neumann only, kept at
/// zero for Dirichlet).
struct ModalState {
  Boundary boundary = Boundary::Dirichlet;
  std::vector<Real> values;
  std::vector<Real> velocities;

  static ModalState zeros(Boundary boundary, int n_modes);
  int n_modes() const { return static_cast<int>(values.size()) - 1; }
  void check_shape() const;
  /// Copy truncated (or zero-padded) to `n_modes`.
  ModalState truncated(int n_modes) const;
};

/// Free evolution of one mode. Non-critical: c1 e^{l+ t} + c2 e^{l- t};
/// critical: c1 e^{l t} + c2 t e^{l t}.
struct FreeMode {
  ModeEigenvalues eig;
  Complex c1;
  Complex c2;
  Real initial_value;
  Real initial_velocity;
};

struct FreeEvolution {
  Boundary boundary = Boundary::Dirichlet;
  std::vector<FreeMode> modes;  // modes[n-1] is mode n
  // Neumann zero mode evolves as zero_value + zero_velocity * t.
  Real zero_value{0};
  Real zero_velocity{0};
  bool critical = false;
};

FreeEvolution free_coefficients(const ModalState& state0, const std::vector<ModeEigenvalues>& eigs);
ModalState free_state_at(const FreeEvolution& free, const Real& t);

/// Impulse response h(sigma) of one mode to f'' forcing and its derivative,
/// so that a(t) = int_0^t f''(s) h(t-s) ds.
std::pair<ExpPoly, ExpPoly> impulse_response(const ModeEigenvalues& eig, const Real& trace);
/// The Neumann zero mode: a_0'' = -x_0 f''.
std::pair<ExpPoly, ExpPoly> zero_mode_impulse_response(const Real& trace);

/// (a_n(t), a_n'(t)) of the lifted interior problem with zero initial data.
std::pair<Real, Real> duhamel_response(const ModeEigenvalues& eig, const Real& trace,
                                       const ControlSignal& control, const Real& t);

/// Modal coefficients of the lifting term U = profile(x) f(t).
ModalState lifting_term(const BoundaryTraceExpansion& traces, const ControlSignal& control,
                        const Real& t);

/// Full state u = v_free + v_forced + U at time t, all in closed form.
ModalState controlled_state_at(const BeamConfig& config, const ModalState& state0,
                               const ControlSignal& control, const Real& t);

Real sobolev_norm(const ModalState& state, const Real& p, bool velocities = false);
Real sobolev_norm_squared(const ModalState& state, const Real& p, bool velocities = false);
/// X^p norm of the modes above `n_cut` (truncation error indicator).
Real tail_norm(const ModalState& state, int n_cut, const Real& p);

/// Measurement scales: X^3 x X^1 (Dirichlet), X^4 x X^2 (Neumann).
std::pair<int, int> measurement_scale(Boundary boundary);
/// sqrt(|u|^2_{X^a} + |u_t|^2_{X^b}) in the measurement scale.
Real state_norm(const ModalState& state);

struct Trajectory {
  Boundary boundary = Boundary::Dirichlet;
  int n_modes = 0;
  long steps = 0;
  std::vector<double> times;
  // [sample][n], n = 0..N
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> velocities;
};

/// Smallest step count keeping h * max|lambda| inside the RK4 stability
/// region with margin.
long minimum_stable_steps(const BeamConfig& config);
/// Step count used when BeamConfig::oracle_steps is 0.
long recommended_oracle_steps(const BeamConfig& config);

/// Classical RK4 on the truncated modal system
///   v_n'' + rho n^2 v_n' + n^4 v_n = -x_n f'',
/// returning u = v + x_n f at `samples`+1 equally spaced times. The forcing
/// is sampled from the control; nothing else is shared with the closed forms.
Trajectory simulate_oracle(const BeamConfig& config, const ModalState& state0,
                           const ControlSignal* control, long steps, int samples = 100);

ModalState final_state(const Trajectory& traj);

}  // namespace beamctl
