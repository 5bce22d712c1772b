// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "modal_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "errors.hpp"

namespace beamctl {

ModalState ModalState::zeros(Boundary boundary, int n_modes) {
  if (n_modes < 1) throw DomainError("n_modes must be at least 1");
  ModalState s;
  s.boundary = boundary;
  s.values.assign(static_cast<std::size_t>(n_modes) + 1, Real(0));
  s.velocities.assign(static_cast<std::size_t>(n_modes) + 1, Real(0));
  return s;
}

void ModalState::check_shape() const {
  if (values.size() < 2 || values.size() != velocities.size()) {
    throw DomainError("modal state: value/velocity sequences must have equal length N+1 >= 2");
  }
  if (boundary == Boundary::Dirichlet && (values[0] != 0 || velocities[0] != 0)) {
    throw DomainError("modal state: Dirichlet states have no zero mode");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mp::isfinite(values[i]) || !mp::isfinite(velocities[i])) {
      throw DomainError("modal state: non-finite coefficient at mode " + std::to_string(i));
    }
  }
}

ModalState ModalState::truncated(int n_modes) const {
  ModalState s = zeros(boundary, n_modes);
  const std::size_t keep = std::min(values.size(), s.values.size());
  // Re-rounded: an assignment would keep the source precision.
  for (std::size_t i = 0; i < keep; ++i) {
    s.values[i] = rounded(values[i]);
    s.velocities[i] = rounded(velocities[i]);
  }
  return s;
}

FreeEvolution free_coefficients(const ModalState& state0, const std::vector<ModeEigenvalues>& eigs) {
  state0.check_shape();
  const int n_modes = state0.n_modes();
  if (static_cast<int>(eigs.size()) < n_modes) throw InternalError("free evolution: too few eigenvalues");

  FreeEvolution free;
  free.boundary = state0.boundary;
  free.zero_value = state0.values[0];
  free.zero_velocity = state0.velocities[0];
  free.critical = !eigs.empty() && eigs.front().regime == Regime::Critical;
  free.modes.reserve(static_cast<std::size_t>(n_modes));
  for (int n = 1; n <= n_modes; ++n) {
    const ModeEigenvalues& e = eigs[n - 1];
    FreeMode m;
    m.eig = e;
    m.initial_value = state0.values[n];
    m.initial_velocity = state0.velocities[n];
    const Complex u0(state0.values[n]);
    const Complex u1(state0.velocities[n]);
    if (e.regime == Regime::Critical) {
      m.c1 = u0;
      m.c2 = u1 - e.lambda_plus * u0;
    } else {
      const Complex gap = e.lambda_plus - e.lambda_minus;
      if (is_zero(gap)) throw InternalError("coincident eigenvalues outside critical damping");
      m.c2 = (e.lambda_plus * u0 - u1) / gap;
      m.c1 = u0 - m.c2;
    }
    free.modes.push_back(std::move(m));
  }
  return free;
}

namespace {

Real strip_imaginary(const Complex& z, const Real& scale) {
  const Real threshold = mp::sqrt(unit_roundoff()) * (scale + 1);
  if (mp::abs(z.im) > threshold) {
    throw InternalError("free evolution produced a non-real modal coefficient");
  }
  return z.re;
}

}  // namespace

ModalState free_state_at(const FreeEvolution& free, const Real& t) {
  if (t < 0) throw DomainError("free evolution evaluated at negative time");
  const int n_modes = static_cast<int>(free.modes.size());
  ModalState s = ModalState::zeros(free.boundary, n_modes);
  if (free.boundary == Boundary::Neumann) {
    s.values[0] = free.zero_value + free.zero_velocity * t;
    s.velocities[0] = free.zero_velocity;
  }
  for (int n = 1; n <= n_modes; ++n) {
    const FreeMode& m = free.modes[n - 1];
    const Real scale = abs(m.c1) + abs(m.c2);
    Complex value;
    Complex velocity;
    if (m.eig.regime == Regime::Critical) {
      const Complex& lam = m.eig.lambda_plus;
      const Complex e = exp(lam * t);
      const Complex lin = m.c1 + m.c2 * t;
      value = lin * e;
      velocity = (lam * lin + m.c2) * e;
    } else {
      const Complex ep = exp(m.eig.lambda_plus * t);
      const Complex em = exp(m.eig.lambda_minus * t);
      value = m.c1 * ep + m.c2 * em;
      velocity = m.c1 * m.eig.lambda_plus * ep + m.c2 * m.eig.lambda_minus * em;
    }
    s.values[n] = strip_imaginary(value, scale);
    s.velocities[n] = strip_imaginary(velocity, scale * abs(m.eig.lambda_minus));
  }
  return s;
}

std::pair<ExpPoly, ExpPoly> impulse_response(const ModeEigenvalues& eig, const Real& trace) {
  if (eig.regime == Regime::Critical) {
    const Complex& lam = eig.lambda_plus;
    const Complex k(-trace);
    ExpPoly h{ExpTerm{k, 1, lam}};
    ExpPoly dh{ExpTerm{k, 0, lam}, ExpTerm{k * lam, 1, lam}};
    return {std::move(h), std::move(dh)};
  }
  const Complex k = Complex(-trace) / (eig.lambda_plus - eig.lambda_minus);
  ExpPoly h{ExpTerm{k, 0, eig.lambda_plus}, ExpTerm{-k, 0, eig.lambda_minus}};
  ExpPoly dh{ExpTerm{k * eig.lambda_plus, 0, eig.lambda_plus},
             ExpTerm{-(k * eig.lambda_minus), 0, eig.lambda_minus}};
  return {std::move(h), std::move(dh)};
}

std::pair<ExpPoly, ExpPoly> zero_mode_impulse_response(const Real& trace) {
  const Complex k(-trace);
  return {ExpPoly{ExpTerm{k, 1, Complex()}}, ExpPoly{ExpTerm{k, 0, Complex()}}};
}

std::pair<Real, Real> duhamel_response(const ModeEigenvalues& eig, const Real& trace,
                                       const ControlSignal& control, const Real& t) {
  if (t < 0 || t > control.horizon()) throw DomainError("Duhamel response outside [0, T]");
  if (trace == 0 || control.empty()) return {Real(0), Real(0)};
  const auto [h, dh] = impulse_response(eig, trace);
  const ExpPoly& g = control.second_derivative();
  return {convolve(g, control.horizon(), h, t).re, convolve(g, control.horizon(), dh, t).re};
}

ModalState lifting_term(const BoundaryTraceExpansion& traces, const ControlSignal& control,
                        const Real& t) {
  ModalState s = ModalState::zeros(traces.boundary, traces.n_max());
  if (control.empty()) return s;
  const ControlValue v = evaluate_control(control, t);
  for (int n = 0; n <= traces.n_max(); ++n) {
    s.values[n] = traces[n] * v.f;
    s.velocities[n] = traces[n] * v.df;
  }
  return s;
}

ModalState controlled_state_at(const BeamConfig& config, const ModalState& state0,
                               const ControlSignal& control, const Real& t) {
  const int n_modes = config.n_modes;
  const ModalState data = state0.truncated(n_modes);
  const auto eigs = mode_spectrum(config.rho, n_modes);
  const auto traces = boundary_trace_coefficients(config.boundary, n_modes);

  ModalState s = free_state_at(free_coefficients(data, eigs), t);
  const ModalState lift = lifting_term(traces, control, t);
  if (!control.empty()) {
    for (int n = 1; n <= n_modes; ++n) {
      const auto [a, da] = duhamel_response(eigs[n - 1], traces[n], control, t);
      s.values[n] += a + lift.values[n];
      s.velocities[n] += da + lift.velocities[n];
    }
    if (config.boundary == Boundary::Neumann) {
      const auto [h, dh] = zero_mode_impulse_response(traces[0]);
      const ExpPoly& g = control.second_derivative();
      s.values[0] += convolve(g, control.horizon(), h, t).re + lift.values[0];
      s.velocities[0] += convolve(g, control.horizon(), dh, t).re + lift.velocities[0];
    }
  }
  return s;
}

Real sobolev_norm_squared(const ModalState& state, const Real& p, bool velocities) {
  const auto& c = velocities ? state.velocities : state.values;
  std::vector<Real> terms;
  terms.reserve(c.size());
  if (state.boundary == Boundary::Neumann && !c.empty()) terms.push_back(c[0] * c[0]);
  for (std::size_t n = 1; n < c.size(); ++n) {
    const Real w = p == 0 ? Real(1) : mp::pow(Real(static_cast<unsigned long>(n)), 2 * p);
    terms.push_back(w * c[n] * c[n]);
  }
  return pairwise_sum(terms);
}

Real sobolev_norm(const ModalState& state, const Real& p, bool velocities) {
  return mp::sqrt(sobolev_norm_squared(state, p, velocities));
}

std::pair<int, int> measurement_scale(Boundary boundary) {
  return boundary == Boundary::Dirichlet ? std::pair{3, 1} : std::pair{4, 2};
}

Real state_norm(const ModalState& state) {
  const auto [a, b] = measurement_scale(state.boundary);
  return mp::sqrt(sobolev_norm_squared(state, Real(a), false) +
                  sobolev_norm_squared(state, Real(b), true));
}

Real tail_norm(const ModalState& state, int n_cut, const Real& p) {
  std::vector<Real> terms;
  for (std::size_t n = static_cast<std::size_t>(std::max(n_cut, 0)) + 1; n < state.values.size(); ++n) {
    const Real w = mp::pow(Real(static_cast<unsigned long>(n)), 2 * p);
    terms.push_back(w * state.values[n] * state.values[n]);
  }
  return mp::sqrt(pairwise_sum(terms));
}

namespace {

double max_rate(const BeamConfig& config) {
  const int n = config.n_modes;
  const auto e = mode_eigenvalues(config.rho, n);
  return std::max(abs(e.lambda_plus).convert_to<double>(), abs(e.lambda_minus).convert_to<double>());
}

constexpr double kStabilityLimit = 2.5;  // RK4 region reaches ~2.78 on both axes
constexpr double kAccuracyStep = 5e-4;  // h * max|lambda| for the default count

}  // namespace

long minimum_stable_steps(const BeamConfig& config) {
  return static_cast<long>(std::ceil(config.horizon * max_rate(config) / kStabilityLimit));
}

long recommended_oracle_steps(const BeamConfig& config) {
  const double n2 = static_cast<double>(config.n_modes) * config.n_modes;
  const double guidance = 20.0 * n2 * config.horizon;
  const double accuracy = config.horizon * max_rate(config) / kAccuracyStep;
  return static_cast<long>(std::ceil(std::max({guidance, accuracy, 1000.0})));
}

Trajectory simulate_oracle(const BeamConfig& config, const ModalState& state0,
                           const ControlSignal* control, long steps, int samples) {
  config.validate();
  if (samples < 1) throw DomainError("simulate: samples must be >= 1");
  if (steps < minimum_stable_steps(config)) {
    throw StepSizeError("simulate: " + std::to_string(steps) +
                        " steps leave the stiffest mode outside the RK4 stability region (need >= " +
                        std::to_string(minimum_stable_steps(config)) + ")");
  }
  const int n_modes = config.n_modes;
  const ModalState data = state0.truncated(n_modes);
  const auto traces_r = boundary_trace_coefficients(config.boundary, n_modes);
  const double rho = config.rho.convert_to<double>();
  const double horizon = config.horizon;
  const double h = horizon / static_cast<double>(steps);

  std::vector<double> trace(n_modes + 1), damping(n_modes + 1), stiffness(n_modes + 1);
  for (int n = 0; n <= n_modes; ++n) {
    trace[n] = traces_r[n].convert_to<double>();
    const double n2 = static_cast<double>(n) * n;
    damping[n] = rho * n2;
    stiffness[n] = n2 * n2;
  }

  const bool forced = control != nullptr && !control->empty();
  std::vector<double> forcing;
  if (forced) {
    forcing = sample_second_derivative(*control, Real(horizon) / Real(2 * steps),
                                       static_cast<std::size_t>(2 * steps + 1));
  }

  std::vector<double> v(n_modes + 1), w(n_modes + 1);
  for (int n = 0; n <= n_modes; ++n) {
    v[n] = data.values[n].convert_to<double>();
    w[n] = data.velocities[n].convert_to<double>();
  }
  const bool has_zero_mode = config.boundary == Boundary::Neumann;
  const int first = has_zero_mode ? 0 : 1;

  double reference = 0;
  for (int n = first; n <= n_modes; ++n) reference = std::max({reference, std::abs(v[n]), std::abs(w[n])});
  double forcing_scale = 0;
  for (double f : forcing) forcing_scale = std::max(forcing_scale, std::abs(f));
  reference = std::max(reference, forcing_scale * horizon * horizon) + 1e-300;

  Trajectory traj;
  traj.boundary = config.boundary;
  traj.n_modes = n_modes;
  traj.steps = steps;

  auto record = [&](long step) {
    const double t = step == steps ? horizon : h * static_cast<double>(step);
    std::vector<double> val(n_modes + 1, 0.0), vel(n_modes + 1, 0.0);
    double f = 0, df = 0;
    if (forced) {
      const ControlValue cv = evaluate_control(*control, step == steps ? control->horizon()
                                                                       : Real(h) * Real(step));
      f = cv.f.convert_to<double>();
      df = cv.df.convert_to<double>();
    }
    for (int n = first; n <= n_modes; ++n) {
      val[n] = v[n] + trace[n] * f;
      vel[n] = w[n] + trace[n] * df;
    }
    traj.times.push_back(t);
    traj.values.push_back(std::move(val));
    traj.velocities.push_back(std::move(vel));
  };

  std::vector<long> sample_steps;
  for (int k = 0; k <= samples; ++k) {
    sample_steps.push_back(static_cast<long>(std::llround(static_cast<double>(k) * steps / samples)));
  }
  std::size_t next_sample = 0;
  if (sample_steps[next_sample] == 0) {
    record(0);
    ++next_sample;
  }

  for (long i = 0; i < steps; ++i) {
    const double f0 = forced ? forcing[2 * i] : 0.0;
    const double fm = forced ? forcing[2 * i + 1] : 0.0;
    const double f1 = forced ? forcing[2 * i + 2] : 0.0;
    for (int n = first; n <= n_modes; ++n) {
      const double c = damping[n], k = stiffness[n], x = trace[n];
      auto accel = [&](double a, double da, double f) { return -c * da - k * a - x * f; };
      const double k1v = w[n];
      const double k1w = accel(v[n], w[n], f0);
      const double k2v = w[n] + 0.5 * h * k1w;
      const double k2w = accel(v[n] + 0.5 * h * k1v, k2v, fm);
      const double k3v = w[n] + 0.5 * h * k2w;
      const double k3w = accel(v[n] + 0.5 * h * k2v, k3v, fm);
      const double k4v = w[n] + h * k3w;
      const double k4w = accel(v[n] + h * k3v, k4v, f1);
      v[n] += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      w[n] += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
      if (!std::isfinite(v[n]) || !std::isfinite(w[n]) ||
          std::abs(v[n]) > 1e6 * reference * std::max(1.0, static_cast<double>(n) * n)) {
        throw StepSizeError("simulate: integration became unstable at mode " + std::to_string(n));
      }
    }
    while (next_sample < sample_steps.size() && sample_steps[next_sample] == i + 1) {
      record(i + 1);
      ++next_sample;
    }
  }
  return traj;
}

ModalState final_state(const Trajectory& traj) {
  ModalState s = ModalState::zeros(traj.boundary, traj.n_modes);
  if (traj.values.empty()) return s;
  for (int n = 0; n <= traj.n_modes; ++n) {
    s.values[n] = traj.values.back()[n];
    s.velocities[n] = traj.velocities.back()[n];
  }
  return s;
}

}  // namespace beamctl
