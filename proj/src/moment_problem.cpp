// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "moment_problem.hpp"

#include <sstream>

#include "errors.hpp"

namespace beamctl {

namespace {

constexpr double kDataTolerance = 1e-14;
constexpr double kCollisionTolerance = 1e-10;

Real data_norm_of(const FreeEvolution& free) {
  std::vector<Real> terms{free.zero_value * free.zero_value, free.zero_velocity * free.zero_velocity};
  for (const auto& m : free.modes) {
    terms.push_back(m.initial_value * m.initial_value);
    terms.push_back(m.initial_velocity * m.initial_velocity);
  }
  return mp::sqrt(pairwise_sum(terms));
}

}  // namespace

MomentRHS moment_rhs(const FreeEvolution& free, const Real& horizon,
                     const BoundaryTraceExpansion& traces) {
  const std::size_t n_modes = free.modes.size();
  if (traces.n_max() < static_cast<int>(n_modes)) throw InternalError("moment rhs: trace expansion too short");
  MomentRHS rhs;
  rhs.gamma1.resize(n_modes);
  rhs.gamma2.resize(n_modes);
  rhs.zeta1.resize(n_modes);
  rhs.zeta2.resize(n_modes);

  const Real norm = data_norm_of(free);
  const ModalState at_horizon = free_state_at(free, horizon);
  for (std::size_t i = 0; i < n_modes; ++i) {
    const int n = static_cast<int>(i) + 1;
    const FreeMode& m = free.modes[i];
    const Real& x = traces[n];
    rhs.gamma1[i] = Complex(-at_horizon.values[n]);
    rhs.gamma2[i] = Complex(-at_horizon.velocities[n]);
    if (x == 0) {
      const Real carried = mp::sqrt(m.initial_value * m.initial_value +
                                    m.initial_velocity * m.initial_velocity);
      if (carried > kDataTolerance * norm) {
        std::ostringstream msg;
        msg << "mode " << n << " has zero boundary-trace coefficient but carries initial data ("
            << carried.convert_to<double>() << "); the control cannot reach it";
        throw UncontrollableMode(n, msg.str());
      }
      continue;
    }
    const Complex& g1 = rhs.gamma1[i];
    const Complex& g2 = rhs.gamma2[i];
    const Complex xn(x);
    if (m.eig.regime == Regime::Critical) {
      const Complex& lam = m.eig.lambda_plus;
      rhs.zeta1[i] = (lam * g1 - g2) / xn;
      rhs.zeta2[i] = -g1 / xn;
    } else {
      rhs.zeta1[i] = (m.eig.lambda_minus * g1 - g2) / xn;
      rhs.zeta2[i] = (m.eig.lambda_plus * g1 - g2) / xn;
    }
  }
  return rhs;
}

KernelSet constraint_kernels(const BeamConfig& config) {
  config.validate();
  const auto traces = boundary_trace_coefficients(config.boundary, config.n_modes);
  const Regime regime = classify_damping(config.rho);

  KernelSet set;
  set.kernels.push_back({KernelDescriptor::Kind::Constant, Complex(), 0, 0});
  set.kernels.push_back({KernelDescriptor::Kind::Linear, Complex(), 0, 0});

  std::vector<std::pair<int, int>> collided;
  if (regime == Regime::Overdamped) {
    const BranchRatio r = branch_ratio(config.rho);
    if (r.is_rational()) collided = detect_collisions(r, config.n_modes).pairs;
  }
  auto plus_dropped = [&](int m) {
    for (const auto& [pm, pn] : collided) {
      if (pm == m && traces[pn] != 0) return pn;
    }
    return 0;
  };

  for (int n = 1; n <= config.n_modes; ++n) {
    if (traces[n] == 0) continue;
    const ModeEigenvalues e = mode_eigenvalues(config.rho, n);
    if (regime == Regime::Critical) {
      set.kernels.push_back({KernelDescriptor::Kind::Exponential, e.lambda_plus, n, '+'});
      set.kernels.push_back({KernelDescriptor::Kind::PolyExponential, e.lambda_plus, n, '-'});
      continue;
    }
    if (const int partner = plus_dropped(n); partner != 0) {
      set.collisions.push_back({n, partner, e.lambda_plus, 0.0});
    } else {
      set.kernels.push_back({KernelDescriptor::Kind::Exponential, e.lambda_plus, n, '+'});
    }
    set.kernels.push_back({KernelDescriptor::Kind::Exponential, e.lambda_minus, n, '-'});
  }
  return set;
}

MomentSystem assemble(const BeamConfig& config, const ModalState& state0) {
  config.validate();
  const ModalState data = state0.truncated(config.n_modes);
  data.check_shape();
  if (data.boundary != config.boundary) throw DomainError("state boundary does not match config");

  const auto eigs = mode_spectrum(config.rho, config.n_modes);
  const auto traces = boundary_trace_coefficients(config.boundary, config.n_modes);
  const FreeEvolution free = free_coefficients(data, eigs);

  MomentSystem sys;
  sys.boundary = config.boundary;
  sys.rho = config.rho;
  sys.horizon = Real(config.horizon);
  sys.n_modes = config.n_modes;
  sys.data_norm = data_norm_of(free);
  sys.moments = moment_rhs(free, sys.horizon, traces);

  KernelSet set = constraint_kernels(config);
  sys.kernels = std::move(set.kernels);
  sys.collisions = std::move(set.collisions);
  sys.rhs.reserve(sys.kernels.size());
  for (const auto& k : sys.kernels) {
    if (k.mode == 0) {
      sys.rhs.emplace_back();
      continue;
    }
    const std::size_t i = static_cast<std::size_t>(k.mode) - 1;
    sys.rhs.push_back(k.branch == '+' ? sys.moments.zeta1[i] : sys.moments.zeta2[i]);
  }

  // Conjugate kernel pairs of real data carry conjugate moments.
  for (std::size_t k = 0; k + 1 < sys.kernels.size(); ++k) {
    const auto& a = sys.kernels[k];
    const auto& b = sys.kernels[k + 1];
    if (a.kind == KernelDescriptor::Kind::Exponential && a.branch == '+' && b.branch == '-' &&
        a.mode == b.mode && a.lambda.im != 0) {
      const Real mismatch = abs(sys.rhs[k + 1] - conj(sys.rhs[k]));
      if (mismatch > mp::sqrt(unit_roundoff()) * (abs(sys.rhs[k]) + 1)) {
        throw InternalError("moment targets of a conjugate kernel pair are not conjugate");
      }
      sys.rhs[k + 1] = conj(sys.rhs[k]);
    }
  }

  for (auto& c : sys.collisions) {
    const Complex& dropped = sys.moments.zeta1[static_cast<std::size_t>(c.plus_mode) - 1];
    const Complex& kept = sys.moments.zeta2[static_cast<std::size_t>(c.minus_mode) - 1];
    const Real defect = abs(dropped - kept);
    c.defect = defect.convert_to<double>();
    const Real scale = mp::fmax(abs(dropped), abs(kept));
    if (defect > kCollisionTolerance * scale && defect > 0) {
      std::ostringstream msg;
      msg << "lambda_" << c.plus_mode << "^+ = lambda_" << c.minus_mode
          << "^- but the two constraints demand different moments (defect " << c.defect << ")";
      throw ResonanceDefect(c.plus_mode, c.minus_mode, c.defect,
                            sys.data_norm.convert_to<double>(), msg.str());
    }
  }
  return sys;
}

std::vector<RealKernel> MomentSystem::real_kernels() const {
  std::vector<RealKernel> out;
  out.reserve(kernels.size());
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const auto& d = kernels[k];
    switch (d.kind) {
      case KernelDescriptor::Kind::Constant:
        out.push_back({RealKernel::Kind::Constant, Complex(), 0, 0});
        break;
      case KernelDescriptor::Kind::Linear:
        out.push_back({RealKernel::Kind::Linear, Complex(), 0, 0});
        break;
      case KernelDescriptor::Kind::PolyExponential:
        out.push_back({RealKernel::Kind::PolyExpReal, d.lambda, d.mode, d.branch});
        break;
      case KernelDescriptor::Kind::Exponential:
        if (d.lambda.im == 0) {
          out.push_back({RealKernel::Kind::ExpReal, d.lambda, d.mode, d.branch});
        } else if (d.branch == '+') {
          out.push_back({RealKernel::Kind::ExpCos, d.lambda, d.mode, '+'});
        } else {
          // Partner of the preceding '+' kernel: its span is the sine part.
          out.push_back({RealKernel::Kind::ExpSin, conj(d.lambda), d.mode, '+'});
        }
        break;
    }
  }
  return out;
}

std::vector<Real> MomentSystem::real_targets() const {
  std::vector<Real> out;
  out.reserve(rhs.size());
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const auto& d = kernels[k];
    if (d.kind == KernelDescriptor::Kind::Exponential && d.lambda.im != 0) {
      // <f'', Re e^{l tau}> = Re M, <f'', Im e^{l tau}> = Im M for real f''.
      out.push_back(d.branch == '+' ? rhs[k].re : rhs[k - 1].im);
    } else {
      out.push_back(rhs[k].re);
    }
  }
  return out;
}

AdmissibilityResult neumann_admissibility(const ModalState& state0) {
  if (state0.boundary != Boundary::Neumann) throw DomainError("admissibility screen applies to Neumann data");
  state0.check_shape();
  std::vector<Real> terms;
  for (std::size_t n = 0; n < state0.values.size(); ++n) {
    terms.push_back(state0.values[n] * state0.values[n]);
    terms.push_back(state0.velocities[n] * state0.velocities[n]);
  }
  const Real norm = mp::sqrt(pairwise_sum(terms));
  const Real root_pi = mp::sqrt(pi());
  AdmissibilityResult r;
  r.value_residual = root_pi * state0.values[0];
  r.velocity_residual = root_pi * state0.velocities[0];
  const Real limit = Real(1e-12) * norm;
  r.pass = mp::abs(state0.values[0]) <= limit && mp::abs(state0.velocities[0]) <= limit;
  return r;
}

}  // namespace beamctl
