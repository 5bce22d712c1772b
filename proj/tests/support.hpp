// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Independent double-precision oracles shared by the test binaries. Nothing
// here calls into the closed-form machinery under test except where a helper
// says so explicitly.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "modal_dynamics.hpp"
#include "moment_problem.hpp"
#include "numeric.hpp"

namespace oracle {

using cd = std::complex<double>;

inline double d(const beamctl::Real& x) { return x.convert_to<double>(); }
inline cd d(const beamctl::Complex& z) { return {d(z.re), d(z.im)}; }

// Adaptive 61-point Gauss-Kronrod on [a, b].
inline double quad(const std::function<double(double)>& f, double a, double b) {
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14, &err);
}

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Roots of lambda^2 + rho n^2 lambda + n^4 = 0, plus root first.
inline std::pair<cd, cd> eigen_pair(double rho, int n) {
  const double n2 = double(n) * n;
  const cd disc = std::sqrt(cd(rho * rho - 4.0, 0.0));
  return {n2 * (-rho + disc) / 2.0, n2 * (-rho - disc) / 2.0};
}

// Trace coefficient by quadrature: Dirichlet int (x/pi) sqrt(2/pi) sin(nx),
// Neumann int x sqrt(2/pi) cos(nx).
inline double trace_quadrature(beamctl::Boundary b, int n) {
  const double c = std::sqrt(2.0 / M_PI);
  if (b == beamctl::Boundary::Dirichlet) {
    return quad([&](double x) { return x / M_PI * c * std::sin(n * x); }, 0.0, M_PI);
  }
  return quad([&](double x) { return x * c * std::cos(n * x); }, 0.0, M_PI);
}

// Free damped oscillator a'' + rho n^2 a' + n^4 a = 0, a(0)=a0, a'(0)=v0, by
// real formulas per regime.
inline std::pair<double, double> free_oscillator(double rho, int n, double a0, double v0, double t) {
  const double n2 = double(n) * n;
  const double beta = -rho * n2 / 2;
  const double disc = rho * rho - 4.0;
  if (disc < 0) {
    const double w = n2 * std::sqrt(-disc) / 2;
    const double c = a0, s = (v0 - beta * a0) / w;
    const double e = std::exp(beta * t);
    const double a = e * (c * std::cos(w * t) + s * std::sin(w * t));
    const double da = beta * a + e * (-c * w * std::sin(w * t) + s * w * std::cos(w * t));
    return {a, da};
  }
  if (disc == 0) {
    const double c1 = a0, c2 = v0 - beta * a0;
    const double e = std::exp(beta * t);
    return {e * (c1 + c2 * t), e * (beta * (c1 + c2 * t) + c2)};
  }
  const double root = n2 * std::sqrt(disc) / 2;
  const double lp = beta + root, lm = beta - root;
  const double c1 = (v0 - lm * a0) / (lp - lm), c2 = a0 - c1;
  return {c1 * std::exp(lp * t) + c2 * std::exp(lm * t),
          c1 * lp * std::exp(lp * t) + c2 * lm * std::exp(lm * t)};
}

// Response of a'' + rho n^2 a' + n^4 a = -x f''(t), zero data, via the
// variation-of-constants integral evaluated by quadrature.
inline double forced_response(double rho, int n, double x, const std::function<double(double)>& f2, double t) {
  auto kernel = [&](double u) { return free_oscillator(rho, n, 0.0, 1.0, u).first; };
  return -x * quad([&](double s) { return kernel(t - s) * f2(s); }, 0.0, t);
}

inline beamctl::ModalState random_state(beamctl::Boundary b, int n_modes, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto s = beamctl::ModalState::zeros(b, n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    s.values[static_cast<std::size_t>(n)] = beamctl::Real(u(gen));
    s.velocities[static_cast<std::size_t>(n)] = beamctl::Real(u(gen));
  }
  return s;
}

// Data for rho = 5/2 whose collided targets agree: the defect of each pair
// (m, n) is affine in the velocity of mode m, so that velocity is solved for
// pair by pair in increasing m. Uses the moment right-hand side under test.
inline beamctl::ModalState resonance_safe_state(const beamctl::BeamConfig& config, std::uint64_t seed) {
  using namespace beamctl;
  ModalState s = random_state(config.boundary, config.n_modes, seed);
  const auto eigs = mode_spectrum(config.rho, config.n_modes);
  const auto traces = boundary_trace_coefficients(config.boundary, config.n_modes);
  const Real horizon(config.horizon);
  const auto collisions = detect_collisions(branch_ratio(config.rho), config.n_modes).pairs;
  auto defect = [&](const ModalState& st, int m, int n) {
    const MomentRHS r = moment_rhs(free_coefficients(st, eigs), horizon, traces);
    return Real(r.zeta1[static_cast<std::size_t>(m) - 1].re - r.zeta2[static_cast<std::size_t>(n) - 1].re);
  };
  for (const auto& [m, n] : collisions) {
    auto& v = s.velocities[static_cast<std::size_t>(m)];
    v = 0;
    const Real d0 = defect(s, m, n);
    v = 1;
    const Real d1 = defect(s, m, n) - d0;
    v = -d0 / d1;
  }
  return s;
}

}  // namespace oracle
