// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "modal_dynamics.hpp"
#include "support.hpp"

using namespace beamctl;
using oracle::d;

namespace {

ModalState single(Boundary b, int n_modes, int n, double value, double velocity) {
  auto s = ModalState::zeros(b, n_modes);
  s.values[static_cast<std::size_t>(n)] = value;
  s.velocities[static_cast<std::size_t>(n)] = velocity;
  return s;
}

ControlSignal constant_control(double horizon) {
  return ControlSignal({RealKernel{}}, {Real(1)}, Real(horizon));
}

}  // namespace

TEST_SUITE("modal_dynamics") {

TEST_CASE("free coefficients examples") {
  PrecisionScope ps(256);
  const auto f = free_coefficients(single(Boundary::Dirichlet, 1, 1, 1, 0), mode_spectrum(Rational(1), 1));
  const auto& m = f.modes[0];
  CHECK(d(m.c2.re) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d(m.c2.im) == doctest::Approx(1 / (2 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(m.c1.re == m.c2.re);
  CHECK(m.c1.im == -m.c2.im);

  const auto z = free_coefficients(ModalState::zeros(Boundary::Dirichlet, 3), mode_spectrum(Rational(1), 3));
  for (const auto& mode : z.modes) {
    CHECK(is_zero(mode.c1));
    CHECK(is_zero(mode.c2));
  }

  const auto c = free_coefficients(single(Boundary::Dirichlet, 1, 1, 1, 0), mode_spectrum(Rational(2), 1));
  CHECK(c.critical);
  CHECK(c.modes[0].c1.re == 1);
  CHECK(c.modes[0].c2.re == 1);
}

TEST_CASE("free evolution matches the real damped-oscillator formulas") {
  PrecisionScope ps(256);
  const auto s = single(Boundary::Dirichlet, 1, 1, 1, 0);
  const auto f = free_coefficients(s, mode_spectrum(Rational(1), 1));
  const double w = std::sqrt(3.0) / 2;
  const double closed = std::exp(-0.5) * (std::cos(w) + std::sin(w) / (2 * w));
  CHECK(d(free_state_at(f, Real(1)).values[1]) == doctest::Approx(closed).epsilon(1e-14));
  CHECK(d(free_state_at(f, Real(1)).values[1]) == doctest::Approx(0.659700).epsilon(1e-6));

  for (const char* rho : {"0.5", "1", "2", "3"}) {
    const auto st = oracle::random_state(Boundary::Dirichlet, 5, 11);
    const auto fe = free_coefficients(st, mode_spectrum(parse_rational(rho), 5));
    for (double t : {0.0, 0.13, 0.5, 1.0}) {
      const ModalState at = free_state_at(fe, Real(t));
      for (int n = 1; n <= 5; ++n) {
        const auto [a, da] = oracle::free_oscillator(std::stod(rho), n, d(st.values[n]), d(st.velocities[n]), t);
        CHECK(std::abs(d(at.values[n]) - a) <= 1e-12 * (1 + std::abs(a)));
        CHECK(std::abs(d(at.velocities[n]) - da) <= 1e-12 * (1 + std::abs(da)) * n * n);
      }
    }
  }
}

TEST_CASE("free evolution reproduces the initial state at t = 0") {
  PrecisionScope ps(128);
  const char* rhos[] = {"0.5", "1", "1.9", "2", "2.5", "3"};
  for (int draw = 0; draw < 1000; ++draw) {
    const Boundary b = draw % 3 == 0 ? Boundary::Neumann : Boundary::Dirichlet;
    const auto s = oracle::random_state(b, 6, 1000 + static_cast<std::uint64_t>(draw));
    const auto f = free_coefficients(s, mode_spectrum(parse_rational(rhos[draw % 6]), 6));
    const ModalState back = free_state_at(f, Real(0));
    for (int n = 1; n <= 6; ++n) {
      const auto i = static_cast<std::size_t>(n);
      REQUIRE(mp::abs(back.values[i] - s.values[i]) <= Real("1e-10") * (mp::abs(s.values[i]) + 1e-300));
      REQUIRE(mp::abs(back.velocities[i] - s.velocities[i]) <= Real("1e-10") * (mp::abs(s.velocities[i]) + 1e-300));
    }
  }
}

TEST_CASE("overdamped free decay is eventually monotone") {
  PrecisionScope ps(256);
  const auto f = free_coefficients(single(Boundary::Dirichlet, 1, 1, 0, 1), mode_spectrum(Rational(3), 1));
  Real prev = free_state_at(f, Real(2)).values[1];
  CHECK(prev > 0);
  for (int k = 1; k <= 60; ++k) {
    const Real v = free_state_at(f, Real(2) + Real(k) / 2).values[1];
    CHECK(v < prev);
    CHECK(v > 0);
    prev = v;
  }
  CHECK(prev < Real("1e-5"));
}

TEST_CASE("per-mode energy is non-increasing without control") {
  PrecisionScope ps(256);
  for (const char* rho : {"0.3", "1", "2", "3"}) {
    const auto s = oracle::random_state(Boundary::Dirichlet, 4, 5);
    const auto f = free_coefficients(s, mode_spectrum(parse_rational(rho), 4));
    for (int n = 1; n <= 4; ++n) {
      Real prev = -1;
      for (int k = 0; k <= 40; ++k) {
        const ModalState at = free_state_at(f, Real(k) / 20);
        const Real a = at.values[n], v = at.velocities[n];
        const Real energy = Real(n) * n * n * n * a * a + v * v;
        if (prev >= 0) CHECK(energy <= prev * (1 + Real("1e-60")));
        prev = energy;
      }
    }
  }
}

TEST_CASE("Duhamel response examples") {
  PrecisionScope ps(256);
  const auto eig = mode_eigenvalues(Rational(1), 1);
  const auto traces = boundary_trace_coefficients(Boundary::Dirichlet, 1);
  const Real x1 = traces[1];

  const ControlSignal zero({RealKernel{}}, {Real(0)}, Real(1));
  const auto [z0, z1] = duhamel_response(eig, x1, zero, Real(1));
  CHECK(z0 == 0);
  CHECK(z1 == 0);

  const auto [a, da] = duhamel_response(eig, x1, constant_control(1), Real(1));
  const double bracket = oracle::quad(
      [](double u) { return std::exp(-u / 2) * std::sin(std::sqrt(3.0) * u / 2) / (std::sqrt(3.0) / 2); }, 0, 1);
  CHECK(bracket == doctest::Approx(0.340300).epsilon(1e-6));
  CHECK(d(a) == doctest::Approx(-d(x1) * bracket).epsilon(1e-12));
  CHECK(d(a) == doctest::Approx(-0.271520).epsilon(1e-6));
  (void)da;

  // constant forcing over a long horizon settles at the equilibrium -x_n / n^4
  for (int n : {1, 2}) {
    const auto e = mode_eigenvalues(Rational(1), n);
    const auto tr = boundary_trace_coefficients(Boundary::Dirichlet, n);
    const auto [inf_value, inf_velocity] = duhamel_response(e, tr[n], constant_control(40), Real(40));
    CHECK(d(inf_value) == doctest::Approx(-d(tr[n]) / std::pow(n, 4)).epsilon(1e-6));
    CHECK(std::abs(d(inf_velocity)) < 1e-6);
  }
}

TEST_CASE("controlled state equals free part plus forced part plus lifting") {
  PrecisionScope ps(256);
  for (const char* rho_text : {"1", "2", "3"}) {
    BeamConfig cfg;
    cfg.rho = parse_rational(rho_text);
    cfg.n_modes = 3;
    cfg.horizon = 1;
    const double rho = std::stod(rho_text);
    const ControlSignal control({RealKernel{}, RealKernel{RealKernel::Kind::Linear},
                                 RealKernel{RealKernel::Kind::ExpReal, Complex(Real(-2))}},
                                {Real("0.7"), Real("-1.3"), Real("0.4")}, Real(1));
    auto f2 = [](double s) { return 0.7 - 1.3 * s + 0.4 * std::exp(-2 * (1 - s)); };
    const auto s = oracle::random_state(Boundary::Dirichlet, 3, 21);
    const auto traces = boundary_trace_coefficients(Boundary::Dirichlet, 3);
    for (double t : {0.35, 1.0}) {
      const ModalState got = controlled_state_at(cfg, s, control, Real(t));
      const double f = d(evaluate_control(control, Real(t)).f);
      for (int n = 1; n <= 3; ++n) {
        const double x = d(traces[n]);
        const double want = oracle::free_oscillator(rho, n, d(s.values[n]), d(s.velocities[n]), t).first +
                            oracle::forced_response(rho, n, x, f2, t) + x * f;
        CHECK(d(got.values[n]) == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("Sobolev norms") {
  PrecisionScope ps(256);
  CHECK(sobolev_norm(single(Boundary::Dirichlet, 3, 1, 1, 0), Real(3)) == 1);
  CHECK(sobolev_norm(single(Boundary::Dirichlet, 3, 2, 1, 0), Real(3)) == 8);
  auto two = ModalState::zeros(Boundary::Dirichlet, 2);
  two.values[1] = 1;
  two.values[2] = 1;
  CHECK(mp::abs(sobolev_norm(two, Real(0)) - mp::sqrt(Real(2))) < Real("1e-75"));

  const auto r = oracle::random_state(Boundary::Dirichlet, 9, 3);
  Real direct = 0, direct_v = 0;
  for (int n = 1; n <= 9; ++n) {
    direct += r.values[n] * r.values[n];
    direct_v += r.velocities[n] * r.velocities[n];
  }
  CHECK(mp::abs(sobolev_norm_squared(r, Real(0)) - direct) <= 16 * unit_roundoff() * direct);
  CHECK(mp::abs(sobolev_norm_squared(r, Real(0), true) - direct_v) <= 16 * unit_roundoff() * direct_v);
  CHECK(tail_norm(single(Boundary::Dirichlet, 6, 5, 1, 0), 4, Real(1)) == 5);
  CHECK(tail_norm(single(Boundary::Dirichlet, 6, 5, 1, 0), 5, Real(1)) == 0);
}

TEST_CASE("RK4 oracle") {
  PrecisionScope ps(256);
  BeamConfig cfg;
  cfg.n_modes = 4;
  const auto zero = simulate_oracle(cfg, ModalState::zeros(Boundary::Dirichlet, 4), nullptr,
                                    recommended_oracle_steps(cfg), 10);
  for (const auto& row : zero.values) {
    for (double v : row) CHECK(v == 0);
  }
  CHECK_THROWS_AS(simulate_oracle(cfg, ModalState::zeros(Boundary::Dirichlet, 4), nullptr, 3, 1), StepSizeError);

  BeamConfig stiff = cfg;
  stiff.rho = 3;
  CHECK(recommended_oracle_steps(stiff) > recommended_oracle_steps(cfg));

  const auto s = oracle::random_state(Boundary::Dirichlet, 4, 8);
  const auto tr = simulate_oracle(cfg, s, nullptr, recommended_oracle_steps(cfg), 4);
  const ModalState fin = final_state(tr);
  for (int n = 1; n <= 4; ++n) {
    const auto [a, da] = oracle::free_oscillator(1.0, n, d(s.values[n]), d(s.velocities[n]), 1.0);
    CHECK(std::abs(d(fin.values[n]) - a) < 1e-9);
    CHECK(std::abs(d(fin.velocities[n]) - da) < 1e-8);
  }
}

TEST_CASE("state shape checks") {
  PrecisionScope ps(256);
  CHECK_THROWS_AS(ModalState::zeros(Boundary::Dirichlet, 0), DomainError);
  auto s = ModalState::zeros(Boundary::Dirichlet, 2);
  s.values[0] = 1;
  CHECK_THROWS_AS(s.check_shape(), DomainError);
  auto t = ModalState::zeros(Boundary::Dirichlet, 2);
  t.velocities.pop_back();
  CHECK_THROWS_AS(t.check_shape(), DomainError);
}

}
