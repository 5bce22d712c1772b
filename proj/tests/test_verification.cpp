// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "support.hpp"
#include "verification.hpp"

using namespace beamctl;
using oracle::d;

namespace {

BeamConfig config(const char* rho, int n_modes, Boundary b = Boundary::Dirichlet) {
  BeamConfig c;
  c.rho = parse_rational(rho);
  c.n_modes = n_modes;
  c.boundary = b;
  return c;
}

void check_controlled(const ExperimentResult& r) {
  CHECK(r.verdict == Verdict::Controlled);
  CHECK(r.cause.empty());
  CHECK(d(r.final_relative) <= 1e-6);
  CHECK(d(r.oracle_relative) <= 1e-6);
  CHECK(d(r.oracle_deviation) <= 1e-6);
  CHECK(r.final_value_norm <= Real(r.config.tolerance) * (r.initial_value_norm + r.initial_velocity_norm));
}

}  // namespace

TEST_SUITE("verification") {

TEST_CASE("mode-1 fixture is controlled") {
  PrecisionScope ps(256);
  check_controlled(null_control_experiment(config("1", 6), fixture_mode1(Boundary::Dirichlet, 6)));
}

TEST_CASE("zero data is controlled by the zero control") {
  PrecisionScope ps(256);
  const auto r = null_control_experiment(config("1", 4), ModalState::zeros(Boundary::Dirichlet, 4));
  CHECK(r.verdict == Verdict::Controlled);
  CHECK(r.control_cost == 0);
}

TEST_CASE("collided data at rho = 5/2 is uncontrollable") {
  PrecisionScope ps(256);
  const auto r = null_control_experiment(config("2.5", 6), fixture_random(Boundary::Dirichlet, 6, 3));
  CHECK(r.verdict == Verdict::Uncontrollable);
  CHECK(r.cause == "ResonanceDefect");
  CHECK(r.cause_status == Status::Uncontrollable);
  CHECK_FALSE(r.synthesis.has_value());
}

TEST_CASE("every regime is controlled on admissible random data") {
  PrecisionScope ps(256);
  for (const char* rho : {"1", "2", "3"}) {
    for (std::uint64_t seed : {1u, 2u}) {
      check_controlled(null_control_experiment(config(rho, 6), fixture_random(Boundary::Dirichlet, 6, seed)));
    }
  }
  const auto cfg = config("2.5", 6);
  check_controlled(null_control_experiment(cfg, oracle::resonance_safe_state(cfg, 6)));
  check_controlled(null_control_experiment(cfg, state_from_data(Boundary::Dirichlet, 6, {{5, Real(1), Real(0)}})));
}

TEST_CASE("Neumann screening") {
  PrecisionScope ps(256);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto s = oracle::random_state(Boundary::Neumann, 5, seed);
    const auto r = null_control_experiment(config("1", 5, Boundary::Neumann), s);
    CHECK(r.verdict == Verdict::Uncontrollable);
    CHECK(r.cause == "UncontrollableMode");
  }
  auto mean = state_from_data(Boundary::Neumann, 5, {{0, Real("0.1"), Real(0)}, {1, Real(1), Real(0)}});
  const auto m = null_control_experiment(config("1", 5, Boundary::Neumann), mean);
  CHECK(m.verdict == Verdict::Uncontrollable);
  CHECK(m.cause == "AdmissibilityFailure");
  CHECK(m.cause_status == Status::Uncontrollable);

  check_controlled(null_control_experiment(config("1", 5, Boundary::Neumann),
                                           fixture_random(Boundary::Neumann, 5, 7)));
}

TEST_CASE("cost sweep") {
  PrecisionScope ps(256);
  const auto sw = cost_sweep(config("1", 6), fixture_mode1(Boundary::Dirichlet, 6), {0.25, 0.5, 1.0, 2.0});
  REQUIRE(sw.points.size() == 4);
  for (const auto& p : sw.points) CHECK(p.ok);
  CHECK(sw.fitted);
  CHECK(sw.slope > 0);
  CHECK(sw.r_squared >= 0.9);
  CHECK(sw.monotone);

  const auto zero = cost_sweep(config("1", 4), ModalState::zeros(Boundary::Dirichlet, 4), {0.5, 1.0});
  CHECK_FALSE(zero.fitted);
  CHECK_FALSE(zero.fit_note.empty());
  for (const auto& p : zero.points) CHECK(p.cost == 0);

  const auto bad = cost_sweep(config("2.5", 4), fixture_random(Boundary::Dirichlet, 4, 1), {0.5, 1.0});
  for (const auto& p : bad.points) {
    CHECK_FALSE(p.ok);
    CHECK(p.cause == "ResonanceDefect");
  }
  CHECK_FALSE(bad.fitted);
}

TEST_CASE("closed form against numerics") {
  PrecisionScope ps(256);
  const auto a = crosscheck_suite(config("1", 4), 50, 1);
  CHECK(a.duhamel_vs_oracle < 1e-6);
  CHECK(a.free_vs_oracle < 1e-6);
  CHECK(a.gram_vs_quadrature < 1e-8);
  for (const char* rho : {"2", "3"}) {
    const auto b = crosscheck_suite(config(rho, 4), 15, 2);
    CHECK(b.duhamel_vs_oracle < 1e-6);
    CHECK(b.free_vs_oracle < 1e-6);
    CHECK(b.gram_vs_quadrature < 1e-8);
  }
}

TEST_CASE("fixtures and data parsing") {
  PrecisionScope ps(256);
  const auto m = make_fixture("mode1", Boundary::Dirichlet, 4);
  CHECK(m.values[1] == 1);
  const auto a = make_fixture("random-seeded:5", Boundary::Dirichlet, 4);
  const auto b = fixture_random(Boundary::Dirichlet, 4, 5);
  CHECK(a.values == b.values);
  CHECK(a.velocities == b.velocities);
  CHECK_THROWS_AS(make_fixture("nope", Boundary::Dirichlet, 4), DomainError);

  const auto n = fixture_random(Boundary::Neumann, 6, 4);
  for (int k = 0; k <= 6; k += 2) {
    CHECK(n.values[static_cast<std::size_t>(k)] == 0);
    CHECK(n.velocities[static_cast<std::size_t>(k)] == 0);
  }

  const auto data = parse_mode_data("1:1,3:0.3:0,2:0:0.2");
  REQUIRE(data.size() == 3);
  CHECK(data[1].mode == 3);
  CHECK(data[1].value == Real("0.3"));
  CHECK(data[2].velocity == Real("0.2"));
  CHECK_THROWS_AS(parse_mode_data("x:1"), DomainError);
  CHECK_THROWS_AS(state_from_data(Boundary::Dirichlet, 3, {{4, Real(1), Real(0)}}), DomainError);
}

TEST_CASE("line fit") {
  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.max_abs_residual < 1e-12);
}

}
