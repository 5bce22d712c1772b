// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "spectrum.hpp"
#include "support.hpp"

using namespace beamctl;
using oracle::d;

TEST_SUITE("spectrum") {

TEST_CASE("damping regimes are split exactly at rho = 2") {
  PrecisionScope ps(256);
  CHECK(classify_damping(Rational(1)) == Regime::Underdamped);
  CHECK(classify_damping(Rational(2)) == Regime::Critical);
  CHECK(classify_damping(parse_rational("2.5")) == Regime::Overdamped);
  CHECK(classify_damping(parse_rational("1.9999999999")) == Regime::Underdamped);
  CHECK_THROWS_AS(classify_damping(Rational(0)), DomainError);
  CHECK_THROWS_AS(classify_damping(Rational(-1)), DomainError);
}

TEST_CASE("eigenvalue examples") {
  PrecisionScope ps(256);
  const auto e = mode_eigenvalues(Rational(1), 2);
  CHECK(d(e.beta) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(d(e.alpha) == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-15));
  CHECK(d(e.lambda_plus.im) == doctest::Approx(3.46410161513775).epsilon(1e-13));
  CHECK(d(e.lambda_minus.im) == doctest::Approx(-3.46410161513775).epsilon(1e-13));

  const auto c = mode_eigenvalues(Rational(2), 3);
  CHECK(c.regime == Regime::Critical);
  CHECK(c.lambda_plus.re == -9);
  CHECK(c.lambda_minus.re == -9);
  CHECK(c.lambda_plus.im == 0);

  const auto o = mode_eigenvalues(Rational(3), 1);
  const auto [lp, lm] = oracle::eigen_pair(3.0, 1);
  CHECK(d(o.lambda_plus.re) == doctest::Approx(lp.real()).epsilon(1e-14));
  CHECK(d(o.lambda_minus.re) == doctest::Approx(lm.real()).epsilon(1e-14));
  CHECK(d(o.lambda_plus.re) == doctest::Approx(-0.381966).epsilon(1e-6));
  CHECK(d(o.lambda_minus.re) == doctest::Approx(-2.618034).epsilon(1e-6));
}

TEST_CASE("Vieta relations hold to a few ulps in every regime") {
  PrecisionScope ps(256);
  const Real ulp = unit_roundoff() * 2;
  for (const char* rho_text : {"0.5", "1", "1.9", "2", "2.5", "3", "7/3"}) {
    const Rational rho = parse_rational(rho_text);
    for (const auto& e : mode_spectrum(rho, 20)) {
      const Real n2 = Real(e.n) * e.n;
      const Complex sum = e.lambda_plus + e.lambda_minus;
      const Complex prod = e.lambda_plus * e.lambda_minus;
      const Real sum_target = -to_real(rho) * n2;
      const Real prod_target = n2 * n2;
      CHECK(abs(sum - Complex(sum_target)) <= 10 * ulp * mp::abs(sum_target));
      CHECK(abs(prod - Complex(prod_target)) <= 10 * ulp * prod_target);
    }
  }
}

TEST_CASE("underdamped real and imaginary parts") {
  PrecisionScope ps(256);
  for (const char* rho_text : {"0.5", "1", "1.9"}) {
    const Rational rho = parse_rational(rho_text);
    const Real r = to_real(rho);
    for (const auto& e : mode_spectrum(rho, 12)) {
      const Real n2 = Real(e.n) * e.n;
      CHECK(e.lambda_plus.re == -r * n2 / 2);
      const Real im = n2 * mp::sqrt(4 - r * r) / 2;
      CHECK(mp::abs(mp::abs(e.lambda_plus.im) - im) <= 4 * unit_roundoff() * im);
      CHECK(mp::abs(mp::abs(e.lambda_minus.im) - im) <= 4 * unit_roundoff() * im);
    }
  }
}

TEST_CASE("branch ratio") {
  PrecisionScope ps(256);
  const BranchRatio a = branch_ratio(parse_rational("2.5"));
  REQUIRE(a.is_rational());
  CHECK(*a.exact == Rational(2));
  const BranchRatio b = branch_ratio(Rational(2));
  REQUIRE(b.is_rational());
  CHECK(*b.exact == Rational(1));
  const BranchRatio c = branch_ratio(Rational(3));
  CHECK_FALSE(c.is_rational());
  CHECK(mp::abs(c.value + 1 / c.value - 3) < Real("1e-70"));
  CHECK(d(c.value) == doctest::Approx(2.618034).epsilon(1e-6));
  CHECK_THROWS_AS(branch_ratio(Rational(1)), DomainError);
}

TEST_CASE("collision examples") {
  PrecisionScope ps(256);
  using P = std::vector<std::pair<int, int>>;
  CHECK(detect_collisions(BranchRatio::from_rational(Rational(2)), 4).pairs == P{{2, 1}, {4, 2}});
  CHECK(detect_collisions(BranchRatio::from_rational(Rational(3, 2)), 6).pairs == P{{3, 2}, {6, 4}});
  const CollisionScan s = detect_collisions(BranchRatio::from_real(mp::sqrt(Real(2))), 50);
  CHECK(s.pairs.empty());
  CHECK_FALSE(s.exact);
  CHECK_FALSE(s.warning.empty());
}

TEST_CASE("collision scan matches a brute-force double loop") {
  PrecisionScope ps(256);
  for (const char* q : {"2", "3/2", "5/3", "7/2", "3", "11/4", "13/12"}) {
    const Rational r = parse_rational(q);
    for (int n_max : {1, 7, 24, 50}) {
      std::vector<std::pair<int, int>> brute;
      for (int n = 1; n <= n_max; ++n) {
        for (int m = 1; m <= n_max; ++m) {
          // m^2 / r == r n^2  <=>  m == r n for positive m, n
          if (Rational(m) * m == r * r * n * n) brute.emplace_back(m, n);
        }
      }
      CHECK(detect_collisions(BranchRatio::from_rational(r), n_max).pairs == brute);
    }
  }
}

TEST_CASE("real-valued ratio close to a rational is caught within tolerance") {
  PrecisionScope ps(256);
  const CollisionScan s = detect_collisions(BranchRatio::from_real(Real(2)), 6);
  CHECK(s.pairs == std::vector<std::pair<int, int>>{{2, 1}, {4, 2}, {6, 3}});
}

TEST_CASE("boundary trace coefficients against quadrature") {
  PrecisionScope ps(256);
  const auto dir = boundary_trace_coefficients(Boundary::Dirichlet, 30);
  const auto neu = boundary_trace_coefficients(Boundary::Neumann, 30);
  CHECK(d(dir[1]) == doctest::Approx(0.797885).epsilon(1e-6));
  CHECK(d(neu[1]) == doctest::Approx(-1.595769).epsilon(1e-6));
  CHECK(neu[2] == 0);
  for (int n = 1; n <= 12; ++n) {
    CHECK(d(dir[n]) == doctest::Approx(oracle::trace_quadrature(Boundary::Dirichlet, n)).epsilon(1e-11));
    CHECK(std::abs(d(neu[n]) - oracle::trace_quadrature(Boundary::Neumann, n)) < 1e-11);
  }
  const Real c = mp::sqrt(2 / pi());
  for (int n = 1; n <= 30; ++n) {
    CHECK(mp::abs(n * mp::abs(dir[n]) - c) < Real("1e-70"));
    const Real scaled = Real(n) * n * mp::abs(neu[n]);
    CHECK((scaled == 0 || mp::abs(scaled - 2 * c) < Real("1e-70")));
    CHECK((scaled == 0) == (n % 2 == 0));
  }
}

TEST_CASE("gap statistics examples") {
  PrecisionScope ps(256);
  const GapStatistics u = gap_statistics(Rational(1), 3);
  double brute = HUGE_VAL;
  for (int m = 1; m <= 3; ++m)
    for (int n = m + 1; n <= 3; ++n)
      brute = std::min(brute, std::abs(oracle::eigen_pair(1.0, n).first - oracle::eigen_pair(1.0, m).first));
  CHECK(u.plus.min_gap == doctest::Approx(brute).epsilon(1e-14));
  CHECK(u.plus.min_gap == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(u.plus.m + u.plus.n == 3);

  const GapStatistics o = gap_statistics(parse_rational("2.5"), 4);
  CHECK(o.cross_min_gap == 0);
  CHECK(o.cross_m == 2);
  CHECK(o.cross_n == 1);

  const GapStatistics c = gap_statistics(Rational(2), 2);
  CHECK(c.plus.min_gap == doctest::Approx(3.0));
}

TEST_CASE("config validation") {
  BeamConfig c;
  CHECK_NOTHROW(c.validate());
  c.rho = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = BeamConfig{};
  c.horizon = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = BeamConfig{};
  c.n_modes = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = BeamConfig{};
  c.precision_ceiling = 128;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

}
