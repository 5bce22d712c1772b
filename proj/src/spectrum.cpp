// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "spectrum.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace beamctl {

const char* to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Underdamped: return "underdamped";
    case Regime::Critical: return "critical";
    case Regime::Overdamped: return "overdamped";
  }
  return "unknown";
}

void BeamConfig::validate() const {
  if (rho <= 0) throw DomainError("rho must be positive (got " + beamctl::to_string(rho) + ")");
  if (!(horizon > 0) || !std::isfinite(horizon)) throw DomainError("horizon T must be positive");
  if (n_modes < 1) throw DomainError("n_modes must be at least 1");
  if (precision_bits < 53) throw DomainError("precision_bits must be at least 53");
  if (!(regularization >= 0) || !std::isfinite(regularization)) {
    throw DomainError("regularization must be nonnegative");
  }
  if (precision_ceiling < precision_bits) {
    throw DomainError("precision ceiling must not be below precision_bits");
  }
  if (!(tolerance > 0)) throw DomainError("tolerance must be positive");
  if (oracle_steps < 0) throw DomainError("oracle_steps must be nonnegative");
}

Regime classify_damping(const Rational& rho) {
  if (rho <= 0) throw DomainError("rho must be positive");
  if (rho < 2) return Regime::Underdamped;
  if (rho == 2) return Regime::Critical;
  return Regime::Overdamped;
}

BranchRatio BranchRatio::from_rational(const Rational& r) {
  BranchRatio b;
  b.value = to_real(r);
  b.exact = r;
  return b;
}

BranchRatio BranchRatio::from_real(const Real& r) {
  BranchRatio b;
  b.value = r;
  return b;
}

BranchRatio branch_ratio(const Rational& rho) {
  if (rho < 2) throw DomainError("branch ratio requires rho >= 2 (branches are complex)");
  const Rational disc = rho * rho - 4;
  Rational root;
  if (rational_sqrt(disc, root)) return BranchRatio::from_rational((rho + root) / 2);
  const Real rho_r = to_real(rho);
  return BranchRatio::from_real((rho_r + mp::sqrt(to_real(disc))) / 2);
}

ModeEigenvalues mode_eigenvalues(const Rational& rho, int n) {
  if (n < 1) throw DomainError("mode index must be >= 1");
  ModeEigenvalues e;
  e.n = n;
  e.regime = classify_damping(rho);
  const Real n2 = Real(n) * Real(n);
  const Real rho_r = to_real(rho);
  e.beta = -rho_r * n2 / 2;
  switch (e.regime) {
    case Regime::Underdamped: {
      e.alpha = n2 * mp::sqrt(to_real(4 - rho * rho)) / 2;
      e.lambda_plus = Complex(e.beta, e.alpha);
      e.lambda_minus = Complex(e.beta, -e.alpha);
      break;
    }
    case Regime::Critical: {
      e.alpha = 0;
      e.lambda_plus = Complex(-n2);
      e.lambda_minus = Complex(-n2);
      break;
    }
    case Regime::Overdamped: {
      e.alpha = 0;
      const BranchRatio r = branch_ratio(rho);
      e.lambda_plus = Complex(-n2 / r.value);
      e.lambda_minus = Complex(-n2 * r.value);
      break;
    }
  }
  return e;
}

std::vector<ModeEigenvalues> mode_spectrum(const Rational& rho, int n_max) {
  std::vector<ModeEigenvalues> out;
  out.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
  for (int n = 1; n <= n_max; ++n) out.push_back(mode_eigenvalues(rho, n));
  return out;
}

CollisionScan detect_collisions(const BranchRatio& r, int n_max) {
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  CollisionScan scan;
  if (r.exact) {
    const Rational& q = *r.exact;
    if (q <= 1) throw DomainError("collision scan requires r > 1");
    for (int n = 1; n <= n_max; ++n) {
      const Rational m = q * n;
      if (denominator(m) == 1 && numerator(m) <= n_max) {
        scan.pairs.emplace_back(static_cast<int>(numerator(m)), n);
      }
    }
    return scan;
  }

  if (r.value <= 1) throw DomainError("collision scan requires r > 1");
  scan.exact = false;
  const unsigned bits = precision_bits_of(r.value);
  const Real tol = mp::pow(Real(10), -Real(static_cast<int>(bits / 4)));
  scan.warning = "branch ratio supplied as a real number; collisions decided with relative "
                 "tolerance 1e-" + std::to_string(bits / 4);
  for (int n = 1; n <= n_max; ++n) {
    const Real target = r.value * n;
    const Real m = mp::round(target);
    if (m < 1 || m > n_max) continue;
    if (mp::abs(m - target) <= tol * target) {
      scan.pairs.emplace_back(static_cast<int>(m.convert_to<long>()), n);
    }
  }
  return scan;
}

BoundaryTraceExpansion boundary_trace_coefficients(Boundary boundary, int n_max) {
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  BoundaryTraceExpansion ex;
  ex.boundary = boundary;
  ex.coefficients.assign(static_cast<std::size_t>(n_max) + 1, Real(0));
  const Real p = pi();
  const Real s = mp::sqrt(Real(2) / p);
  if (boundary == Boundary::Dirichlet) {
    for (int n = 1; n <= n_max; ++n) {
      ex.coefficients[n] = (n % 2 == 1 ? s : Real(-s)) / Real(n);
    }
  } else {
    ex.coefficients[0] = p * mp::sqrt(p) / 2;
    for (int n = 1; n <= n_max; n += 2) {
      ex.coefficients[n] = Real(-2) * s / (Real(n) * Real(n));
    }
  }
  return ex;
}

GapStatistics gap_statistics(const Rational& rho, int n_max) {
  if (n_max < 2) throw DomainError("gap statistics need n_max >= 2");
  const auto eigs = mode_spectrum(rho, n_max);
  const bool critical = classify_damping(rho) == Regime::Critical;

  auto branch = [&](bool plus) {
    GapStatistics::Branch b;
    b.min_gap = std::numeric_limits<double>::infinity();
    auto lam = [&](int k) -> const Complex& {
      return plus ? eigs[k - 1].lambda_plus : eigs[k - 1].lambda_minus;
    };
    for (int n = 1; n <= n_max; ++n) {
      for (int m = n + 1; m <= n_max; ++m) {
        const double g = abs(lam(m) - lam(n)).convert_to<double>();
        if (g < b.min_gap) {
          b.min_gap = g;
          b.m = m;
          b.n = n;
        }
      }
    }
    for (int k = 1; k < n_max; ++k) {
      b.consecutive.push_back(abs(lam(k + 1) - lam(k)).convert_to<double>());
    }
    return b;
  };

  GapStatistics stats;
  stats.plus = branch(true);
  stats.minus = branch(false);
  stats.cross_min_gap = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    for (int m = 1; m <= n_max; ++m) {
      if (critical && m == n) continue;
      const double g = abs(eigs[m - 1].lambda_plus - eigs[n - 1].lambda_minus).convert_to<double>();
      if (g < stats.cross_min_gap) {
        stats.cross_min_gap = g;
        stats.cross_m = m;
        stats.cross_n = n;
      }
    }
  }
  return stats;
}

}  // namespace beamctl
