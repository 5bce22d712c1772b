// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Eigenstructure of the damped modal operator  a'' + rho n^2 a' + n^4 a.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace beamctl {

enum class Boundary { Dirichlet, Neumann };
enum class Regime { Underdamped, Critical, Overdamped };

const char* to_string(Boundary b);
const char* to_string(Regime r);

struct BeamConfig {
  Boundary boundary = Boundary::Dirichlet;
  Rational rho{1};
  int n_modes = 6;
  double horizon = 1.0;
  unsigned precision_bits = 256;
  double regularization = 0.0;

  bool autoscale = true;
  unsigned precision_ceiling = 1024;
  // Relative final-state tolerance for a Controlled verdict.
  double tolerance = 1e-6;
  // RK4 steps for the oracle integrator; 0 picks a stiffness-based count.
  long oracle_steps = 0;

  /// Throws DomainError naming the violated constraint.
  void validate() const;
};

struct ModeEigenvalues {
  int n = 0;
  Real beta;
  Real alpha;
  Complex lambda_plus;
  Complex lambda_minus;
  Regime regime = Regime::Underdamped;
};

Regime classify_damping(const Rational& rho);
ModeEigenvalues mode_eigenvalues(const Rational& rho, int n);
std::vector<ModeEigenvalues> mode_spectrum(const Rational& rho, int n_max);

/// r = (rho + sqrt(rho^2 - 4)) / 2, with its exact value when rational.
struct BranchRatio {
  Real value;
  std::optional<Rational> exact;

  static BranchRatio from_rational(const Rational& r);
  static BranchRatio from_real(const Real& r);
  bool is_rational() const { return exact.has_value(); }
};

BranchRatio branch_ratio(const Rational& rho);

struct CollisionScan {
  // (m, n) with lambda_m^+ == lambda_n^-, i.e. m = r n.
  std::vector<std::pair<int, int>> pairs;
  bool exact = true;
  std::string warning;
};

CollisionScan detect_collisions(const BranchRatio& r, int n_max);

/// Coefficients of the lifting profile (x/pi for Dirichlet, x for Neumann)
/// in the normalized eigenbasis. Index n holds x_n; index 0 holds x_0 for
/// Neumann and 0 for Dirichlet.
struct BoundaryTraceExpansion {
  Boundary boundary = Boundary::Dirichlet;
  std::vector<Real> coefficients;

  const Real& operator[](int n) const { return coefficients.at(static_cast<std::size_t>(n)); }
  int n_max() const { return static_cast<int>(coefficients.size()) - 1; }
};

BoundaryTraceExpansion boundary_trace_coefficients(Boundary boundary, int n_max);

struct GapStatistics {
  struct Branch {
    double min_gap = 0;
    int m = 0;
    int n = 0;
    // |lambda_{k+1} - lambda_k| for k = 1..n_max-1.
    std::vector<double> consecutive;
  };
  Branch plus;
  Branch minus;
  // min over (m, n) of |lambda_m^+ - lambda_n^-|, excluding the identical
  // pair m == n at critical damping.
  double cross_min_gap = 0;
  int cross_m = 0;
  int cross_n = 0;
};

GapStatistics gap_statistics(const Rational& rho, int n_max);

}  // namespace beamctl
