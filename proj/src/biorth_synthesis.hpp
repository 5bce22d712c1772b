// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Minimum-norm solution of the moment problem on the kernel span, and the
// biorthogonal family dual to the kernels.

#include <string>
#include <vector>

#include "control_signal.hpp"
#include "moment_problem.hpp"

namespace beamctl {

/// Dense row-major square matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, Real(0)) {}

  std::size_t size() const { return n_; }
  Real& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  static Matrix identity(std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<Real> data_;
};

std::vector<Real> multiply(const Matrix& a, const std::vector<Real>& x);

/// <a, b> over [0, T] in closed form.
Real gram_entry(const RealKernel& a, const RealKernel& b, const Real& horizon);
Complex gram_entry(const KernelDescriptor& a, const KernelDescriptor& b, const Real& horizon);

Matrix gram_matrix(const std::vector<ExpPoly>& basis, const Real& horizon);
Matrix gram_matrix(const std::vector<RealKernel>& kernels, const Real& horizon);
Matrix gram_matrix(const MomentSystem& system);

/// P G P^T = L D L^T with symmetric (largest remaining diagonal) pivoting.
class Ldlt {
 public:
  /// Throws NumericalRankDeficiency when a pivot drops below
  /// 2^{-bits/2} times the largest pivot, unless `allow_small_pivots`.
  explicit Ldlt(const Matrix& g, bool allow_small_pivots = false);

  std::vector<Real> solve(const std::vector<Real>& rhs) const;
  Matrix inverse() const;

  /// max pivot / min pivot
  const Real& condition_estimate() const { return condition_; }
  const Real& min_pivot_ratio() const { return min_ratio_; }
  const std::vector<Real>& pivots() const { return d_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> perm_;
  Matrix l_;
  std::vector<Real> d_;
  Real condition_{1};
  Real min_ratio_{1};
};

struct SynthesisReport {
  ControlSignal control;
  std::vector<Real> targets;
  Real residual_norm{0};     // |G c - zeta| / |zeta|
  Real gram_condition{1};
  Real control_cost{0};      // |f''|_{L2(0,T)} = sqrt(c^T G c)
  unsigned precision_used = 0;
  Real regularization{0};
  std::vector<std::string> autoscale_trace;
  std::vector<CollisionRecord> collisions;
};

/// (G + reg I) c = zeta at the current working precision, reg taken from
/// `config.regularization`.
SynthesisReport solve_min_norm(const MomentSystem& system, const BeamConfig& config);

/// assemble + solve_min_norm with the precision policy: on rank deficiency
/// double the precision up to the ceiling, then fall back to Tikhonov
/// regularization. With autoscale off the deficiency propagates.
SynthesisReport synthesize(const BeamConfig& config, const ModalState& state0);

struct BiorthogonalFamily {
  std::vector<ExpPoly> basis;
  Real horizon{0};
  Matrix coefficients;  // column m holds g_m over the basis
  std::vector<Real> norms;
  Real residual{0};     // max |<g_m, basis_k> - delta_mk|
  Real gram_condition{1};

  ExpPoly function(std::size_t m) const;
};

/// Basis functions must be real-valued on [0, T].
BiorthogonalFamily biorthogonal_family(const std::vector<ExpPoly>& basis, const Real& horizon);
BiorthogonalFamily biorthogonal_family(const MomentSystem& system);

}  // namespace beamctl
