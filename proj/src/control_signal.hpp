// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Constraint kernels of the moment problem and controls built from them.
//
// Kernels are functions of s in [0, T], written internally in reversed time
// tau = T - s. A control is specified through its second derivative
//   f''(s) = sum_k c_k kernel_k(s)
// with f(0) = f'(0) = 0.

#include <string>
#include <vector>

#include "exp_poly.hpp"
#include "numeric.hpp"

namespace beamctl {

/// Complex-form kernel as it appears in the moment equations.
struct KernelDescriptor {
  enum class Kind { Constant, Linear, Exponential, PolyExponential };
  Kind kind = Kind::Constant;
  Complex lambda;  // exponent of e^{lambda (T - s)}
  int mode = 0;    // 0 for the endpoint constraints
  char branch = 0; // '+', '-', or 0

  ExpPoly to_exp_poly(const Real& horizon) const;
};

/// Real-valued kernel used by the solver. Conjugate exponential pairs are
/// represented by the real and imaginary parts of e^{lambda (T - s)}.
struct RealKernel {
  enum class Kind { Constant, Linear, ExpCos, ExpSin, ExpReal, PolyExpReal };
  Kind kind = Kind::Constant;
  Complex lambda;
  int mode = 0;
  char branch = 0;

  ExpPoly to_exp_poly(const Real& horizon) const;
};

const char* to_string(KernelDescriptor::Kind k);
const char* to_string(RealKernel::Kind k);

class ControlSignal {
 public:
  ControlSignal() = default;
  ControlSignal(std::vector<RealKernel> kernels, std::vector<Real> coefficients, Real horizon);

  const std::vector<RealKernel>& kernels() const { return kernels_; }
  const std::vector<Real>& coefficients() const { return coefficients_; }
  const Real& horizon() const { return horizon_; }
  /// f'' in tau = T - s.
  const ExpPoly& second_derivative() const { return poly_; }
  bool empty() const { return poly_.empty(); }

 private:
  std::vector<RealKernel> kernels_;
  std::vector<Real> coefficients_;
  Real horizon_{0};
  ExpPoly poly_;
};

struct ControlValue {
  Real f;
  Real df;
  Real d2f;
};

/// f, f', f'' at time t in [0, T] from closed-form antiderivatives.
ControlValue evaluate_control(const ControlSignal& control, const Real& t);

/// f''(i * dt) for i = 0..count-1, rounded to double. Evaluated at working
/// precision by exponential recurrences so heavily cancelling kernel
/// combinations stay accurate.
std::vector<double> sample_second_derivative(const ControlSignal& control, const Real& dt,
                                             std::size_t count);

}  // namespace beamctl
