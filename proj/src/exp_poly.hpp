// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Finite sums  sum_j c_j * tau^k_j * exp(mu_j * tau)  with complex c_j, mu_j.
//
// Every kernel, impulse response and control in this library is such a sum,
// so all L2 pairings, convolutions and antiderivatives reduce to the single
// primitive  integral_0^x sigma^k exp(nu sigma) dsigma.

#include <vector>

#include "numeric.hpp"

namespace beamctl {

struct ExpTerm {
  Complex coef;
  int power = 0;
  Complex rate;
};

using ExpPoly = std::vector<ExpTerm>;

/// integral_0^x sigma^k e^{nu sigma} dsigma, in closed form.
Complex integrate_monomial_exp(int k, const Complex& nu, const Real& x);

Complex evaluate(const ExpPoly& p, const Real& tau);
Real evaluate_real(const ExpPoly& p, const Real& tau);

/// integral_0^x p(tau) dtau
Complex integrate(const ExpPoly& p, const Real& x);
/// integral_0^x tau * p(tau) dtau
Complex integrate_first_moment(const ExpPoly& p, const Real& x);

/// <a, b> = integral_0^T a(tau) conj(b(tau)) dtau
Complex inner_product(const ExpPoly& a, const ExpPoly& b, const Real& horizon);

/// Convolution of a forcing given in reversed time with an impulse response:
///   integral_0^t g(T - s) h(t - s) ds,
/// where `g` is written in tau = T - s and `h` in sigma = t - s.
Complex convolve(const ExpPoly& g, const Real& horizon, const ExpPoly& h, const Real& t);

ExpPoly scaled(ExpPoly p, const Complex& factor);
ExpPoly conjugated(ExpPoly p);

}  // namespace beamctl
