// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "exp_poly.hpp"

#include "errors.hpp"

namespace beamctl {

namespace {

Real real_pow(const Real& x, int k) {
  Real r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

Complex series_integral(int k, const Complex& nu, const Real& x) {
  // sum_j nu^j x^{k+j+1} / (j! (k+j+1))
  const Real eps = unit_roundoff();
  Complex power(real_pow(x, k + 1));  // nu^j x^{k+j+1} / j!
  Complex sum;
  const Complex nux = nu * x;
  for (int j = 0; j < 100000; ++j) {
    Complex term = power / Real(k + j + 1);
    sum += term;
    if (abs(term) <= eps * abs(sum)) return sum;
    power = power * nux / Real(j + 1);
  }
  throw InternalError("monomial-exponential series failed to converge");
}

}  // namespace

Complex integrate_monomial_exp(int k, const Complex& nu, const Real& x) {
  if (k < 0) throw InternalError("negative monomial power");
  if (x == 0) return Complex();
  if (is_zero(nu)) return Complex(real_pow(x, k + 1) / Real(k + 1));
  if (abs(nu) * mp::abs(x) < 1) return series_integral(k, nu, x);

  const Complex e = exp(nu * x);
  Complex value = (e - Complex(Real(1))) / nu;
  Real xk(1);
  for (int j = 1; j <= k; ++j) {
    xk *= x;
    value = (e * xk - value * Real(j)) / nu;
  }
  return value;
}

Complex evaluate(const ExpPoly& p, const Real& tau) {
  Complex sum;
  for (const auto& t : p) sum += t.coef * exp(t.rate * tau) * real_pow(tau, t.power);
  return sum;
}

Real evaluate_real(const ExpPoly& p, const Real& tau) { return evaluate(p, tau).re; }

Complex integrate(const ExpPoly& p, const Real& x) {
  Complex sum;
  for (const auto& t : p) sum += t.coef * integrate_monomial_exp(t.power, t.rate, x);
  return sum;
}

Complex integrate_first_moment(const ExpPoly& p, const Real& x) {
  Complex sum;
  for (const auto& t : p) sum += t.coef * integrate_monomial_exp(t.power + 1, t.rate, x);
  return sum;
}

Complex inner_product(const ExpPoly& a, const ExpPoly& b, const Real& horizon) {
  Complex sum;
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      sum += ta.coef * conj(tb.coef) *
             integrate_monomial_exp(ta.power + tb.power, ta.rate + conj(tb.rate), horizon);
    }
  }
  return sum;
}

Complex convolve(const ExpPoly& g, const Real& horizon, const ExpPoly& h, const Real& t) {
  // tau = (T - t) + sigma; expand (d + sigma)^k binomially.
  const Real d = horizon - t;
  Complex sum;
  for (const auto& tg : g) {
    const Complex shift = tg.coef * exp(tg.rate * d);
    for (const auto& th : h) {
      const Complex nu = tg.rate + th.rate;
      Real binom(1);
      for (int i = 0; i <= tg.power; ++i) {
        // C(k, i) d^{k-i} sigma^i
        const Real weight = binom * real_pow(d, tg.power - i);
        sum += shift * th.coef * weight * integrate_monomial_exp(i + th.power, nu, t);
        binom = binom * Real(tg.power - i) / Real(i + 1);
      }
    }
  }
  return sum;
}

ExpPoly scaled(ExpPoly p, const Complex& factor) {
  for (auto& t : p) t.coef = t.coef * factor;
  return p;
}

ExpPoly conjugated(ExpPoly p) {
  for (auto& t : p) {
    t.coef = conj(t.coef);
    t.rate = conj(t.rate);
  }
  return p;
}

}  // namespace beamctl
