// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "control_signal.hpp"

#include "errors.hpp"

namespace beamctl {

const char* to_string(KernelDescriptor::Kind k) {
  switch (k) {
    case KernelDescriptor::Kind::Constant: return "constant";
    case KernelDescriptor::Kind::Linear: return "linear";
    case KernelDescriptor::Kind::Exponential: return "exponential";
    case KernelDescriptor::Kind::PolyExponential: return "poly_exponential";
  }
  return "unknown";
}

const char* to_string(RealKernel::Kind k) {
  switch (k) {
    case RealKernel::Kind::Constant: return "constant";
    case RealKernel::Kind::Linear: return "linear";
    case RealKernel::Kind::ExpCos: return "exp_cos";
    case RealKernel::Kind::ExpSin: return "exp_sin";
    case RealKernel::Kind::ExpReal: return "exp_real";
    case RealKernel::Kind::PolyExpReal: return "poly_exp_real";
  }
  return "unknown";
}

namespace {

// s = T - tau
ExpPoly linear_in_s(const Real& horizon) {
  return {ExpTerm{Complex(horizon), 0, Complex()}, ExpTerm{Complex(Real(-1)), 1, Complex()}};
}

}  // namespace

ExpPoly KernelDescriptor::to_exp_poly(const Real& horizon) const {
  switch (kind) {
    case Kind::Constant: return {ExpTerm{Complex(Real(1)), 0, Complex()}};
    case Kind::Linear: return linear_in_s(horizon);
    case Kind::Exponential: return {ExpTerm{Complex(Real(1)), 0, lambda}};
    case Kind::PolyExponential: return {ExpTerm{Complex(Real(1)), 1, lambda}};
  }
  throw InternalError("unknown kernel kind");
}

ExpPoly RealKernel::to_exp_poly(const Real& horizon) const {
  const Real half = Real(1) / 2;
  switch (kind) {
    case Kind::Constant: return {ExpTerm{Complex(Real(1)), 0, Complex()}};
    case Kind::Linear: return linear_in_s(horizon);
    case Kind::ExpCos:
      return {ExpTerm{Complex(half), 0, lambda}, ExpTerm{Complex(half), 0, conj(lambda)}};
    case Kind::ExpSin:
      // Im z = (z - conj z) / 2i
      return {ExpTerm{Complex(Real(0), -half), 0, lambda},
              ExpTerm{Complex(Real(0), half), 0, conj(lambda)}};
    case Kind::ExpReal: return {ExpTerm{Complex(Real(1)), 0, lambda}};
    case Kind::PolyExpReal: return {ExpTerm{Complex(Real(1)), 1, lambda}};
  }
  throw InternalError("unknown kernel kind");
}

ControlSignal::ControlSignal(std::vector<RealKernel> kernels, std::vector<Real> coefficients,
                             Real horizon)
    : kernels_(std::move(kernels)), coefficients_(std::move(coefficients)), horizon_(std::move(horizon)) {
  if (kernels_.size() != coefficients_.size()) {
    throw InternalError("control: kernel and coefficient counts differ");
  }
  for (std::size_t k = 0; k < kernels_.size(); ++k) {
    if (coefficients_[k] == 0) continue;
    for (auto term : kernels_[k].to_exp_poly(horizon_)) {
      term.coef = term.coef * coefficients_[k];
      poly_.push_back(std::move(term));
    }
  }
}

ControlValue evaluate_control(const ControlSignal& control, const Real& t) {
  const Real& horizon = control.horizon();
  if (t < 0 || t > horizon) throw DomainError("control evaluated outside [0, T]");
  const ExpPoly& g = control.second_derivative();
  const Real d = horizon - t;

  ControlValue v;
  v.d2f = evaluate_real(g, d);
  // f'(t) = int_{T-t}^{T} g,  f(t) = int_{T-t}^{T} (tau - (T-t)) g
  const Complex j_hi = integrate(g, horizon);
  const Complex j_lo = integrate(g, d);
  const Complex k_hi = integrate_first_moment(g, horizon);
  const Complex k_lo = integrate_first_moment(g, d);
  v.df = (j_hi - j_lo).re;
  v.f = (k_hi - k_lo).re - d * (j_hi - j_lo).re;
  return v;
}

std::vector<double> sample_second_derivative(const ControlSignal& control, const Real& dt,
                                             std::size_t count) {
  std::vector<double> out(count, 0.0);
  if (count == 0 || control.empty()) return out;
  const Real& horizon = control.horizon();

  // f'' is real, so Re(a e^{l tau}) + Re(b e^{conj(l) tau}) = Re((a + conj b) e^{l tau}):
  // fold every term onto a rate with Im >= 0 and merge equal (power, rate).
  struct Track {
    Complex coef;
    int power;
    Complex rate;
    Complex current;
    Complex step;
  };
  std::vector<Track> tracks;
  for (const auto& t : control.second_derivative()) {
    Complex coef = t.coef;
    Complex rate = t.rate;
    if (rate.im < 0) {
      coef = conj(coef);
      rate = conj(rate);
    }
    bool merged = false;
    for (auto& tr : tracks) {
      if (tr.power == t.power && tr.rate.re == rate.re && tr.rate.im == rate.im) {
        tr.coef += coef;
        merged = true;
        break;
      }
    }
    if (!merged) tracks.push_back({coef, t.power, rate, Complex(), Complex()});
  }
  for (auto& tr : tracks) {
    // tau_i = T - i dt; carry coef * e^{rate tau_i} and step by e^{-rate dt}.
    tr.current = tr.coef * exp(tr.rate * horizon);
    tr.step = exp(-(tr.rate * dt));
  }

  Real tau;
  Real sum;
  Real term;
  Real scratch;
  Real next_re;
  for (std::size_t i = 0; i < count; ++i) {
    tau = dt;
    tau *= static_cast<unsigned long>(i);
    tau = horizon - tau;
    sum = 0;
    for (auto& tr : tracks) {
      term = tr.current.re;
      for (int p = 0; p < tr.power; ++p) term *= tau;
      sum += term;
      // current *= step, in place
      next_re = tr.current.re;
      next_re *= tr.step.re;
      scratch = tr.current.im;
      scratch *= tr.step.im;
      next_re -= scratch;
      tr.current.im *= tr.step.re;
      scratch = tr.current.re;
      scratch *= tr.step.im;
      tr.current.im += scratch;
      tr.current.re = next_re;
    }
    out[i] = sum.convert_to<double>();
  }
  return out;
}

}  // namespace beamctl
