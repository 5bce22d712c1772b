// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "condensation.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "errors.hpp"

namespace beamctl {

namespace {

Real infinity() { return Real(std::numeric_limits<double>::infinity()); }

void require_r_above_one(const Real& r) {
  if (!(r > 1)) throw DomainError("branch ratio r must satisfy r > 1");
}

}  // namespace

std::vector<Real> MergedFrequencies::distinct() const {
  std::vector<Real> out;
  for (const auto& e : entries) {
    bool dropped = false;
    if (e.branch == '+') {
      for (const auto& [m, n] : collisions) dropped = dropped || m == e.m;
    }
    if (!dropped) out.push_back(e.kappa);
  }
  return out;
}

MergedFrequencies merged_frequencies(const BranchRatio& r, int n_max) {
  require_r_above_one(r.value);
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  MergedFrequencies out;
  const Real rv = r.is_rational() ? to_real(*r.exact) : r.value;
  for (int m = 1; m <= n_max; ++m) {
    const Real m2(m * m);
    out.entries.push_back({m2 / rv, '+', m});
    out.entries.push_back({m2 * rv, '-', m});
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const auto& a, const auto& b) { return a.kappa < b.kappa; });
  const CollisionScan scan = detect_collisions(r, n_max);
  out.collisions = scan.pairs;
  out.exact = scan.exact;
  out.warning = scan.warning;
  return out;
}

Real weierstrass_E(const Real& z, const Real& r) {
  require_r_above_one(r);
  const Real az = mp::abs(z);
  if (az == 0) return Real(1);
  const Real p = pi();
  const Real a = p * mp::sqrt(r * az);
  const Real b = p * mp::sqrt(az / r);
  // sin(x) sinh(x) / x^2 with x = pi sqrt(rz), pi sqrt(z/r); a^2 b^2 = pi^4 z^2.
  return (mp::sin(a) * mp::sinh(a) / (a * a)) * (mp::sin(b) * mp::sinh(b) / (b * b));
}

Real weierstrass_E_product(const Real& z, const Real& r, int cutoff) {
  require_r_above_one(r);
  const Real z2 = z * z;
  Real prod(1);
  for (int m = 1; m <= cutoff; ++m) {
    const Real m2(m * m);
    const Real kp = m2 / r;
    const Real km = m2 * r;
    prod *= (1 - z2 / (kp * kp)) * (1 - z2 / (km * km));
  }
  return prod;
}

Real log_sinh(const Real& x) {
  if (!(x > 0)) throw DomainError("log_sinh requires x > 0");
  return x + mp::log1p(-mp::exp(-2 * x)) - mp::log(Real(2));
}

Real neg_log_abs_sin_pi(const Real& x) {
  // x mod 2 in [0, 2), then fold onto [-1/2, 1/2] around the nearest integer.
  const Real reduced = x - 2 * mp::floor(x / 2);
  const Real frac = reduced - mp::round(reduced);
  if (frac == 0) return infinity();
  const Real s = mp::abs(mp::sin(pi() * frac));
  return -mp::log(s);
}

EPrimeMagnitudes eprime_magnitudes(const Real& r, int n) {
  require_r_above_one(r);
  if (n < 1) throw DomainError("eprime_magnitudes requires n >= 1");
  const Real p = pi();
  const Real nn(n);
  const Real log_prefactor = mp::log(Real(2)) + 3 * mp::log(p) + 5 * mp::log(nn);
  EPrimeMagnitudes e;
  e.log_a = 3 * mp::log(r) - log_prefactor + log_sinh(p * nn) + log_sinh(p * nn / r);
  e.log_b = -3 * mp::log(r) - log_prefactor + log_sinh(p * nn) + log_sinh(p * nn * r);
  e.neg_log_sin_plus = neg_log_abs_sin_pi(nn / r);
  e.neg_log_sin_minus = neg_log_abs_sin_pi(nn * r);
  e.log_plus = mp::isinf(e.neg_log_sin_plus) ? Real(-infinity()) : Real(e.log_a - e.neg_log_sin_plus);
  e.log_minus = mp::isinf(e.neg_log_sin_minus) ? Real(-infinity()) : Real(e.log_b - e.neg_log_sin_minus);
  return e;
}

SandwichCheck sandwich_bounds(const Real& r, int n, const EPrimeMagnitudes& e) {
  const Real p = pi();
  const Real nn(n);
  const Real log_prefactor = mp::log(Real(2)) + 3 * mp::log(p) + 5 * mp::log(nn);
  SandwichCheck s;
  s.log_a_lower = 3 * mp::log(r) - log_prefactor + log_sinh(p) + log_sinh(p / r);
  s.log_a_upper = 3 * mp::log(r) - log_prefactor + p * nn + p * nn / r;
  s.log_b_lower = -3 * mp::log(r) - log_prefactor + log_sinh(p) + log_sinh(p * r);
  s.log_b_upper = -3 * mp::log(r) - log_prefactor + p * nn + p * nn * r;
  s.a_holds = s.log_a_lower <= e.log_a && e.log_a <= s.log_a_upper;
  s.b_holds = s.log_b_lower <= e.log_b && e.log_b <= s.log_b_upper;
  return s;
}

CondensationReport condensation_estimate(const BranchRatio& r, int n_max) {
  require_r_above_one(r.is_rational() ? to_real(*r.exact) : r.value);
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  if (r.is_rational()) {
    throw RationalResonance("r = " + to_string(*r.exact) +
                            " is rational: lambda_m^+ = lambda_n^- whenever m = r n, so the "
                            "condensation index is infinite");
  }
  CondensationReport rep;
  rep.r = r.value;
  rep.n_max = n_max;
  rep.precision_bits = precision_bits_of(r.value);
  {
    // Phases n/r and r n need the full precision r was given at.
    PrecisionScope scope(std::max(rep.precision_bits, working_precision_bits()));
    Real sup_p(0);
    Real sup_m(0);
    for (int n = 1; n <= n_max; ++n) {
      const Real nn(n);
      const Real kp = nn * nn / r.value;
      const Real km = nn * nn * r.value;
      const Real vp = neg_log_abs_sin_pi(nn / r.value) / kp;
      const Real vm = neg_log_abs_sin_pi(nn * r.value) / km;
      if (vp > sup_p) sup_p = vp;
      if (vm > sup_m) sup_m = vm;
      rep.per_n_plus.push_back(vp);
      rep.per_n_minus.push_back(vm);
      rep.running_sup_plus.push_back(sup_p);
      rep.running_sup_minus.push_back(sup_m);
    }
  }
  rep.tail_start = (n_max + 1) / 2;
  rep.tail_sup_plus = 0;
  rep.tail_sup_minus = 0;
  for (int n = rep.tail_start; n <= n_max; ++n) {
    const std::size_t i = static_cast<std::size_t>(n) - 1;
    rep.tail_sup_plus = mp::fmax(rep.tail_sup_plus, rep.per_n_plus[i]);
    rep.tail_sup_minus = mp::fmax(rep.tail_sup_minus, rep.per_n_minus[i]);
  }
  rep.c_estimate = mp::fmax(rep.tail_sup_plus, rep.tail_sup_minus);
  return rep;
}

Real liouville_ratio(int tail_terms) {
  // |r - 7/5| ~ 1e-102, so phases n r need far more than 256 bits.
  PrecisionScope scope(std::max(2048u, working_precision_bits()));
  std::vector<Integer> a{1, 2, 2, mp::pow(Integer(10), 100)};
  for (int i = 0; i < tail_terms; ++i) a.emplace_back(2);
  Real x(a.back());
  for (std::size_t i = a.size() - 1; i-- > 0;) x = Real(a[i]) + 1 / x;
  return x;
}

BranchRatio parse_branch_ratio(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::tolower(c)));
  }
  if (t.empty()) throw DomainError("empty branch ratio");
  if (t == "golden") return BranchRatio::from_real((1 + mp::sqrt(Real(5))) / 2);
  if (t == "liouville") return BranchRatio::from_real(liouville_ratio());
  if (t.rfind("sqrt(", 0) == 0 && t.back() == ')') {
    const Rational q = parse_rational(t.substr(5, t.size() - 6));
    if (q <= 0) throw DomainError("sqrt argument must be positive");
    Rational root;
    if (rational_sqrt(q, root)) return BranchRatio::from_rational(root);
    return BranchRatio::from_real(mp::sqrt(to_real(q)));
  }
  if (t.find_first_of(".e") == std::string::npos) return BranchRatio::from_rational(parse_rational(t));
  return BranchRatio::from_real(from_decimal(t));
}

}  // namespace beamctl
