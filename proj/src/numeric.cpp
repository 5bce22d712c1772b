// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "numeric.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "errors.hpp"

namespace beamctl {

namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

// Smallest digits10 whose Boost conversion yields at least `bits`.
unsigned digits10_for_bits(unsigned bits) {
  unsigned d = static_cast<unsigned>(std::ceil(bits * 0.30102999566398119521)) ;
  while (mp::detail::digits10_2_2(d) < bits) ++d;
  while (d > 1 && mp::detail::digits10_2_2(d - 1) >= bits) --d;
  return d;
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits)
    : lock_(precision_mutex()), bits_(bits), saved_digits10_(Real::default_precision()) {
  if (bits < 53) throw DomainError("precision_bits must be at least 53");
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned working_precision_bits() {
  return static_cast<unsigned>(mp::detail::digits10_2_2(Real::default_precision()));
}

unsigned precision_bits_of(const Real& x) {
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

Real rounded(const Real& x) {
  Real r;
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

Real to_real(const Rational& q) {
  Real num(numerator(q));
  Real den(denominator(q));
  return num / den;
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real unit_roundoff() {
  Real r(1);
  mpfr_mul_2si(r.backend().data(), r.backend().data(), -static_cast<long>(working_precision_bits()),
               MPFR_RNDN);
  return r;
}

std::string to_decimal(const Real& x) {
  // Enough digits to round-trip the carried precision.
  const auto bits = precision_bits_of(x);
  const auto digits = static_cast<std::streamsize>(std::ceil(bits * 0.30102999566398119521)) + 2;
  return x.str(digits, std::ios_base::scientific);
}

Real from_decimal(std::string_view text) {
  Real r;
  std::string s(text);
  if (mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("not a decimal number: '" + s + "'");
  }
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) throw DomainError("empty number");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + s + "'");
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw DomainError("not a number: '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw DomainError("not a number: '" + s + "'");
    const std::string exp_text = s.substr(pos + 1);
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw DomainError("bad exponent in '" + s + "'");
    }
    if (used != exp_text.size()) throw DomainError("bad exponent in '" + s + "'");
    if (e > 100000 || e < -100000) throw DomainError("exponent out of range in '" + s + "'");
    exponent += e;
  }
  Integer mant(digits);
  Integer scale = mp::pow(Integer(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational value = exponent < 0 ? Rational(mant, scale) : Rational(mant * scale);
  return negative ? Rational(-value) : value;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value");
  int e = 0;
  double m = std::frexp(x, &e);
  // m * 2^53 is an exact integer.
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Integer num(mant);
  if (e >= 0) return Rational(num << e);
  return Rational(num, Integer(1) << (-e));
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

bool rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  const Integer num = numerator(q);
  const Integer den = denominator(q);
  const Integer sn = mp::sqrt(num);
  const Integer sd = mp::sqrt(den);
  if (sn * sn != num || sd * sd != den) return false;
  root = Rational(sn, sd);
  return true;
}

Real pairwise_sum(std::span<const Real> values) {
  if (values.empty()) return Real(0);
  if (values.size() == 1) return values[0];
  if (values.size() == 2) return values[0] + values[1];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Complex operator/(const Complex& a, const Complex& b) {
  // Smith's algorithm.
  if (mp::abs(b.re) >= mp::abs(b.im)) {
    if (b.re == 0) throw InternalError("complex division by zero");
    Real ratio = b.im / b.re;
    Real den = b.re + b.im * ratio;
    return {(a.re + a.im * ratio) / den, (a.im - a.re * ratio) / den};
  }
  Real ratio = b.re / b.im;
  Real den = b.re * ratio + b.im;
  return {(a.re * ratio + a.im) / den, (a.im * ratio - a.re) / den};
}

Real abs(const Complex& z) {
  Real r;
  mpfr_hypot(r.backend().data(), z.re.backend().data(), z.im.backend().data(), MPFR_RNDN);
  return r;
}

Complex exp(const Complex& z) {
  Real scale = mp::exp(z.re);
  if (z.im == 0) return {scale, Real(0)};
  Real s, c;
  mpfr_sin_cos(s.backend().data(), c.backend().data(), z.im.backend().data(), MPFR_RNDN);
  return {scale * c, scale * s};
}

bool is_zero(const Complex& z) { return z.re == 0 && z.im == 0; }

}  // namespace beamctl
