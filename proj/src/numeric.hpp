// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Extended-precision scalar types shared by every module.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace beamctl {

namespace mp = boost::multiprecision;

using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using Rational = mp::mpq_rational;
using Integer = mp::mpz_int;

/// Sets the working precision (in significand bits) for every Real created
/// while the scope is alive. MPFR's default precision is process-global in
/// this Boost release, so scopes also hold a process-wide recursive lock.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const noexcept { return bits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned bits_;
  unsigned saved_digits10_;
};

/// Significand bits of newly created Reals.
unsigned working_precision_bits();

/// Actual significand bits carried by `x`.
unsigned precision_bits_of(const Real& x);

/// `x` re-rounded to the current working precision.
Real rounded(const Real& x);

Real to_real(const Rational& q);
Real pi();

/// Unit roundoff 2^-bits at the current precision.
Real unit_roundoff();

/// Full-precision scientific decimal string; parses back bit-exactly at the
/// same precision.
std::string to_decimal(const Real& x);
Real from_decimal(std::string_view text);

/// Parses "1.25", "-3e-2", "5/2" or "7" into an exact rational.
Rational parse_rational(std::string_view text);
/// Exact dyadic value of a finite double.
Rational rational_from_double(double x);
std::string to_string(const Rational& q);

/// Exact square root when `q` is the square of a rational.
bool rational_sqrt(const Rational& q, Rational& root);

/// Pairwise summation; the reduction order depends only on the length.
Real pairwise_sum(std::span<const Real> values);

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
inline Complex operator*(const Real& s, const Complex& a) { return {a.re * s, a.im * s}; }
Complex operator/(const Complex& a, const Complex& b);
inline Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }

inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
inline Real norm_sq(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z);
Complex exp(const Complex& z);
bool is_zero(const Complex& z);

}  // namespace beamctl
