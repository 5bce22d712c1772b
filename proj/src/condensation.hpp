// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Overdamped-regime frequency analysis: the merged sequence {m^2/r, m^2 r},
// the entire function E vanishing on it, |E'| at its zeros, and finite-N
// condensation-index estimates.

#include <string>
#include <vector>

#include "spectrum.hpp"

namespace beamctl {

struct MergedFrequencies {
  struct Entry {
    Real kappa;
    char branch;  // '+' for m^2/r, '-' for m^2 r
    int m;
  };
  std::vector<Entry> entries;  // all 2 n_max values, sorted ascending
  // (m, n) with m^2/r == n^2 r; the '+' entry is the collapsed duplicate.
  std::vector<std::pair<int, int>> collisions;
  bool exact = true;
  std::string warning;

  /// Sorted values with collided duplicates removed.
  std::vector<Real> distinct() const;
};

MergedFrequencies merged_frequencies(const BranchRatio& r, int n_max);

/// E(z) = sin(pi sqrt(rz)) sinh(pi sqrt(rz)) sin(pi sqrt(z/r)) sinh(pi sqrt(z/r)) / (pi^4 z^2),
/// normalized so that E(0) = 1. Even in z.
Real weierstrass_E(const Real& z, const Real& r);

/// prod_{m <= cutoff} (1 - z^2/(m^2/r)^2)(1 - z^2/(m^2 r)^2)
Real weierstrass_E_product(const Real& z, const Real& r, int cutoff);

struct EPrimeMagnitudes {
  // ln|E'(n^2/r)| and ln|E'(n^2 r)|; -inf at an exact zero of the sine factor.
  Real log_plus;
  Real log_minus;
  // ln A_n, ln B_n: the magnitudes without the sine factor.
  Real log_a;
  Real log_b;
  // -ln|sin(pi n/r)|, -ln|sin(pi r n)| (+inf at resonance)
  Real neg_log_sin_plus;
  Real neg_log_sin_minus;
};

EPrimeMagnitudes eprime_magnitudes(const Real& r, int n);

struct SandwichCheck {
  bool a_holds = true;
  bool b_holds = true;
  Real log_a_lower, log_a_upper;
  Real log_b_lower, log_b_upper;
};

/// sinh(pi) sinh(pi/r) <= A_n 2 pi^3 n^5 / r^3 <= e^{pi n} e^{pi n/r} and the
/// B_n analogue, checked in the log domain.
SandwichCheck sandwich_bounds(const Real& r, int n, const EPrimeMagnitudes& e);

/// ln sinh x for x > 0 without overflow.
Real log_sinh(const Real& x);
/// -ln|sin(pi x)| with x reduced modulo 2 at the precision of x.
Real neg_log_abs_sin_pi(const Real& x);

struct CondensationReport {
  Real r;
  int n_max = 0;
  unsigned precision_bits = 0;
  std::vector<Real> per_n_plus;   // -ln|sin(pi n/r)| / (n^2/r)
  std::vector<Real> per_n_minus;  // -ln|sin(pi r n)| / (r n^2)
  std::vector<Real> running_sup_plus;
  std::vector<Real> running_sup_minus;
  // sup over the window n in [tail_start, n_max], both branches
  int tail_start = 1;
  Real tail_sup_plus;
  Real tail_sup_minus;
  Real c_estimate;
};

/// Throws RationalResonance for an exact rational r, DomainError for r <= 1.
CondensationReport condensation_estimate(const BranchRatio& r, int n_max);

/// r = [1; 2, 2, 10^100, 2, 2, ...] at the working precision: an irrational
/// ratio extremely close to 7/5, used to exhibit a condensation spike.
Real liouville_ratio(int tail_terms = 40);

/// Parses "p/q" or an integer (exact), "sqrt(p/q)" (exact when a perfect
/// square), "golden" ((1+sqrt 5)/2), "liouville", or a decimal literal
/// (taken as a real approximation).
BranchRatio parse_branch_ratio(const std::string& text);

}  // namespace beamctl
