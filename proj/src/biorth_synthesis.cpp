// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "biorth_synthesis.hpp"

#include <cstdlib>
#include <sstream>
#include <utility>

#include "errors.hpp"

namespace beamctl {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Real> multiply(const Matrix& a, const std::vector<Real>& x) {
  const std::size_t n = a.size();
  if (x.size() != n) throw InternalError("matrix-vector size mismatch");
  std::vector<Real> y(n, Real(0));
  std::vector<Real> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) terms[j] = a(i, j) * x[j];
    y[i] = pairwise_sum(terms);
  }
  return y;
}

Real gram_entry(const RealKernel& a, const RealKernel& b, const Real& horizon) {
  return inner_product(a.to_exp_poly(horizon), b.to_exp_poly(horizon), horizon).re;
}

Complex gram_entry(const KernelDescriptor& a, const KernelDescriptor& b, const Real& horizon) {
  return inner_product(a.to_exp_poly(horizon), b.to_exp_poly(horizon), horizon);
}

Matrix gram_matrix(const std::vector<ExpPoly>& basis, const Real& horizon) {
  const std::size_t n = basis.size();
  Matrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = inner_product(basis[i], basis[j], horizon).re;
      g(j, i) = g(i, j);
    }
  }
  return g;
}

Matrix gram_matrix(const std::vector<RealKernel>& kernels, const Real& horizon) {
  std::vector<ExpPoly> basis;
  basis.reserve(kernels.size());
  for (const auto& k : kernels) basis.push_back(k.to_exp_poly(horizon));
  return gram_matrix(basis, horizon);
}

Matrix gram_matrix(const MomentSystem& system) {
  return gram_matrix(system.real_kernels(), system.horizon);
}

Ldlt::Ldlt(const Matrix& g, bool allow_small_pivots) : n_(g.size()), perm_(g.size()), l_(g.size()) {
  Matrix a = g;
  for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
  d_.assign(n_, Real(0));
  if (n_ == 0) return;

  const Real threshold = mp::ldexp(Real(1), -static_cast<int>(working_precision_bits() / 2));
  Real max_pivot(0);
  Real min_pivot(0);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n_; ++i) {
      if (a(i, i) > a(p, p)) p = i;
    }
    if (p != k) {
      std::swap(perm_[k], perm_[p]);
      for (std::size_t j = 0; j < n_; ++j) std::swap(a(k, j), a(p, j));
      for (std::size_t i = 0; i < n_; ++i) std::swap(a(i, k), a(i, p));
      for (std::size_t j = 0; j < k; ++j) std::swap(l_(k, j), l_(p, j));
    }
    const Real pivot = a(k, k);
    if (k == 0) {
      max_pivot = pivot;
      min_pivot = pivot;
    }
    const Real ratio = max_pivot > 0 ? Real(pivot / max_pivot) : Real(0);
    if (!(pivot > 0) || ratio < threshold) {
      if (!allow_small_pivots || !(pivot > 0)) {
        std::ostringstream msg;
        msg << "Gram pivot " << k << " of " << n_ << " has relative size "
            << ratio.convert_to<double>() << " below 2^-" << working_precision_bits() / 2
            << " at " << working_precision_bits() << " bits";
        throw NumericalRankDeficiency(working_precision_bits(), ratio.convert_to<double>(), msg.str());
      }
    }
    if (pivot < min_pivot) min_pivot = pivot;
    d_[k] = pivot;
    l_(k, k) = 1;
    for (std::size_t i = k + 1; i < n_; ++i) l_(i, k) = a(i, k) / pivot;
    for (std::size_t i = k + 1; i < n_; ++i) {
      for (std::size_t j = k + 1; j <= i; ++j) {
        a(i, j) -= l_(i, k) * a(j, k);
        a(j, i) = a(i, j);
      }
    }
  }
  condition_ = max_pivot / min_pivot;
  min_ratio_ = min_pivot / max_pivot;
}

std::vector<Real> Ldlt::solve(const std::vector<Real>& rhs) const {
  if (rhs.size() != n_) throw InternalError("LDLT solve: size mismatch");
  std::vector<Real> y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    Real s = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= l_(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t i = 0; i < n_; ++i) y[i] /= d_[i];
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t j = i + 1; j < n_; ++j) y[i] -= l_(j, i) * y[j];
  }
  std::vector<Real> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[perm_[i]] = y[i];
  return x;
}

Matrix Ldlt::inverse() const {
  Matrix inv(n_);
  std::vector<Real> e(n_, Real(0));
  for (std::size_t m = 0; m < n_; ++m) {
    e[m] = 1;
    const auto col = solve(e);
    for (std::size_t i = 0; i < n_; ++i) inv(i, m) = col[i];
    e[m] = 0;
  }
  return inv;
}

namespace {

Real euclidean_norm(const std::vector<Real>& v) {
  std::vector<Real> sq;
  sq.reserve(v.size());
  for (const auto& x : v) sq.push_back(x * x);
  return mp::sqrt(pairwise_sum(sq));
}

Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  std::vector<Real> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i];
  return pairwise_sum(terms);
}

SynthesisReport solve_with(const MomentSystem& system, const Matrix& g, const Real& reg,
                           bool allow_small_pivots) {
  SynthesisReport report;
  report.targets = system.real_targets();
  report.precision_used = working_precision_bits();
  report.regularization = reg;
  report.collisions = system.collisions;

  const auto kernels = system.real_kernels();
  const std::size_t n = kernels.size();
  const Real zeta_norm = euclidean_norm(report.targets);
  if (zeta_norm == 0) {
    report.control = ControlSignal(kernels, std::vector<Real>(n, Real(0)), system.horizon);
    report.gram_condition = Ldlt(g, true).condition_estimate();
    return report;
  }

  Matrix shifted = g;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += reg;
  const Ldlt f(shifted, allow_small_pivots);
  std::vector<Real> c = f.solve(report.targets);

  const std::vector<Real> gc = multiply(g, c);
  std::vector<Real> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = gc[i] - report.targets[i];
  report.residual_norm = euclidean_norm(r) / zeta_norm;
  report.gram_condition = f.condition_estimate();
  const Real cost_sq = dot(c, gc);
  report.control_cost = cost_sq > 0 ? Real(mp::sqrt(cost_sq)) : Real(0);
  report.control = ControlSignal(kernels, std::move(c), system.horizon);
  return report;
}

unsigned precision_ceiling(const BeamConfig& config) {
  if (const char* env = std::getenv("BEAMCTL_PRECISION_CEILING")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 53) return static_cast<unsigned>(v);
    throw DomainError("BEAMCTL_PRECISION_CEILING must be an integer >= 53");
  }
  return config.precision_ceiling;
}

}  // namespace

SynthesisReport solve_min_norm(const MomentSystem& system, const BeamConfig& config) {
  const Real reg(config.regularization);
  return solve_with(system, gram_matrix(system), reg, reg > 0);
}

SynthesisReport synthesize(const BeamConfig& config, const ModalState& state0) {
  config.validate();
  const unsigned ceiling = std::max(precision_ceiling(config), config.precision_bits);
  std::vector<std::string> trace;
  unsigned bits = config.precision_bits;
  for (;;) {
    PrecisionScope scope(bits);
    const MomentSystem system = assemble(config, state0);
    const Matrix g = gram_matrix(system);
    try {
      const Real reg(config.regularization);
      SynthesisReport report = solve_with(system, g, reg, reg > 0);
      report.precision_used = bits;
      report.autoscale_trace = trace;
      return report;
    } catch (const NumericalRankDeficiency& e) {
      trace.push_back(std::to_string(bits) + " bits: " + e.what());
      if (!config.autoscale) {
        std::string msg = e.what();
        msg += " (autoscale disabled; trace:";
        for (const auto& t : trace) msg += " [" + t + "]";
        msg += ")";
        throw NumericalRankDeficiency(bits, e.pivot_ratio(), msg);
      }
      if (bits * 2 <= ceiling) {
        bits *= 2;
        continue;
      }
      // Tikhonov fallback at the ceiling precision.
      Real max_diag(0);
      for (std::size_t i = 0; i < g.size(); ++i) max_diag = mp::fmax(max_diag, g(i, i));
      const Real reg = max_diag * mp::ldexp(Real(1), -static_cast<int>(bits / 2));
      trace.push_back(std::to_string(bits) + " bits: Tikhonov regularization " +
                      std::to_string(reg.convert_to<double>()));
      SynthesisReport report = solve_with(system, g, reg, true);
      report.precision_used = bits;
      report.autoscale_trace = trace;
      return report;
    }
  }
}

ExpPoly BiorthogonalFamily::function(std::size_t m) const {
  ExpPoly out;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (coefficients(k, m) == 0) continue;
    for (auto term : basis[k]) {
      term.coef = term.coef * coefficients(k, m);
      out.push_back(std::move(term));
    }
  }
  return out;
}

BiorthogonalFamily biorthogonal_family(const std::vector<ExpPoly>& basis, const Real& horizon) {
  BiorthogonalFamily fam;
  fam.basis = basis;
  fam.horizon = horizon;
  const Matrix g = gram_matrix(basis, horizon);
  const Ldlt f(g);
  fam.gram_condition = f.condition_estimate();
  fam.coefficients = f.inverse();
  const std::size_t n = basis.size();
  fam.norms.resize(n);
  Real worst(0);
  for (std::size_t m = 0; m < n; ++m) {
    const Real d = fam.coefficients(m, m);
    fam.norms[m] = d > 0 ? Real(mp::sqrt(d)) : Real(0);
    std::vector<Real> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = fam.coefficients(i, m);
    const auto gc = multiply(g, col);
    for (std::size_t k = 0; k < n; ++k) {
      const Real dev = mp::abs(gc[k] - (k == m ? Real(1) : Real(0)));
      if (dev > worst) worst = dev;
    }
  }
  fam.residual = worst;
  return fam;
}

BiorthogonalFamily biorthogonal_family(const MomentSystem& system) {
  std::vector<ExpPoly> basis;
  for (const auto& k : system.real_kernels()) basis.push_back(k.to_exp_poly(system.horizon));
  return biorthogonal_family(basis, system.horizon);
}

}  // namespace beamctl
