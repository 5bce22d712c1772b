// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "biorth_synthesis.hpp"
#include "condensation.hpp"
#include "errors.hpp"
#include "support.hpp"
#include "verification.hpp"

using namespace beamctl;
using oracle::d;

namespace {

constexpr double kNullTolerance = 1e-6;
constexpr double kRuntimeLimit = 60.0;
constexpr double kDefectFraction = 1e-3;
constexpr int kResonanceSeeds = 20;
constexpr double kCostR2 = 0.9;
constexpr double kBiorthResidual = 1e-6;
constexpr double kEnvelopeSlack = 10.0;
constexpr double kCondensationBound = 0.1;
constexpr double kLiouvilleFactor = 10.0;
constexpr double kProductTolerance = 1e-6;
constexpr double kGramTolerance = 1e-8;
constexpr double kDuhamelTolerance = 1e-6;
constexpr int kGramPairs = 100;
constexpr int kRandomControls = 50;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

BeamConfig dirichlet(const char* rho, int n_modes = 6, double horizon = 1.0) {
  BeamConfig c;
  c.rho = parse_rational(rho);
  c.n_modes = n_modes;
  c.horizon = horizon;
  c.precision_bits = 256;
  c.tolerance = kNullTolerance;
  return c;
}

// u0 = phi_1 + 0.3 phi_3, u1 = 0.2 phi_2
ModalState criterion_data() {
  return state_from_data(Boundary::Dirichlet, 6,
                         {{1, Real(1), Real(0)}, {2, Real(0), Real("0.2")}, {3, Real("0.3"), Real(0)}});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void controlled_case(Outcome& o, const char* rho) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult r = null_control_experiment(dirichlet(rho), criterion_data());
  const double secs = seconds_since(t0);
  o.detail << " rho=" << rho << ": closed " << d(r.final_relative) << ", rk4 " << d(r.oracle_relative) << ", "
           << r.precision_used << " bits, " << secs << " s;";
  o.require(r.verdict == Verdict::Controlled, std::string("rho=") + rho + " verdict " + to_string(r.verdict) +
                                                  (r.cause.empty() ? "" : " (" + r.cause + ")"));
  o.require(d(r.final_relative) <= kNullTolerance, std::string("rho=") + rho + " closed-form residual");
  o.require(d(r.oracle_relative) <= kNullTolerance, std::string("rho=") + rho + " RK4 residual");
  o.require(secs <= kRuntimeLimit, std::string("rho=") + rho + " runtime");
}

Outcome criterion1() {
  Outcome o;
  for (const char* rho : {"0.5", "1", "1.9", "2"}) controlled_case(o, rho);
  return o;
}

Outcome criterion2() {
  Outcome o;
  controlled_case(o, "3");
  o.require(!branch_ratio(Rational(3)).is_rational(), "r rational");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const BeamConfig cfg = dirichlet("2.5");
  double worst = HUGE_VAL;
  int failed_as_expected = 0;
  for (int seed = 1; seed <= kResonanceSeeds; ++seed) {
    const ModalState s = fixture_random(Boundary::Dirichlet, 6, static_cast<std::uint64_t>(seed));
    const bool modes_12 = s.values[1] != 0 && s.values[2] != 0;
    const ExperimentResult r = null_control_experiment(cfg, s);
    double ratio = 0;
    try {
      PrecisionScope ps(cfg.precision_bits);
      assemble(cfg, s);
    } catch (const ResonanceDefect& e) {
      ratio = e.defect() / e.data_norm();
    }
    worst = std::min(worst, ratio);
    const bool ok = modes_12 && r.verdict == Verdict::Uncontrollable && r.cause == "ResonanceDefect" &&
                    ratio > kDefectFraction;
    failed_as_expected += ok;
    o.require(ok, "seed " + std::to_string(seed));
  }
  o.detail << " " << failed_as_expected << "/" << kResonanceSeeds
           << " seeds Uncontrollable(ResonanceDefect); min defect/|data| " << worst;
  return o;
}

Outcome criterion4() {
  Outcome o;
  const CostSweep sw = cost_sweep(dirichlet("1"), fixture_mode1(Boundary::Dirichlet, 6), {0.25, 0.5, 1.0, 2.0});
  o.detail << " log cost:";
  for (const auto& p : sw.points) {
    o.detail << " T=" << p.horizon << "->" << (p.ok ? std::log(d(p.cost)) : NAN);
    o.require(p.ok, "T=" + std::to_string(p.horizon) + " " + p.cause);
  }
  o.detail << "; slope " << sw.slope << ", R^2 " << sw.r_squared << ", monotone " << (sw.monotone ? "yes" : "no");
  o.require(sw.fitted, "fit skipped");
  o.require(sw.slope > 0, "slope not positive");
  o.require(sw.r_squared >= kCostR2, "R^2");
  o.require(sw.monotone, "cost increases with T");
  return o;
}

Outcome criterion5() {
  Outcome o;
  PrecisionScope ps(256);
  const BeamConfig cfg = dirichlet("1");
  const MomentSystem sys = assemble(cfg, fixture_mode1(Boundary::Dirichlet, 6));
  const BiorthogonalFamily fam = biorthogonal_family(sys);
  const auto kernels = sys.real_kernels();
  std::map<int, double> log_norm;
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const int m = kernels[k].mode;
    if (m == 0) continue;
    const double v = std::log(d(fam.norms[k]));
    log_norm[m] = log_norm.count(m) ? std::max(log_norm[m], v) : v;
  }
  std::vector<double> x, y;
  const auto eigs = mode_spectrum(cfg.rho, cfg.n_modes);
  for (const auto& [m, v] : log_norm) {
    x.push_back(std::sqrt(d(eigs[static_cast<std::size_t>(m) - 1].alpha)));
    y.push_back(v);
  }
  const LineFit fit = fit_line(x, y);
  const double slack = std::exp(fit.max_abs_residual);
  o.detail << " biorth residual " << d(fam.residual) << "; log|g_m| vs alpha_m^(1/2): slope " << fit.slope
           << ", intercept " << fit.intercept << ", envelope slack " << slack;
  o.require(d(fam.residual) <= kBiorthResidual, "biorthogonality residual");
  o.require(x.size() == 6, "modes 1..6");
  o.require(slack <= kEnvelopeSlack, "envelope slack");
  return o;
}

Outcome criterion6() {
  Outcome o;
  PrecisionScope ps(256);
  const auto s2 = condensation_estimate(BranchRatio::from_real(mp::sqrt(Real(2))), 200);
  const auto li = condensation_estimate(parse_branch_ratio("liouville"), 200);
  const double base = d(s2.c_estimate), spike = d(li.c_estimate);
  bool rational_rejected = false;
  try {
    condensation_estimate(BranchRatio::from_rational(Rational(2)), 200);
  } catch (const RationalResonance&) {
    rational_rejected = true;
  }
  o.detail << " sqrt2 " << base << ", liouville " << spike << " (x" << spike / base << "), rational "
           << (rational_rejected ? "RationalResonance" : "accepted");
  o.require(base < kCondensationBound, "sqrt(2) estimate");
  o.require(spike >= kLiouvilleFactor * base, "Liouville spike");
  o.require(rational_rejected, "rational r");
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst_e = 0;
  {
    PrecisionScope ps(256);
    for (const Real& r : {mp::sqrt(Real(2)), Real((3 + mp::sqrt(Real(5))) / 2)}) {
      for (int k = -100; k <= 100; ++k) {
        const Real z = Real(k) / 10;
        const double closed = d(weierstrass_E(z, r));
        const double prod = d(weierstrass_E_product(z, r, 1000));
        worst_e = std::max(worst_e, std::abs(closed - prod) / std::max(std::abs(prod), 1e-300));
      }
    }
  }
  PrecisionScope ps(256);
  const CrosscheckReport cc = crosscheck_suite(dirichlet("1", 4), kRandomControls, 2026);
  o.detail << " E closed vs product " << worst_e << "; Gram vs quadrature " << cc.gram_vs_quadrature << " ("
           << kGramPairs << " pairs); Duhamel vs RK4 " << cc.duhamel_vs_oracle << " (" << cc.trials << " controls)";
  o.require(worst_e <= kProductTolerance, "E product");
  o.require(cc.gram_vs_quadrature <= kGramTolerance, "Gram quadrature");
  o.require(cc.duhamel_vs_oracle <= kDuhamelTolerance, "Duhamel vs RK4");
  o.require(cc.trials >= kRandomControls, "trial count");
  return o;
}

Outcome criterion8() {
  Outcome o;
  BeamConfig cfg = dirichlet("1", 5);
  cfg.boundary = Boundary::Neumann;

  const auto even = null_control_experiment(cfg, state_from_data(Boundary::Neumann, 5, {{2, Real(1), Real(0)}}));
  o.require(even.verdict == Verdict::Uncontrollable && even.cause == "UncontrollableMode", "even-mode screen");

  PrecisionScope ps(256);
  const ModalState mean =
      state_from_data(Boundary::Neumann, 5, {{0, Real("0.1"), Real("0.2")}, {1, Real(1), Real(0)}});
  const AdmissibilityResult adm = neumann_admissibility(mean);
  const Real sqrt_pi = mp::sqrt(pi());
  const bool residuals_ok = mp::abs(adm.value_residual - Real("0.1") * sqrt_pi) < Real("1e-60") &&
                            mp::abs(adm.velocity_residual - Real("0.2") * sqrt_pi) < Real("1e-60");
  const auto mean_run = null_control_experiment(cfg, mean);
  o.require(!adm.pass && residuals_ok, "admissibility residuals");
  o.require(mean_run.verdict == Verdict::Uncontrollable && mean_run.cause == "AdmissibilityFailure",
            "admissibility verdict");

  const ModalState odd = state_from_data(
      Boundary::Neumann, 5, {{1, Real(1), Real(0)}, {3, Real("0.3"), Real("0.1")}, {5, Real("-0.2"), Real("0.05")}});
  const auto ok = null_control_experiment(cfg, odd);
  const auto [a, b] = measurement_scale(Boundary::Neumann);
  o.detail << " even: " << even.cause << "; mean residuals " << d(adm.value_residual) << ", "
           << d(adm.velocity_residual) << "; odd: " << to_string(ok.verdict) << " closed "
           << d(ok.final_relative) << ", rk4 " << d(ok.oracle_relative) << " in X^" << a << "xX^" << b;
  o.require(a == 4 && b == 2, "measurement scale");
  o.require(ok.verdict == Verdict::Controlled && d(ok.final_relative) <= kNullTolerance &&
                d(ok.oracle_relative) <= kNullTolerance,
            "odd-mode control");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"null control end-to-end", criterion1},  {"overdamped success", criterion2},
      {"resonance failure", criterion3},        {"cost law", criterion4},
      {"biorthogonality", criterion5},          {"condensation estimates", criterion6},
      {"closed-form cross-checks", criterion7}, {"Neumann screening", criterion8},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::printf("%s %d %s:%s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
