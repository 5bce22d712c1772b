// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace beamctl {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Controlled: return "Controlled";
    case Verdict::ResidualTooLarge: return "ResidualTooLarge";
    case Verdict::Uncontrollable: return "Uncontrollable";
  }
  return "unknown";
}

namespace {

struct Measured {
  Real value;
  Real velocity;
  Real total() const { return mp::sqrt(value * value + velocity * velocity); }
};

Measured measure(const ModalState& s) {
  const auto [a, b] = measurement_scale(s.boundary);
  return {sobolev_norm(s, Real(a), false), sobolev_norm(s, Real(b), true)};
}

ModalState difference(const ModalState& a, const ModalState& b) {
  ModalState d = a;
  for (std::size_t n = 0; n < d.values.size(); ++n) {
    d.values[n] -= b.values[n];
    d.velocities[n] -= b.velocities[n];
  }
  return d;
}

Real relative(const Real& num, const Real& den) { return den > 0 ? Real(num / den) : Real(num); }

double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0;
}

bool is_controllable_mode(Boundary boundary, int n) {
  return boundary == Boundary::Dirichlet || n % 2 == 1;
}

}  // namespace

ExperimentResult null_control_experiment(const BeamConfig& config, const ModalState& state0) {
  config.validate();
  PrecisionScope outer(config.precision_bits);
  ExperimentResult res;
  res.config = config;
  const ModalState data = state0.truncated(config.n_modes);
  data.check_shape();
  if (data.boundary != config.boundary) throw DomainError("state boundary does not match config");

  const Measured initial = measure(data);
  res.initial_value_norm = initial.value;
  res.initial_velocity_norm = initial.velocity;

  auto fail = [&](const Error& e) {
    res.verdict = Verdict::Uncontrollable;
    res.cause_status = e.status();
    res.cause = e.cause();
    res.cause_message = e.what();
    return res;
  };

  if (config.boundary == Boundary::Neumann) {
    const AdmissibilityResult adm = neumann_admissibility(data);
    if (!adm.pass) {
      res.verdict = Verdict::Uncontrollable;
      res.cause_status = Status::Uncontrollable;
      res.cause = "AdmissibilityFailure";
      std::ostringstream msg;
      msg << "initial data is not mean-free: integral u0 = " << adm.value_residual.convert_to<double>()
          << ", integral u1 = " << adm.velocity_residual.convert_to<double>();
      res.cause_message = msg.str();
      return res;
    }
  }

  SynthesisReport report;
  try {
    report = synthesize(config, data);
  } catch (const DomainError&) {
    throw;
  } catch (const Error& e) {
    return fail(e);
  }
  res.control_cost = report.control_cost;
  res.residual_norm = report.residual_norm;
  res.gram_condition = report.gram_condition;
  res.precision_used = report.precision_used;
  res.collisions = report.collisions;

  const Real horizon(config.horizon);
  ModalState closed;
  {
    PrecisionScope scope(report.precision_used);
    closed = controlled_state_at(config, data, report.control, horizon);
  }
  const Measured fin = measure(closed);
  res.final_value_norm = fin.value;
  res.final_velocity_norm = fin.velocity;
  res.final_relative = relative(fin.total(), initial.total());

  try {
    res.oracle_steps = config.oracle_steps > 0 ? config.oracle_steps : recommended_oracle_steps(config);
    const Trajectory traj = simulate_oracle(config, data, &report.control, res.oracle_steps, 1);
    const ModalState rk = final_state(traj);
    const Measured orc = measure(rk);
    res.oracle_value_norm = orc.value;
    res.oracle_velocity_norm = orc.velocity;
    res.oracle_relative = relative(orc.total(), initial.total());
    res.oracle_deviation = relative(measure(difference(closed, rk)).total(), initial.total());
  } catch (const DomainError&) {
    throw;
  } catch (const Error& e) {
    res.synthesis = std::move(report);
    return fail(e);
  }
  res.synthesis = std::move(report);

  const Real tol(config.tolerance);
  res.verdict = res.final_relative <= tol && res.oracle_relative <= tol ? Verdict::Controlled
                                                                         : Verdict::ResidualTooLarge;
  if (res.verdict == Verdict::ResidualTooLarge) {
    res.cause_status = Status::Numerical;
    res.cause = "ResidualTooLarge";
    std::ostringstream msg;
    msg << "final relative norm " << res.final_relative.convert_to<double>() << " (closed form), "
        << res.oracle_relative.convert_to<double>() << " (RK4) exceeds tolerance " << config.tolerance;
    res.cause_message = msg.str();
  }
  return res;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.max_abs_residual = std::max(f.max_abs_residual, std::abs(y[i] - (f.intercept + f.slope * x[i])));
  }
  return f;
}

CostSweep cost_sweep(const BeamConfig& config, const ModalState& state0,
                     const std::vector<double>& horizons) {
  if (horizons.empty()) throw DomainError("cost sweep needs at least one horizon");
  CostSweep sweep;
  for (double t : horizons) {
    BeamConfig c = config;
    c.horizon = t;
    c.validate();
    SweepPoint p;
    p.horizon = t;
    try {
      const SynthesisReport rep = synthesize(c, state0);
      PrecisionScope scope(rep.precision_used);
      const ModalState data = state0.truncated(c.n_modes);
      const ModalState fin = controlled_state_at(c, data, rep.control, Real(t));
      p.ok = true;
      p.cost = rep.control_cost;
      p.residual = rep.residual_norm;
      p.precision_used = rep.precision_used;
      p.final_relative = relative(measure(fin).total(), measure(data).total());
      p.verdict = p.final_relative <= Real(c.tolerance) ? Verdict::Controlled : Verdict::ResidualTooLarge;
      if (p.verdict == Verdict::ResidualTooLarge) p.cause = "ResidualTooLarge";
    } catch (const DomainError&) {
      throw;
    } catch (const Error& e) {
      p.verdict = Verdict::Uncontrollable;
      p.cause = e.cause();
    }
    sweep.points.push_back(std::move(p));
  }

  std::vector<const SweepPoint*> ordered;
  for (const auto& p : sweep.points) {
    if (p.ok) ordered.push_back(&p);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const SweepPoint* a, const SweepPoint* b) { return a->horizon < b->horizon; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    const Real& shorter = ordered[i - 1]->cost;
    const Real& longer = ordered[i]->cost;
    if (longer > shorter * (1 + Real(1e-10))) sweep.monotone = false;
  }

  std::vector<double> x, y;
  for (const auto* p : ordered) {
    if (p->cost > 0) {
      x.push_back(1.0 / p->horizon);
      y.push_back(std::log(p->cost.convert_to<double>()));
    }
  }
  sweep.fit_points = x.size();
  if (ordered.empty()) {
    sweep.fit_note = "no horizon synthesized";
  } else if (x.empty()) {
    sweep.fit_note = "all costs zero; fit skipped";
  } else if (x.size() < 2) {
    sweep.fit_note = "fewer than two nonzero costs; fit skipped";
  } else {
    const LineFit f = fit_line(x, y);
    sweep.fitted = true;
    sweep.slope = f.slope;
    sweep.intercept = f.intercept;
    sweep.r_squared = f.r_squared;
  }
  return sweep;
}

namespace {

// Independent double-precision evaluation of a solver kernel at s in [0, T].
double kernel_value(const RealKernel& k, double horizon, double s) {
  const double tau = horizon - s;
  const std::complex<double> lam(k.lambda.re.convert_to<double>(), k.lambda.im.convert_to<double>());
  const std::complex<double> e = std::exp(lam * tau);
  switch (k.kind) {
    case RealKernel::Kind::Constant: return 1.0;
    case RealKernel::Kind::Linear: return s;
    case RealKernel::Kind::ExpCos: return e.real();
    case RealKernel::Kind::ExpSin: return e.imag();
    case RealKernel::Kind::ExpReal: return e.real();
    case RealKernel::Kind::PolyExpReal: return tau * e.real();
  }
  return 0.0;
}

RealKernel random_kernel(std::mt19937_64& rng) {
  const int kind = static_cast<int>(rng() % 6);
  const Real re(-40.0 * (uniform_pm1(rng) + 1.0) / 2.0);
  const Real im(40.0 * (uniform_pm1(rng) + 1.0) / 2.0);
  RealKernel k;
  k.kind = static_cast<RealKernel::Kind>(kind);
  switch (k.kind) {
    case RealKernel::Kind::ExpCos:
    case RealKernel::Kind::ExpSin: k.lambda = Complex(re, im); break;
    case RealKernel::Kind::ExpReal:
    case RealKernel::Kind::PolyExpReal: k.lambda = Complex(re); break;
    default: break;
  }
  return k;
}

double quadrature_inner(const RealKernel& a, const RealKernel& b, double horizon) {
  auto f = [&](double s) { return kernel_value(a, horizon, s) * kernel_value(b, horizon, s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, horizon, 20, 1e-14);
}

}  // namespace

CrosscheckReport crosscheck_suite(const BeamConfig& config, int trials, std::uint64_t seed) {
  config.validate();
  if (trials < 1) throw DomainError("crosscheck needs at least one trial");
  PrecisionScope scope(config.precision_bits);
  std::mt19937_64 rng(seed);
  CrosscheckReport rep;
  rep.trials = trials;
  rep.oracle_steps = config.oracle_steps > 0 ? config.oracle_steps : recommended_oracle_steps(config);

  // Random controls over the configuration's own kernel family.
  std::vector<RealKernel> kernels;
  {
    MomentSystem shape;
    shape.kernels = constraint_kernels(config).kernels;
    kernels = shape.real_kernels();
  }
  const Real horizon(config.horizon);
  for (int t = 0; t < trials; ++t) {
    const ModalState data = fixture_random(config.boundary, config.n_modes, rng());
    const Real ref0 = measure(data).total();

    std::vector<Real> coef;
    for (std::size_t k = 0; k < kernels.size(); ++k) coef.emplace_back(uniform_pm1(rng));
    const ControlSignal control(kernels, coef, horizon);
    const ModalState closed = controlled_state_at(config, data, control, horizon);
    const ModalState rk = final_state(simulate_oracle(config, data, &control, rep.oracle_steps, 1));
    const Real ref = mp::fmax(ref0, measure(closed).total());
    rep.duhamel_vs_oracle = std::max(
        rep.duhamel_vs_oracle, relative(measure(difference(closed, rk)).total(), ref).convert_to<double>());

    const ModalState free_closed = controlled_state_at(config, data, ControlSignal(), horizon);
    const ModalState free_rk = final_state(simulate_oracle(config, data, nullptr, rep.oracle_steps, 1));
    rep.free_vs_oracle = std::max(
        rep.free_vs_oracle,
        relative(measure(difference(free_closed, free_rk)).total(), ref0).convert_to<double>());
  }

  const int pairs = std::max(trials, 100);
  for (int p = 0; p < pairs; ++p) {
    const RealKernel a = random_kernel(rng);
    const RealKernel b = random_kernel(rng);
    const double h = 0.25 + 1.75 * (uniform_pm1(rng) + 1.0) / 2.0;
    const Real hr(h);
    const double g = gram_entry(a, b, hr).convert_to<double>();
    const double gaa = gram_entry(a, a, hr).convert_to<double>();
    const double gbb = gram_entry(b, b, hr).convert_to<double>();
    const double scale = std::sqrt(gaa * gbb);
    const double q = quadrature_inner(a, b, h);
    if (scale > 0) rep.gram_vs_quadrature = std::max(rep.gram_vs_quadrature, std::abs(g - q) / scale);
  }
  return rep;
}

ModalState fixture_mode1(Boundary boundary, int n_modes) {
  ModalState s = ModalState::zeros(boundary, n_modes);
  s.values[1] = 1;
  return s;
}

ModalState fixture_random(Boundary boundary, int n_modes, std::uint64_t seed) {
  ModalState s = ModalState::zeros(boundary, n_modes);
  std::mt19937_64 rng(seed);
  const auto [a, b] = measurement_scale(boundary);
  for (int n = 1; n <= n_modes; ++n) {
    const double u = uniform_pm1(rng);
    const double v = uniform_pm1(rng);
    if (!is_controllable_mode(boundary, n)) continue;
    s.values[static_cast<std::size_t>(n)] = Real(u) / mp::pow(Real(n), a);
    s.velocities[static_cast<std::size_t>(n)] = Real(v) / mp::pow(Real(n), b);
  }
  return s;
}

ModalState make_fixture(const std::string& name, Boundary boundary, int n_modes) {
  if (name == "mode1") return fixture_mode1(boundary, n_modes);
  const std::string prefix = "random-seeded:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string digits = name.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw DomainError("fixture seed must be a non-negative integer: " + name);
    }
    return fixture_random(boundary, n_modes, std::stoull(digits));
  }
  throw DomainError("unknown fixture '" + name + "' (expected mode1 or random-seeded:<seed>)");
}

ModalState state_from_data(Boundary boundary, int n_modes, const std::vector<ModeDatum>& data) {
  ModalState s = ModalState::zeros(boundary, n_modes);
  for (const auto& d : data) {
    if (d.mode < 0 || d.mode > n_modes) {
      throw DomainError("data mode " + std::to_string(d.mode) + " outside 0.." + std::to_string(n_modes));
    }
    if (d.mode == 0 && boundary == Boundary::Dirichlet) {
      throw DomainError("mode 0 exists only for the Neumann boundary");
    }
    s.values[static_cast<std::size_t>(d.mode)] = d.value;
    s.velocities[static_cast<std::size_t>(d.mode)] = d.velocity;
  }
  return s;
}

std::vector<ModeDatum> parse_mode_data(const std::string& text) {
  std::vector<ModeDatum> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream fields(item);
    std::string f;
    while (std::getline(fields, f, ':')) parts.push_back(f);
    if (parts.size() < 2 || parts.size() > 3) {
      throw DomainError("mode data entry '" + item + "' must be n:value[:velocity]");
    }
    ModeDatum d;
    try {
      std::size_t used = 0;
      d.mode = std::stoi(parts[0], &used);
      if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    } catch (const std::exception&) {
      throw DomainError("mode index '" + parts[0] + "' is not an integer");
    }
    d.value = to_real(parse_rational(parts[1]));
    d.velocity = parts.size() == 3 ? to_real(parse_rational(parts[2])) : Real(0);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace beamctl
