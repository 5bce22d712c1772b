// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "errors.hpp"

namespace beamctl {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string dec(const Real& x) {
  if (mp::isnan(x)) return "nan";
  if (mp::isinf(x)) return x > 0 ? "inf" : "-inf";
  return to_decimal(x);
}

std::string csv(const Real& x) { return format_double(x.convert_to<double>()); }

json complex_json(const Complex& z) { return json{{"re", dec(z.re)}, {"im", dec(z.im)}}; }

json config_object(const BeamConfig& c) {
  return json{{"boundary", to_string(c.boundary)},
              {"rho", to_string(c.rho)},
              {"modes", c.n_modes},
              {"horizon", format_double(c.horizon)},
              {"precision_bits", c.precision_bits},
              {"regularization", format_double(c.regularization)},
              {"autoscale", c.autoscale},
              {"precision_ceiling", c.precision_ceiling},
              {"tolerance", format_double(c.tolerance)},
              {"oracle_steps", c.oracle_steps}};
}

json collisions_json(const std::vector<CollisionRecord>& cs) {
  json arr = json::array();
  for (const auto& c : cs) {
    arr.push_back(json{{"plus_mode", c.plus_mode},
                       {"minus_mode", c.minus_mode},
                       {"lambda", complex_json(c.lambda)},
                       {"defect", format_double(c.defect)}});
  }
  return arr;
}

json kernel_json(const RealKernel& k) {
  json j{{"kind", to_string(k.kind)}, {"mode", k.mode}};
  if (k.kind != RealKernel::Kind::Constant && k.kind != RealKernel::Kind::Linear) {
    j["lambda"] = complex_json(k.lambda);
  }
  return j;
}

}  // namespace

std::string config_json(const BeamConfig& config) { return config_object(config).dump(2) + "\n"; }

std::string spectrum_csv(const BeamConfig& config) {
  config.validate();
  std::ostringstream out;
  out << "n,beta,alpha,lambda_plus_re,lambda_plus_im,lambda_minus_re,lambda_minus_im,regime\n";
  for (const auto& e : mode_spectrum(config.rho, config.n_modes)) {
    out << e.n << ',' << csv(e.beta) << ',' << csv(e.alpha) << ',' << csv(e.lambda_plus.re) << ','
        << csv(e.lambda_plus.im) << ',' << csv(e.lambda_minus.re) << ',' << csv(e.lambda_minus.im) << ','
        << to_string(e.regime) << '\n';
  }
  return out.str();
}

std::string spectrum_json(const BeamConfig& config) {
  config.validate();
  const Regime regime = classify_damping(config.rho);
  json j;
  j["rho"] = to_string(config.rho);
  j["modes"] = config.n_modes;
  j["regime"] = to_string(regime);
  json modes = json::array();
  for (const auto& e : mode_spectrum(config.rho, config.n_modes)) {
    modes.push_back(json{{"n", e.n},
                         {"beta", dec(e.beta)},
                         {"alpha", dec(e.alpha)},
                         {"lambda_plus", complex_json(e.lambda_plus)},
                         {"lambda_minus", complex_json(e.lambda_minus)}});
  }
  j["eigenvalues"] = modes;
  json collisions = json::array();
  if (regime == Regime::Overdamped) {
    const BranchRatio r = branch_ratio(config.rho);
    j["branch_ratio"] = r.is_rational() ? to_string(*r.exact) : dec(r.value);
    j["branch_ratio_rational"] = r.is_rational();
    const CollisionScan scan = detect_collisions(r, config.n_modes);
    for (const auto& [m, n] : scan.pairs) collisions.push_back(json{{"plus_mode", m}, {"minus_mode", n}});
    if (!scan.warning.empty()) j["warning"] = scan.warning;
  }
  j["collisions"] = collisions;
  const GapStatistics g = gap_statistics(config.rho, config.n_modes);
  j["gaps"] = json{{"plus_min", format_double(g.plus.min_gap)},
                   {"minus_min", format_double(g.minus.min_gap)},
                   {"cross_min", format_double(g.cross_min_gap)},
                   {"cross_pair", json::array({g.cross_m, g.cross_n})}};
  return j.dump(2) + "\n";
}

std::string moment_system_json(const MomentSystem& system) {
  json j;
  j["boundary"] = to_string(system.boundary);
  j["rho"] = to_string(system.rho);
  j["horizon"] = dec(system.horizon);
  j["modes"] = system.n_modes;
  j["data_norm"] = dec(system.data_norm);
  json ks = json::array();
  for (std::size_t k = 0; k < system.kernels.size(); ++k) {
    const auto& d = system.kernels[k];
    json e{{"kind", to_string(d.kind)}, {"mode", d.mode}};
    if (d.branch != 0) e["branch"] = std::string(1, d.branch);
    if (d.mode != 0) e["lambda"] = complex_json(d.lambda);
    e["target"] = complex_json(system.rhs[k]);
    ks.push_back(e);
  }
  j["constraints"] = ks;
  j["collisions"] = collisions_json(system.collisions);
  return j.dump(2) + "\n";
}

std::string synthesis_json(const SynthesisReport& report, const BeamConfig& config) {
  json j;
  j["config"] = config_object(config);
  j["residual_norm"] = dec(report.residual_norm);
  j["gram_condition"] = dec(report.gram_condition);
  j["control_cost"] = dec(report.control_cost);
  j["precision_used"] = report.precision_used;
  j["regularization"] = dec(report.regularization);
  j["autoscale_trace"] = report.autoscale_trace;
  json ks = json::array();
  for (const auto& k : report.control.kernels()) ks.push_back(kernel_json(k));
  j["kernels"] = ks;
  json cs = json::array();
  for (const auto& c : report.control.coefficients()) cs.push_back(dec(c));
  j["coefficients"] = cs;
  json ts = json::array();
  for (const auto& t : report.targets) ts.push_back(dec(t));
  j["targets"] = ts;
  j["collisions"] = collisions_json(report.collisions);
  return j.dump(2) + "\n";
}

std::string control_csv(const ControlSignal& control, int samples) {
  if (samples < 1) throw DomainError("control samples must be >= 1");
  std::ostringstream out;
  out << "t,f,f_prime,f_double_prime\n";
  const Real& horizon = control.horizon();
  for (int i = 0; i <= samples; ++i) {
    const Real t = i == samples ? horizon : Real(horizon * i / samples);
    const ControlValue v = control.empty() ? ControlValue{Real(0), Real(0), Real(0)} : evaluate_control(control, t);
    out << csv(t) << ',' << csv(v.f) << ',' << csv(v.df) << ',' << csv(v.d2f) << '\n';
  }
  return out.str();
}

std::string experiment_json(const ExperimentResult& r) {
  json j;
  j["config"] = config_object(r.config);
  j["verdict"] = to_string(r.verdict);
  if (!r.cause.empty()) {
    j["cause"] = r.cause;
    j["cause_message"] = r.cause_message;
  }
  const auto [a, b] = measurement_scale(r.config.boundary);
  j["scale"] = json::array({a, b});
  j["initial_norms"] = json::array({dec(r.initial_value_norm), dec(r.initial_velocity_norm)});
  j["final_norms"] = json::array({dec(r.final_value_norm), dec(r.final_velocity_norm)});
  j["oracle_final_norms"] = json::array({dec(r.oracle_value_norm), dec(r.oracle_velocity_norm)});
  j["final_relative"] = dec(r.final_relative);
  j["oracle_relative"] = dec(r.oracle_relative);
  j["oracle_deviation"] = dec(r.oracle_deviation);
  j["control_cost"] = dec(r.control_cost);
  j["residual_norm"] = dec(r.residual_norm);
  j["gram_condition"] = dec(r.gram_condition);
  j["precision_used"] = r.precision_used;
  j["oracle_steps"] = r.oracle_steps;
  j["collisions"] = collisions_json(r.collisions);
  return j.dump() + "\n";
}

std::string sweep_csv(const CostSweep& sweep) {
  std::ostringstream out;
  out << "T,cost,residual,verdict\n";
  for (const auto& p : sweep.points) {
    out << format_double(p.horizon) << ',' << (p.ok ? csv(p.cost) : std::string("nan")) << ','
        << (p.ok ? csv(p.residual) : std::string("nan")) << ',' << to_string(p.verdict) << '\n';
  }
  return out.str();
}

std::string sweep_json(const CostSweep& sweep, const BeamConfig& config) {
  json j;
  j["config"] = config_object(config);
  json pts = json::array();
  for (const auto& p : sweep.points) {
    json e{{"T", format_double(p.horizon)}, {"verdict", to_string(p.verdict)}};
    if (p.ok) {
      e["cost"] = dec(p.cost);
      e["residual"] = dec(p.residual);
      e["final_relative"] = dec(p.final_relative);
      e["precision_used"] = p.precision_used;
    }
    if (!p.cause.empty()) e["cause"] = p.cause;
    pts.push_back(e);
  }
  j["points"] = pts;
  json fit{{"fitted", sweep.fitted}, {"points", sweep.fit_points}};
  if (sweep.fitted) {
    fit["slope"] = format_double(sweep.slope);
    fit["intercept"] = format_double(sweep.intercept);
    fit["r_squared"] = format_double(sweep.r_squared);
  } else {
    fit["note"] = sweep.fit_note;
  }
  j["fit"] = fit;
  j["monotone_nonincreasing"] = sweep.monotone;
  return j.dump(2) + "\n";
}

std::string condensation_csv(const CondensationReport& rep) {
  std::ostringstream out;
  out << "n,branch,per_n_value,running_sup\n";
  for (int n = 1; n <= rep.n_max; ++n) {
    const std::size_t i = static_cast<std::size_t>(n) - 1;
    out << n << ",plus," << csv(rep.per_n_plus[i]) << ',' << csv(rep.running_sup_plus[i]) << '\n';
    out << n << ",minus," << csv(rep.per_n_minus[i]) << ',' << csv(rep.running_sup_minus[i]) << '\n';
  }
  return out.str();
}

std::string condensation_json(const CondensationReport& rep) {
  json j;
  {
    PrecisionScope scope(std::min(rep.precision_bits, 256u));
    j["r"] = dec(rounded(rep.r));
  }
  j["n_max"] = rep.n_max;
  j["precision_bits"] = rep.precision_bits;
  j["running_sup_plus"] = dec(rep.running_sup_plus.back());
  j["running_sup_minus"] = dec(rep.running_sup_minus.back());
  j["tail_window"] = json::array({rep.tail_start, rep.n_max});
  j["tail_sup_plus"] = dec(rep.tail_sup_plus);
  j["tail_sup_minus"] = dec(rep.tail_sup_minus);
  j["c_estimate"] = dec(rep.c_estimate);
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,n,value,velocity\n";
  const int first = traj.boundary == Boundary::Neumann ? 0 : 1;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    for (int n = first; n <= traj.n_modes; ++n) {
      const auto k = static_cast<std::size_t>(n);
      out << format_double(traj.times[s]) << ',' << n << ',' << format_double(traj.values[s][k]) << ','
          << format_double(traj.velocities[s][k]) << '\n';
    }
  }
  return out.str();
}

std::string crosscheck_json(const CrosscheckReport& r, const BeamConfig& config) {
  json j;
  j["config"] = config_object(config);
  j["trials"] = r.trials;
  j["oracle_steps"] = r.oracle_steps;
  j["duhamel_vs_oracle"] = format_double(r.duhamel_vs_oracle);
  j["free_vs_oracle"] = format_double(r.free_vs_oracle);
  j["gram_vs_quadrature"] = format_double(r.gram_vs_quadrature);
  return j.dump(2) + "\n";
}

}  // namespace beamctl
