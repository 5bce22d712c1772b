// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "beamctl/beamctl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "condensation.hpp"
#include "errors.hpp"
#include "report_io.hpp"
#include "verification.hpp"

using namespace beamctl;

struct beamctl_config {
  BeamConfig config;
};

struct beamctl_state {
  ModalState state;  // held at kStateBits, re-rounded on use
};

struct beamctl_synthesis {
  BeamConfig config;
  ModalState state;
  SynthesisReport report;
  std::optional<double> final_relative;
};

struct beamctl_experiment {
  ExperimentResult result;
};

struct beamctl_sweep {
  BeamConfig config;
  CostSweep sweep;
};

struct beamctl_condensation {
  CondensationReport report;
};

namespace {

constexpr unsigned kStateBits = 2048;

thread_local std::string g_message;
thread_local std::string g_cause;

void set_error(std::string cause, std::string message) {
  g_cause = std::move(cause);
  g_message = std::move(message);
}

template <class F>
beamctl_status guarded(F&& body) {
  g_cause.clear();
  g_message.clear();
  try {
    body();
    return BEAMCTL_OK;
  } catch (const Error& e) {
    set_error(e.cause(), e.what());
    return static_cast<beamctl_status>(e.status());
  } catch (const std::bad_alloc&) {
    set_error("OutOfMemory", "allocation failed");
  } catch (const std::exception& e) {
    set_error("InternalError", e.what());
  } catch (...) {
    set_error("InternalError", "unknown exception");
  }
  return BEAMCTL_ERR_INTERNAL;
}

std::string need(const char* p, const char* what) {
  if (p == nullptr) throw DomainError(std::string(what) + " must not be NULL");
  return std::string(p);
}

template <class T>
const T& need(const T* p, const char* what) {
  if (p == nullptr) throw DomainError(std::string(what) + " must not be NULL");
  return *p;
}

template <class T>
T& need(T* p, const char* what) {
  if (p == nullptr) throw DomainError(std::string(what) + " must not be NULL");
  return *p;
}

void emit(const std::string& text, char** out) {
  need(out, "output pointer");
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (buf == nullptr) throw std::bad_alloc();
  std::memcpy(buf, text.c_str(), text.size() + 1);
  *out = buf;
}

Boundary to_boundary(beamctl_boundary b) {
  switch (b) {
    case BEAMCTL_DIRICHLET: return Boundary::Dirichlet;
    case BEAMCTL_NEUMANN: return Boundary::Neumann;
  }
  throw DomainError("unknown boundary value");
}

// Setters validate the whole configuration and roll back on failure.
template <class F>
beamctl_status update(beamctl_config* cfg, F&& change) {
  return guarded([&] {
    BeamConfig next = need(cfg, "config").config;
    change(next);
    next.validate();
    cfg->config = std::move(next);
  });
}

ModalState state_for(const beamctl_config& cfg, const beamctl_state& s) {
  if (s.state.boundary != cfg.config.boundary) {
    throw DomainError(std::string("state boundary (") + to_string(s.state.boundary) +
                      ") does not match config boundary (" + to_string(cfg.config.boundary) + ")");
  }
  return s.state.truncated(cfg.config.n_modes);
}

}  // namespace

extern "C" {

const char* beamctl_version(void) { return "0.1.0"; }
const char* beamctl_last_error_message(void) { return g_message.c_str(); }
const char* beamctl_last_error_cause(void) { return g_cause.c_str(); }
void beamctl_string_free(char* s) { std::free(s); }

beamctl_status beamctl_config_create(beamctl_config** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = new beamctl_config();
  });
}

void beamctl_config_destroy(beamctl_config* cfg) { delete cfg; }

beamctl_status beamctl_config_set_rho(beamctl_config* cfg, const char* rho) {
  return update(cfg, [&](BeamConfig& c) { c.rho = parse_rational(need(rho, "rho")); });
}
beamctl_status beamctl_config_set_rho_double(beamctl_config* cfg, double rho) {
  return update(cfg, [&](BeamConfig& c) { c.rho = rational_from_double(rho); });
}
beamctl_status beamctl_config_set_modes(beamctl_config* cfg, int n_modes) {
  return update(cfg, [&](BeamConfig& c) { c.n_modes = n_modes; });
}
beamctl_status beamctl_config_set_horizon(beamctl_config* cfg, double horizon) {
  return update(cfg, [&](BeamConfig& c) { c.horizon = horizon; });
}
beamctl_status beamctl_config_set_boundary(beamctl_config* cfg, beamctl_boundary b) {
  return update(cfg, [&](BeamConfig& c) { c.boundary = to_boundary(b); });
}
beamctl_status beamctl_config_set_precision_bits(beamctl_config* cfg, unsigned bits) {
  return update(cfg, [&](BeamConfig& c) { c.precision_bits = bits; });
}
beamctl_status beamctl_config_set_regularization(beamctl_config* cfg, double reg) {
  return update(cfg, [&](BeamConfig& c) { c.regularization = reg; });
}
beamctl_status beamctl_config_set_autoscale(beamctl_config* cfg, int enabled) {
  return update(cfg, [&](BeamConfig& c) { c.autoscale = enabled != 0; });
}
beamctl_status beamctl_config_set_precision_ceiling(beamctl_config* cfg, unsigned bits) {
  return update(cfg, [&](BeamConfig& c) { c.precision_ceiling = bits; });
}
beamctl_status beamctl_config_set_tolerance(beamctl_config* cfg, double tol) {
  return update(cfg, [&](BeamConfig& c) { c.tolerance = tol; });
}
beamctl_status beamctl_config_set_oracle_steps(beamctl_config* cfg, long steps) {
  return update(cfg, [&](BeamConfig& c) { c.oracle_steps = steps; });
}

beamctl_status beamctl_config_json(const beamctl_config* cfg, char** out) {
  return guarded([&] {
    emit(config_json(need(cfg, "config").config), out);
  });
}

beamctl_status beamctl_state_create(beamctl_boundary b, int n_modes, beamctl_state** out) {
  return guarded([&] {
    need(out, "output pointer");
    if (n_modes < 1) throw DomainError("n_modes must be >= 1");
    PrecisionScope scope(kStateBits);
    *out = new beamctl_state{ModalState::zeros(to_boundary(b), n_modes)};
  });
}

beamctl_status beamctl_state_fixture(const char* name, beamctl_boundary b, int n_modes, beamctl_state** out) {
  return guarded([&] {
    need(out, "output pointer");
    if (n_modes < 1) throw DomainError("n_modes must be >= 1");
    PrecisionScope scope(kStateBits);
    *out = new beamctl_state{make_fixture(need(name, "fixture name"), to_boundary(b), n_modes)};
  });
}

void beamctl_state_destroy(beamctl_state* s) { delete s; }

beamctl_status beamctl_state_set_mode(beamctl_state* s, int mode, double value, double velocity) {
  return guarded([&] {
    auto& st = need(s, "state").state;
    if (mode < 0 || mode > st.n_modes()) throw DomainError("mode index out of range");
    if (mode == 0 && st.boundary == Boundary::Dirichlet) throw DomainError("mode 0 exists only for Neumann");
    PrecisionScope scope(kStateBits);
    st.values[static_cast<std::size_t>(mode)] = Real(value);
    st.velocities[static_cast<std::size_t>(mode)] = Real(velocity);
  });
}

beamctl_status beamctl_state_set_mode_text(beamctl_state* s, int mode, const char* value, const char* velocity) {
  return guarded([&] {
    auto& st = need(s, "state").state;
    if (mode < 0 || mode > st.n_modes()) throw DomainError("mode index out of range");
    if (mode == 0 && st.boundary == Boundary::Dirichlet) throw DomainError("mode 0 exists only for Neumann");
    PrecisionScope scope(kStateBits);
    const Real v = to_real(parse_rational(need(value, "value")));
    const Real w = to_real(parse_rational(need(velocity, "velocity")));
    st.values[static_cast<std::size_t>(mode)] = v;
    st.velocities[static_cast<std::size_t>(mode)] = w;
  });
}

beamctl_status beamctl_state_set_data(beamctl_state* s, const char* triples) {
  return guarded([&] {
    auto& st = need(s, "state").state;
    PrecisionScope scope(kStateBits);
    const auto data = parse_mode_data(need(triples, "data"));
    ModalState next = st;
    for (const auto& d : data) {
      if (d.mode < 0 || d.mode > st.n_modes()) throw DomainError("data mode " + std::to_string(d.mode) + " out of range");
      if (d.mode == 0 && st.boundary == Boundary::Dirichlet) throw DomainError("mode 0 exists only for Neumann");
      next.values[static_cast<std::size_t>(d.mode)] = d.value;
      next.velocities[static_cast<std::size_t>(d.mode)] = d.velocity;
    }
    st = std::move(next);
  });
}

beamctl_status beamctl_spectrum_csv(const beamctl_config* cfg, char** out) {
  return guarded([&] {
    const BeamConfig& c = need(cfg, "config").config;
    PrecisionScope scope(c.precision_bits);
    emit(spectrum_csv(c), out);
  });
}

beamctl_status beamctl_spectrum_json(const beamctl_config* cfg, char** out) {
  return guarded([&] {
    const BeamConfig& c = need(cfg, "config").config;
    PrecisionScope scope(c.precision_bits);
    emit(spectrum_json(c), out);
  });
}

beamctl_status beamctl_moment_system_json(const beamctl_config* cfg, const beamctl_state* s, char** out) {
  return guarded([&] {
    const auto& conf = need(cfg, "config");
    PrecisionScope scope(conf.config.precision_bits);
    emit(moment_system_json(assemble(conf.config, state_for(conf, need(s, "state")))), out);
  });
}

beamctl_status beamctl_synthesize(const beamctl_config* cfg, const beamctl_state* s, beamctl_synthesis** out) {
  return guarded([&] {
    need(out, "output pointer");
    const auto& conf = need(cfg, "config");
    PrecisionScope scope(conf.config.precision_bits);
    auto syn = std::make_unique<beamctl_synthesis>();
    syn->config = conf.config;
    syn->state = state_for(conf, need(s, "state"));
    syn->report = synthesize(conf.config, syn->state);
    *out = syn.release();
  });
}

void beamctl_synthesis_destroy(beamctl_synthesis* syn) { delete syn; }

beamctl_status beamctl_synthesis_json(const beamctl_synthesis* syn, char** out) {
  return guarded([&] {
    const auto& h = need(syn, "synthesis");
    PrecisionScope scope(h.report.precision_used);
    emit(synthesis_json(h.report, h.config), out);
  });
}

beamctl_status beamctl_synthesis_control_csv(const beamctl_synthesis* syn, int samples, char** out) {
  return guarded([&] {
    const auto& h = need(syn, "synthesis");
    PrecisionScope scope(h.report.precision_used);
    emit(control_csv(h.report.control, samples), out);
  });
}

beamctl_status beamctl_synthesis_cost(const beamctl_synthesis* syn, double* cost) {
  return guarded([&] { need(cost, "cost") = need(syn, "synthesis").report.control_cost.convert_to<double>(); });
}

beamctl_status beamctl_synthesis_residual(const beamctl_synthesis* syn, double* residual) {
  return guarded(
      [&] { need(residual, "residual") = need(syn, "synthesis").report.residual_norm.convert_to<double>(); });
}

beamctl_status beamctl_synthesis_precision(const beamctl_synthesis* syn, unsigned* bits) {
  return guarded([&] { need(bits, "bits") = need(syn, "synthesis").report.precision_used; });
}

beamctl_status beamctl_synthesis_evaluate(const beamctl_synthesis* syn, double t, double* f, double* f_prime,
                                          double* f_double_prime) {
  return guarded([&] {
    const auto& h = need(syn, "synthesis");
    PrecisionScope scope(h.report.precision_used);
    ControlValue v{Real(0), Real(0), Real(0)};
    if (!h.report.control.empty()) {
      v = evaluate_control(h.report.control, Real(t));
    } else if (t < 0 || t > h.config.horizon) {
      throw DomainError("control evaluated outside [0, T]");
    }
    if (f) *f = v.f.convert_to<double>();
    if (f_prime) *f_prime = v.df.convert_to<double>();
    if (f_double_prime) *f_double_prime = v.d2f.convert_to<double>();
  });
}

beamctl_status beamctl_synthesis_final_relative(const beamctl_synthesis* syn, double* rel) {
  return guarded([&] {
    auto& h = const_cast<beamctl_synthesis&>(need(syn, "synthesis"));
    need(rel, "output pointer");
    if (!h.final_relative) {
      PrecisionScope scope(h.report.precision_used);
      const ModalState data = h.state.truncated(h.config.n_modes);
      const ModalState fin = controlled_state_at(h.config, data, h.report.control, Real(h.config.horizon));
      const Real init = state_norm(data);
      const Real end = state_norm(fin);
      h.final_relative = (init > 0 ? Real(end / init) : end).convert_to<double>();
    }
    *rel = *h.final_relative;
  });
}

beamctl_status beamctl_verify(const beamctl_config* cfg, const beamctl_state* s, beamctl_experiment** out) {
  return guarded([&] {
    need(out, "output pointer");
    const auto& conf = need(cfg, "config");
    PrecisionScope scope(conf.config.precision_bits);
    auto e = std::make_unique<beamctl_experiment>();
    e->result = null_control_experiment(conf.config, state_for(conf, need(s, "state")));
    *out = e.release();
  });
}

void beamctl_experiment_destroy(beamctl_experiment* e) { delete e; }

beamctl_status beamctl_experiment_json(const beamctl_experiment* e, char** out) {
  return guarded([&] {
    const auto& r = need(e, "experiment").result;
    PrecisionScope scope(r.precision_used ? r.precision_used : r.config.precision_bits);
    emit(experiment_json(r), out);
  });
}

beamctl_status beamctl_experiment_verdict(const beamctl_experiment* e, beamctl_verdict* v) {
  return guarded([&] {
    switch (need(e, "experiment").result.verdict) {
      case Verdict::Controlled: need(v, "verdict") = BEAMCTL_CONTROLLED; break;
      case Verdict::ResidualTooLarge: need(v, "verdict") = BEAMCTL_RESIDUAL_TOO_LARGE; break;
      case Verdict::Uncontrollable: need(v, "verdict") = BEAMCTL_UNCONTROLLABLE; break;
    }
  });
}

beamctl_status beamctl_experiment_cause_status(const beamctl_experiment* e, beamctl_status* st) {
  return guarded([&] {
    need(st, "status") = static_cast<beamctl_status>(need(e, "experiment").result.cause_status);
  });
}

const char* beamctl_experiment_cause(const beamctl_experiment* e) {
  return e == nullptr ? "" : e->result.cause.c_str();
}

beamctl_status beamctl_experiment_final_relative(const beamctl_experiment* e, double* closed_form,
                                                 double* oracle) {
  return guarded([&] {
    const auto& r = need(e, "experiment").result;
    if (closed_form) *closed_form = r.final_relative.convert_to<double>();
    if (oracle) *oracle = r.oracle_relative.convert_to<double>();
  });
}

beamctl_status beamctl_cost_sweep(const beamctl_config* cfg, const beamctl_state* s, const double* horizons,
                                  size_t count, beamctl_sweep** out) {
  return guarded([&] {
    need(out, "output pointer");
    const auto& conf = need(cfg, "config");
    if (count > 0) need(horizons, "horizons");
    PrecisionScope scope(conf.config.precision_bits);
    auto sw = std::make_unique<beamctl_sweep>();
    sw->config = conf.config;
    sw->sweep = cost_sweep(conf.config, state_for(conf, need(s, "state")),
                           std::vector<double>(horizons, horizons + count));
    *out = sw.release();
  });
}

void beamctl_sweep_destroy(beamctl_sweep* sw) { delete sw; }

beamctl_status beamctl_sweep_csv(const beamctl_sweep* sw, char** out) {
  return guarded([&] {
    const auto& h = need(sw, "sweep");
    PrecisionScope scope(h.config.precision_bits);
    emit(sweep_csv(h.sweep), out);
  });
}

beamctl_status beamctl_sweep_json(const beamctl_sweep* sw, char** out) {
  return guarded([&] {
    const auto& h = need(sw, "sweep");
    PrecisionScope scope(h.config.precision_bits);
    emit(sweep_json(h.sweep, h.config), out);
  });
}

beamctl_status beamctl_sweep_fit(const beamctl_sweep* sw, int* fitted, double* slope, double* r_squared,
                                 int* monotone) {
  return guarded([&] {
    const auto& s = need(sw, "sweep").sweep;
    if (fitted) *fitted = s.fitted ? 1 : 0;
    if (slope) *slope = s.slope;
    if (r_squared) *r_squared = s.r_squared;
    if (monotone) *monotone = s.monotone ? 1 : 0;
  });
}

beamctl_status beamctl_crosscheck_json(const beamctl_config* cfg, int trials, uint64_t seed, char** out) {
  return guarded([&] {
    const BeamConfig& c = need(cfg, "config").config;
    PrecisionScope scope(c.precision_bits);
    emit(crosscheck_json(crosscheck_suite(c, trials, seed), c), out);
  });
}

beamctl_status beamctl_simulate_csv(const beamctl_config* cfg, const beamctl_state* s, const beamctl_synthesis* syn,
                                    long steps, int samples, char** out) {
  return guarded([&] {
    const auto& conf = need(cfg, "config");
    if (steps < 0) throw DomainError("steps must be >= 0");
    PrecisionScope scope(syn ? syn->report.precision_used : conf.config.precision_bits);
    const ControlSignal* control = nullptr;
    if (syn != nullptr) {
      if (syn->config.horizon != conf.config.horizon || syn->config.n_modes != conf.config.n_modes ||
          syn->config.boundary != conf.config.boundary || syn->config.rho != conf.config.rho) {
        throw DomainError("synthesis was computed for a different configuration");
      }
      control = &syn->report.control;
    }
    const long n = steps > 0 ? steps : recommended_oracle_steps(conf.config);
    emit(trajectory_csv(simulate_oracle(conf.config, state_for(conf, need(s, "state")), control, n, samples)), out);
  });
}

beamctl_status beamctl_condensation_compute(const char* r, int n_max, unsigned bits, beamctl_condensation** out) {
  return guarded([&] {
    need(out, "output pointer");
    PrecisionScope scope(bits);
    auto c = std::make_unique<beamctl_condensation>();
    c->report = condensation_estimate(parse_branch_ratio(need(r, "r")), n_max);
    *out = c.release();
  });
}

beamctl_status beamctl_condensation_from_config(const beamctl_config* cfg, int n_max, beamctl_condensation** out) {
  return guarded([&] {
    need(out, "output pointer");
    const BeamConfig& conf = need(cfg, "config").config;
    if (classify_damping(conf.rho) != Regime::Overdamped) {
      throw DomainError("condensation analysis needs the overdamped regime rho > 2");
    }
    PrecisionScope scope(conf.precision_bits);
    auto c = std::make_unique<beamctl_condensation>();
    c->report = condensation_estimate(branch_ratio(conf.rho), n_max);
    *out = c.release();
  });
}

void beamctl_condensation_destroy(beamctl_condensation* c) { delete c; }

beamctl_status beamctl_condensation_csv(const beamctl_condensation* c, char** out) {
  return guarded([&] {
    const auto& r = need(c, "condensation").report;
    PrecisionScope scope(r.precision_bits);
    emit(condensation_csv(r), out);
  });
}

beamctl_status beamctl_condensation_json(const beamctl_condensation* c, char** out) {
  return guarded([&] {
    const auto& r = need(c, "condensation").report;
    PrecisionScope scope(r.precision_bits);
    emit(condensation_json(r), out);
  });
}

beamctl_status beamctl_condensation_estimate(const beamctl_condensation* c, double* estimate) {
  return guarded(
      [&] { need(estimate, "estimate") = need(c, "condensation").report.c_estimate.convert_to<double>(); });
}

}  // extern "C"
