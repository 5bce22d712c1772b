// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

// beamctl command-line front end. Talks to the library only through the C API.

#include <beamctl/beamctl.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  std::string rho = "1";
  int modes = 6;
  double horizon = 1.0;
  std::string boundary = "dirichlet";
  unsigned precision_bits = 256;
  double regularization = 0.0;
  bool no_autoscale = false;
  std::optional<unsigned> precision_ceiling;
  double tolerance = 1e-6;
  long steps = 0;
  std::optional<unsigned long long> seed;
  std::string fixture;
  std::string data;
  std::string out = ".";
  int samples = 200;
  std::string config_path;
  // subcommand specific
  std::vector<double> horizons{0.25, 0.5, 1.0, 2.0};
  std::string r;
  int n_max = 200;
  int trials = 50;
};

// Failure carrying the exit status and a diagnostic.
struct Failure {
  int status;
  std::string cause;
  std::string message;
};

[[noreturn]] void fail_last(beamctl_status st) {
  throw Failure{static_cast<int>(st), beamctl_last_error_cause(), beamctl_last_error_message()};
}

void check(beamctl_status st) {
  if (st != BEAMCTL_OK) fail_last(st);
}

[[noreturn]] void usage_error(const std::string& message) { throw Failure{2, "ConfigError", message}; }

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Config = Handle<beamctl_config, beamctl_config_destroy>;
using State = Handle<beamctl_state, beamctl_state_destroy>;
using Synthesis = Handle<beamctl_synthesis, beamctl_synthesis_destroy>;
using Experiment = Handle<beamctl_experiment, beamctl_experiment_destroy>;
using Sweep = Handle<beamctl_sweep, beamctl_sweep_destroy>;
using Condensation = Handle<beamctl_condensation, beamctl_condensation_destroy>;

std::string take(char* s) {
  std::string out(s ? s : "");
  beamctl_string_free(s);
  return out;
}

template <class F>
std::string text_from(F&& call) {
  char* s = nullptr;
  check(call(&s));
  return take(s);
}

void write_file(const Options& o, const std::string& name, const std::string& content) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) usage_error("cannot write " + path.string());
  f << content;
  if (!f) usage_error("failed writing " + path.string());
}

// ---- configuration file -------------------------------------------------

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    usage_error("config key " + key + ": '" + v + "' is not a number");
  }
}

long long parse_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    usage_error("config key " + key + ": '" + v + "' is not an integer");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  usage_error("config key " + key + ": '" + v + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) usage_error("config key " + key + " is empty");
  return out;
}

void apply_config_file(Options& o) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(o.config_path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    usage_error(std::string("config file: ") + e.what());
  }
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> schema{
      {"beam",
       {{"rho", [&](auto&, auto& v) { o.rho = v; }},
        {"modes", [&](auto& k, auto& v) { o.modes = static_cast<int>(parse_integer(k, v)); }},
        {"horizon", [&](auto& k, auto& v) { o.horizon = parse_double(k, v); }},
        {"boundary", [&](auto&, auto& v) { o.boundary = v; }},
        {"precision_bits", [&](auto& k, auto& v) { o.precision_bits = static_cast<unsigned>(parse_integer(k, v)); }},
        {"precision_ceiling",
         [&](auto& k, auto& v) { o.precision_ceiling = static_cast<unsigned>(parse_integer(k, v)); }},
        {"autoscale", [&](auto& k, auto& v) { o.no_autoscale = !parse_bool(k, v); }},
        {"regularization", [&](auto& k, auto& v) { o.regularization = parse_double(k, v); }},
        {"tolerance", [&](auto& k, auto& v) { o.tolerance = parse_double(k, v); }},
        {"oracle_steps", [&](auto& k, auto& v) { o.steps = static_cast<long>(parse_integer(k, v)); }}}},
      {"data",
       {{"fixture", [&](auto&, auto& v) { o.fixture = v; }},
        {"modes", [&](auto&, auto& v) { o.data = v; }},
        {"seed", [&](auto& k, auto& v) { o.seed = static_cast<unsigned long long>(parse_integer(k, v)); }}}},
      {"output",
       {{"dir", [&](auto&, auto& v) { o.out = v; }},
        {"samples", [&](auto& k, auto& v) { o.samples = static_cast<int>(parse_integer(k, v)); }}}},
      {"sweep", {{"horizons", [&](auto& k, auto& v) { o.horizons = parse_list(k, v); }}}},
      {"condensation",
       {{"r", [&](auto&, auto& v) { o.r = v; }},
        {"n_max", [&](auto& k, auto& v) { o.n_max = static_cast<int>(parse_integer(k, v)); }}}},
      {"crosscheck", {{"trials", [&](auto& k, auto& v) { o.trials = static_cast<int>(parse_integer(k, v)); }}}},
  };
  for (const auto& [section, body] : tree) {
    const auto s = schema.find(section);
    if (s == schema.end()) {
      if (body.empty()) usage_error("config file: top-level key '" + section + "' outside a section");
      usage_error("config file: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      const auto setter = s->second.find(key);
      if (setter == s->second.end()) usage_error("config file: unknown key '" + key + "' in [" + section + "]");
      setter->second(section + "." + key, value.data());
    }
  }
}

// ---- handle construction ------------------------------------------------

beamctl_boundary boundary_of(const Options& o) {
  if (o.boundary == "dirichlet") return BEAMCTL_DIRICHLET;
  if (o.boundary == "neumann") return BEAMCTL_NEUMANN;
  usage_error("boundary must be 'dirichlet' or 'neumann', got '" + o.boundary + "'");
}

void build_config(const Options& o, Config& cfg) {
  check(beamctl_config_create(cfg.out()));
  check(beamctl_config_set_boundary(cfg.get(), boundary_of(o)));
  check(beamctl_config_set_rho(cfg.get(), o.rho.c_str()));
  check(beamctl_config_set_modes(cfg.get(), o.modes));
  check(beamctl_config_set_horizon(cfg.get(), o.horizon));
  check(beamctl_config_set_precision_bits(cfg.get(), o.precision_bits));
  if (o.precision_ceiling) check(beamctl_config_set_precision_ceiling(cfg.get(), *o.precision_ceiling));
  check(beamctl_config_set_regularization(cfg.get(), o.regularization));
  check(beamctl_config_set_autoscale(cfg.get(), o.no_autoscale ? 0 : 1));
  check(beamctl_config_set_tolerance(cfg.get(), o.tolerance));
  check(beamctl_config_set_oracle_steps(cfg.get(), o.steps));
}

void build_state(const Options& o, State& st) {
  const beamctl_boundary b = boundary_of(o);
  if (!o.fixture.empty() && !o.data.empty()) usage_error("give either a fixture or explicit mode data, not both");
  if (!o.data.empty()) {
    check(beamctl_state_create(b, o.modes, st.out()));
    check(beamctl_state_set_data(st.get(), o.data.c_str()));
    return;
  }
  std::string fixture = o.fixture;
  if (fixture.empty()) fixture = o.seed ? "random-seeded:" + std::to_string(*o.seed) : "mode1";
  check(beamctl_state_fixture(fixture.c_str(), b, o.modes, st.out()));
}

double number_from(const std::string& json_text, const char* key) {
  const auto j = ojson::parse(json_text);
  return std::stod(j.at(key).get<std::string>());
}

// ---- subcommands --------------------------------------------------------

int cmd_spectrum(const Options& o) {
  Config cfg;
  build_config(o, cfg);
  const std::string csv = text_from([&](char** s) { return beamctl_spectrum_csv(cfg.get(), s); });
  const std::string js = text_from([&](char** s) { return beamctl_spectrum_json(cfg.get(), s); });
  write_file(o, "spectrum.csv", csv);
  write_file(o, "spectrum.json", js);
  const auto j = ojson::parse(js);
  std::cout << "regime " << j["regime"].get<std::string>() << ", " << o.modes << " modes\n";
  for (const auto& c : j["collisions"]) {
    std::cout << "collision: lambda_" << c["plus_mode"].get<int>() << "^+ = lambda_" << c["minus_mode"].get<int>()
              << "^-\n";
  }
  if (j.contains("warning")) std::cout << "warning: " << j["warning"].get<std::string>() << "\n";
  return 0;
}

int cmd_synthesize(const Options& o) {
  Config cfg;
  State st;
  build_config(o, cfg);
  build_state(o, st);
  Synthesis syn;
  const beamctl_status status = beamctl_synthesize(cfg.get(), st.get(), syn.out());
  if (status != BEAMCTL_OK) {
    ojson err{{"status", "error"},
              {"exit_code", static_cast<int>(status)},
              {"cause", beamctl_last_error_cause()},
              {"message", beamctl_last_error_message()}};
    write_file(o, "synthesis.json", err.dump(2) + "\n");
    fail_last(status);
  }
  const std::string js = text_from([&](char** s) { return beamctl_synthesis_json(syn.get(), s); });
  write_file(o, "synthesis.json", js);
  write_file(o, "control.csv",
             text_from([&](char** s) { return beamctl_synthesis_control_csv(syn.get(), o.samples, s); }));
  double cost = 0, residual = 0, rel = 0;
  unsigned bits = 0;
  check(beamctl_synthesis_cost(syn.get(), &cost));
  check(beamctl_synthesis_residual(syn.get(), &residual));
  check(beamctl_synthesis_precision(syn.get(), &bits));
  check(beamctl_synthesis_final_relative(syn.get(), &rel));
  std::cout << "control cost " << cost << ", residual " << residual << ", " << bits
            << " bits, final relative norm " << rel << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  Config cfg;
  State st;
  build_config(o, cfg);
  build_state(o, st);
  Experiment ex;
  check(beamctl_verify(cfg.get(), st.get(), ex.out()));
  const std::string js = text_from([&](char** s) { return beamctl_experiment_json(ex.get(), s); });
  write_file(o, "experiment.jsonl", js);
  beamctl_verdict v{};
  beamctl_status cause_status{};
  check(beamctl_experiment_verdict(ex.get(), &v));
  check(beamctl_experiment_cause_status(ex.get(), &cause_status));
  const auto j = ojson::parse(js);
  std::cout << "verdict " << j["verdict"].get<std::string>();
  if (j.contains("cause")) std::cout << " (" << j["cause"].get<std::string>() << ")";
  std::cout << ", final relative norm " << number_from(js, "final_relative") << " closed form, "
            << number_from(js, "oracle_relative") << " RK4\n";
  if (j.contains("cause_message")) std::cerr << j["cause_message"].get<std::string>() << "\n";
  switch (v) {
    case BEAMCTL_CONTROLLED: return 0;
    case BEAMCTL_RESIDUAL_TOO_LARGE: return 4;
    case BEAMCTL_UNCONTROLLABLE: return cause_status == BEAMCTL_ERR_NUMERICAL ? 4 : 3;
  }
  return 1;
}

int cmd_cost_sweep(const Options& o) {
  Config cfg;
  State st;
  build_config(o, cfg);
  build_state(o, st);
  Sweep sw;
  check(beamctl_cost_sweep(cfg.get(), st.get(), o.horizons.data(), o.horizons.size(), sw.out()));
  const std::string csv = text_from([&](char** s) { return beamctl_sweep_csv(sw.get(), s); });
  const std::string js = text_from([&](char** s) { return beamctl_sweep_json(sw.get(), s); });
  write_file(o, "sweep.csv", csv);
  write_file(o, "sweep.json", js);
  int fitted = 0, monotone = 0;
  double slope = 0, r2 = 0;
  check(beamctl_sweep_fit(sw.get(), &fitted, &slope, &r2, &monotone));
  const auto j = ojson::parse(js);
  bool any_ok = false;
  for (const auto& p : j["points"]) any_ok = any_ok || p.contains("cost");
  if (fitted) {
    std::cout << "log cost vs 1/T: slope " << slope << ", R^2 " << r2;
  } else {
    std::cout << "fit skipped: " << j["fit"]["note"].get<std::string>();
  }
  std::cout << (monotone ? ", cost non-increasing in T\n" : ", cost NOT monotone in T\n");
  if (!any_ok) throw Failure{3, "SweepFailed", "no horizon could be synthesized"};
  return 0;
}

int cmd_condensation(const Options& o) {
  Condensation c;
  if (!o.r.empty()) {
    check(beamctl_condensation_compute(o.r.c_str(), o.n_max, o.precision_bits, c.out()));
  } else {
    Config cfg;
    build_config(o, cfg);
    check(beamctl_condensation_from_config(cfg.get(), o.n_max, c.out()));
  }
  write_file(o, "condensation.csv", text_from([&](char** s) { return beamctl_condensation_csv(c.get(), s); }));
  write_file(o, "condensation.json", text_from([&](char** s) { return beamctl_condensation_json(c.get(), s); }));
  double est = 0;
  check(beamctl_condensation_estimate(c.get(), &est));
  std::cout << "condensation estimate " << est << " (n_max " << o.n_max << ")\n";
  return 0;
}

int cmd_crosscheck(const Options& o) {
  Config cfg;
  build_config(o, cfg);
  const unsigned long long seed = o.seed.value_or(1);
  const std::string js =
      text_from([&](char** s) { return beamctl_crosscheck_json(cfg.get(), o.trials, seed, s); });
  write_file(o, "crosscheck.json", js);
  const auto j = ojson::parse(js);
  std::cout << "duhamel vs RK4 " << j["duhamel_vs_oracle"].get<std::string>() << ", free vs RK4 "
            << j["free_vs_oracle"].get<std::string>() << ", Gram vs quadrature "
            << j["gram_vs_quadrature"].get<std::string>() << "\n";
  return 0;
}

int cmd_simulate(const Options& o, bool controlled) {
  Config cfg;
  State st;
  build_config(o, cfg);
  build_state(o, st);
  Synthesis syn;
  if (controlled) check(beamctl_synthesize(cfg.get(), st.get(), syn.out()));
  write_file(o, "trajectory.csv", text_from([&](char** s) {
               return beamctl_simulate_csv(cfg.get(), st.get(), syn.get(), o.steps, o.samples, s);
             }));
  std::cout << "trajectory written (" << o.samples + 1 << " samples)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"beamctl: boundary null controls for the structurally damped beam"};
  app.set_version_flag("--version", std::string(beamctl_version()));
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--rho", o.rho, "damping coefficient (exact decimal or p/q)");
  app.add_option("--modes", o.modes, "number of modes N");
  app.add_option("--horizon", o.horizon, "control horizon T");
  app.add_option("--boundary", o.boundary, "dirichlet or neumann");
  app.add_option("--precision-bits", o.precision_bits, "working precision in bits");
  app.add_option("--precision-ceiling", o.precision_ceiling, "autoscale ceiling in bits");
  app.add_option("--regularization", o.regularization, "Tikhonov parameter");
  app.add_flag("--no-autoscale", o.no_autoscale, "fail instead of raising precision");
  app.add_option("--tolerance", o.tolerance, "relative final-state tolerance");
  app.add_option("--steps", o.steps, "RK4 steps (0 = automatic)");
  app.add_option("--seed", o.seed, "seed for random-seeded data and crosschecks");
  app.add_option("--fixture", o.fixture, "mode1 or random-seeded:<seed>");
  app.add_option("--data", o.data, "initial data n:value:velocity,...");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--samples", o.samples, "samples for control / trajectory CSVs");
  app.add_option("--config", o.config_path, "INI configuration file (overrides flags)");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue table and collision scan");
  auto* synth = app.add_subcommand("synthesize", "synthesize the minimum-norm null control");
  auto* verify = app.add_subcommand("verify", "synthesize and verify by both integration paths");
  auto* sweep = app.add_subcommand("cost-sweep", "control cost against the horizon");
  sweep->add_option("--horizons", o.horizons, "horizons T")->delimiter(',');
  auto* cond = app.add_subcommand("condensation", "finite-N condensation estimates (overdamped)");
  cond->add_option("--r", o.r, "branch ratio: p/q, sqrt(x), golden, liouville or a decimal");
  cond->add_option("--n-max", o.n_max, "largest mode index");
  auto* cross = app.add_subcommand("crosscheck", "randomized closed-form vs numerics checks");
  cross->add_option("--trials", o.trials, "random trials");
  auto* sim = app.add_subcommand("simulate", "RK4 trajectory, controlled or free");
  bool free_run = false;
  sim->add_flag("--free", free_run, "no control");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!o.config_path.empty()) apply_config_file(o);
    if (o.samples < 1) usage_error("--samples must be >= 1");
    if (spectrum->parsed()) return cmd_spectrum(o);
    if (synth->parsed()) return cmd_synthesize(o);
    if (verify->parsed()) return cmd_verify(o);
    if (sweep->parsed()) return cmd_cost_sweep(o);
    if (cond->parsed()) return cmd_condensation(o);
    if (cross->parsed()) return cmd_crosscheck(o);
    if (sim->parsed()) return cmd_simulate(o, !free_run);
  } catch (const Failure& f) {
    std::cerr << "beamctl: " << (f.cause.empty() ? "" : f.cause + ": ") << f.message << "\n";
    return f.status;
  } catch (const std::exception& e) {
    std::cerr << "beamctl: internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
