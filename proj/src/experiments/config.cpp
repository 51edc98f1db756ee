// Copyright 2026 The lhiggs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "lhiggs/errors.hpp"
#include "lhiggs/experiments.hpp"
#include "lhiggs/lattice.hpp"

namespace lhiggs::exp {

namespace {

using Values = std::vector<std::string>;
using Setter = std::function<void(RunConfig&, const Values&)>;

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

const std::string& single(const std::string& key, const Values& v) {
  if (v.size() != 1) throw InvalidInput("config key " + key + " expects a single value");
  return v.front();
}

long long parse_int(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  long long x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InvalidInput("config key " + key + ": not an integer: " + raw);
  }
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InvalidInput("config key " + key + ": not an unsigned integer: " + raw);
  }
  return x;
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw InvalidInput("config key " + key + ": not a finite number: " + raw);
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidInput("config key " + key + ": not a boolean: " + raw);
}

std::pair<int, int> parse_loop(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  const auto x = s.find('x');
  if (x == std::string::npos) throw InvalidInput("config key " + key + ": loop must be WxH: " + raw);
  return {static_cast<int>(parse_int(key, s.substr(0, x))), static_cast<int>(parse_int(key, s.substr(x + 1)))};
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto ival = [](const std::string& key, const Values& v) { return parse_int(key, single(key, v)); };
    auto dval = [](const std::string& key, const Values& v) { return parse_double(key, single(key, v)); };
    t["model.m"] = [=](RunConfig& c, const Values& v) { c.m = static_cast<int>(ival("model.m", v)); };
    t["model.N"] = [=](RunConfig& c, const Values& v) { c.N = static_cast<int>(ival("model.N", v)); };
    t["model.beta"] = [=](RunConfig& c, const Values& v) { c.beta = dval("model.beta", v); };
    t["model.kappa"] = [=](RunConfig& c, const Values& v) { c.kappa = dval("model.kappa", v); };
    t["model.k"] = [=](RunConfig& c, const Values& v) { c.k = static_cast<int>(ival("model.k", v)); };
    t["model.j"] = [=](RunConfig& c, const Values& v) { c.j = static_cast<int>(ival("model.j", v)); };
    t["geometry.R"] = [=](RunConfig& c, const Values& v) { c.R = static_cast<int>(ival("geometry.R", v)); };
    t["geometry.T"] = [=](RunConfig& c, const Values& v) { c.T = static_cast<int>(ival("geometry.T", v)); };
    t["geometry.n"] = [](RunConfig& c, const Values& v) {
      c.n.clear();
      for (const auto& s : v) c.n.push_back(static_cast<int>(parse_int("geometry.n", s)));
    };
    t["wilson.loops"] = [](RunConfig& c, const Values& v) {
      c.loops.clear();
      for (const auto& s : v) c.loops.push_back(parse_loop("wilson.loops", s));
    };
    t["sampler.sweeps"] = [=](RunConfig& c, const Values& v) { c.sampler.sweeps = ival("sampler.sweeps", v); };
    t["sampler.burn_in"] = [=](RunConfig& c, const Values& v) { c.sampler.burn_in = ival("sampler.burn_in", v); };
    t["sampler.thin"] = [=](RunConfig& c, const Values& v) { c.sampler.thin = static_cast<int>(ival("sampler.thin", v)); };
    t["sampler.seed"] = [](RunConfig& c, const Values& v) {
      c.sampler.seed = parse_u64("sampler.seed", single("sampler.seed", v));
    };
    t["sampler.proposal_width"] = [=](RunConfig& c, const Values& v) {
      c.sampler.proposal_width = dval("sampler.proposal_width", v);
    };
    t["sampler.bins"] = [=](RunConfig& c, const Values& v) { c.sampler.bins = static_cast<int>(ival("sampler.bins", v)); };
    t["sampler.chains"] = [=](RunConfig& c, const Values& v) {
      c.sampler.chains = static_cast<int>(ival("sampler.chains", v));
    };
    t["sampler.tune"] = [](RunConfig& c, const Values& v) { c.sampler.tune = parse_bool("sampler.tune", single("sampler.tune", v)); };
    t["sampler.hot_start"] = [](RunConfig& c, const Values& v) {
      c.sampler.hot_start = parse_bool("sampler.hot_start", single("sampler.hot_start", v));
    };
    t["enumeration.M"] = [=](RunConfig& c, const Values& v) { c.M = static_cast<int>(ival("enumeration.M", v)); };
    t["enumeration.max_terms_times_budget"] = [=](RunConfig& c, const Values& v) {
      c.max_terms_times_budget = ival("enumeration.max_terms_times_budget", v);
    };
    t["enumeration.max_visits"] = [=](RunConfig& c, const Values& v) { c.max_visits = ival("enumeration.max_visits", v); };
    t["integrator.nodes"] = [=](RunConfig& c, const Values& v) { c.nodes = static_cast<int>(ival("integrator.nodes", v)); };
    t["integrator.rel_tol"] = [=](RunConfig& c, const Values& v) { c.rel_tol = dval("integrator.rel_tol", v); };
    t["integrator.mc_samples"] = [=](RunConfig& c, const Values& v) { c.mc_samples = ival("integrator.mc_samples", v); };
    t["integrator.max_quad_edges"] = [=](RunConfig& c, const Values& v) {
      c.max_quad_edges = static_cast<int>(ival("integrator.max_quad_edges", v));
    };
    t["integrator.max_plaquettes"] = [=](RunConfig& c, const Values& v) {
      c.max_plaquettes = static_cast<int>(ival("integrator.max_plaquettes", v));
    };
    t["phase.beta_min"] = [=](RunConfig& c, const Values& v) { c.beta_min = dval("phase.beta_min", v); };
    t["phase.beta_max"] = [=](RunConfig& c, const Values& v) { c.beta_max = dval("phase.beta_max", v); };
    t["phase.beta_steps"] = [=](RunConfig& c, const Values& v) { c.beta_steps = static_cast<int>(ival("phase.beta_steps", v)); };
    t["phase.kappa_min"] = [=](RunConfig& c, const Values& v) { c.kappa_min = dval("phase.kappa_min", v); };
    t["phase.kappa_max"] = [=](RunConfig& c, const Values& v) { c.kappa_max = dval("phase.kappa_max", v); };
    t["phase.kappa_steps"] = [=](RunConfig& c, const Values& v) {
      c.kappa_steps = static_cast<int>(ival("phase.kappa_steps", v));
    };
    t["phase.a_m"] = [=](RunConfig& c, const Values& v) { c.a_m = static_cast<int>(ival("phase.a_m", v)); };
    t["phase.holder"] = [](RunConfig& c, const Values& v) { c.holder = parse_bool("phase.holder", single("phase.holder", v)); };
    t["phase.g1_levels"] = [](RunConfig& c, const Values& v) {
      c.g1_levels.clear();
      for (const auto& s : v) c.g1_levels.push_back(parse_double("phase.g1_levels", s));
    };
    t["phase.a_levels"] = [](RunConfig& c, const Values& v) {
      c.a_levels.clear();
      for (const auto& s : v) c.a_levels.push_back(parse_double("phase.a_levels", s));
    };
    t["currents.complex"] = [](RunConfig& c, const Values& v) { c.complex = unquote(single("currents.complex", v)); };
    t["output.dir"] = [](RunConfig& c, const Values& v) { c.out = unquote(single("output.dir", v)); };
    return t;
  }();
  return table;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T, class F>
std::string list(const std::vector<T>& v, F f) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
  return s + "]";
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw InvalidInput(std::string("config parse error: ") + e.what());
  }
  std::set<std::string> seen;
  for (const CLI::ConfigItem& it : items) {
    if (it.name == "++" || it.name == "--") continue;  // section markers
    const std::string key = it.fullname();
    const auto s = setters().find(key);
    if (s == setters().end()) throw InvalidInput("unknown config key: " + key);
    if (!seen.insert(key).second) throw InvalidInput("duplicate config key: " + key);
    s->second(cfg, it.inputs);
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  auto itos = [](auto x) { return std::to_string(x); };
  os << "[model]\n"
     << "m = " << m << "\nN = " << N << "\nbeta = " << num(beta) << "\nkappa = " << num(kappa) << "\nk = " << k
     << "\nj = " << j << "\n\n";
  os << "[geometry]\nR = " << R << "\nT = " << T << "\nn = " << list(n, itos) << "\n\n";
  os << "[wilson]\nloops = "
     << list(loops, [](const std::pair<int, int>& l) {
          return "\"" + std::to_string(l.first) + "x" + std::to_string(l.second) + "\"";
        })
     << "\n\n";
  os << "[sampler]\nsweeps = " << sampler.sweeps << "\nburn_in = " << sampler.burn_in << "\nthin = " << sampler.thin
     << "\nseed = " << sampler.seed << "\nproposal_width = " << num(sampler.proposal_width)
     << "\nbins = " << sampler.bins << "\nchains = " << sampler.chains
     << "\ntune = " << (sampler.tune ? "true" : "false") << "\nhot_start = " << (sampler.hot_start ? "true" : "false")
     << "\n\n";
  os << "[enumeration]\nM = " << M << "\nmax_terms_times_budget = " << max_terms_times_budget
     << "\nmax_visits = " << max_visits << "\n\n";
  os << "[integrator]\nnodes = " << nodes << "\nrel_tol = " << num(rel_tol) << "\nmc_samples = " << mc_samples
     << "\nmax_quad_edges = " << max_quad_edges << "\nmax_plaquettes = " << max_plaquettes << "\n\n";
  os << "[phase]\nbeta_min = " << num(beta_min) << "\nbeta_max = " << num(beta_max) << "\nbeta_steps = " << beta_steps
     << "\nkappa_min = " << num(kappa_min) << "\nkappa_max = " << num(kappa_max) << "\nkappa_steps = " << kappa_steps
     << "\na_m = " << a_m << "\nholder = " << (holder ? "true" : "false")
     << "\ng1_levels = " << list(g1_levels, num) << "\na_levels = " << list(a_levels, num) << "\n\n";
  os << "[currents]\ncomplex = \"" << complex << "\"\n\n";
  os << "[output]\ndir = \"" << out << "\"\n";
  return os.str();
}

void RunConfig::validate() const {
  if (m < 1 || m > kMaxDim) throw InvalidInput("model.m must be in 1..6");
  if (N < 1 || N > kMaxRadius) throw InvalidInput("model.N must be in 1..60");
  if (!(beta >= 0.0) || !(kappa >= 0.0)) throw InvalidInput("model.beta and model.kappa must be >= 0");
  if (k < 0) throw InvalidInput("model.k must be >= 0");
  if (j < 1) throw InvalidInput("model.j must be >= 1");
  if (R < 1 || T < 1) throw InvalidInput("geometry.R and geometry.T must be >= 1");
  for (int x : n) {
    if (x < 1) throw InvalidInput("geometry.n entries must be >= 1");
  }
  for (const auto& [w, h] : loops) {
    if (w < 1 || h < 1) throw InvalidInput("wilson.loops entries must be at least 1x1");
  }
  sampler.validate();
  if (M < 0) throw InvalidInput("enumeration.M must be >= 0");
  if (max_terms_times_budget < 1 || max_visits < 1) throw InvalidInput("enumeration limits must be >= 1");
  if (nodes < 16 || nodes > 256 || (nodes & (nodes - 1)) != 0) {
    throw InvalidInput("integrator.nodes must be a power of two in 16..256");
  }
  if (!(rel_tol > 0.0)) throw InvalidInput("integrator.rel_tol must be > 0");
  if (mc_samples < 1000) throw InvalidInput("integrator.mc_samples must be >= 1000");
  if (max_quad_edges < 4) throw InvalidInput("integrator.max_quad_edges must be >= 4");
  if (max_plaquettes < 1) throw InvalidInput("integrator.max_plaquettes must be >= 1");
  if (beta_steps < 1 || kappa_steps < 1) throw InvalidInput("phase grid needs at least one step per axis");
  if (!(beta_min >= 0.0) || beta_max < beta_min || !(kappa_min >= 0.0) || kappa_max < kappa_min) {
    throw InvalidInput("phase grid bounds must satisfy 0 <= min <= max");
  }
  if (a_m < 0) throw InvalidInput("phase.a_m must be >= 0");
  static const std::set<std::string> complexes{"edge", "plaquette", "pendant", "box"};
  if (!complexes.count(complex)) throw InvalidInput("currents.complex must be edge, plaquette, pendant or box");
  if (out.empty()) throw InvalidInput("output.dir must not be empty");
}

int worker_count() {
  if (const char* env = std::getenv("LHIGGS_WORKERS")) {
    const std::string s(env);
    int w = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
    if (ec != std::errc() || p != s.data() + s.size() || w < 1) {
      throw InvalidInput("LHIGGS_WORKERS must be a positive integer");
    }
    return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace lhiggs::exp
