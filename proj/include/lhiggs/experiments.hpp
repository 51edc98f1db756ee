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

// Experiment orchestration behind the `lhiggs` command line: run
// configuration, manifests with output digests, and one function per
// subcommand. Commands return process exit codes:
//   0 success, 1 invariant failure, 2 invalid input, 3 resource guard.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lhiggs/gibbs.hpp"
#include "lhiggs/stats.hpp"

namespace lhiggs::exp {

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kInvalidInput = 2, kResourceGuard = 3 };

struct RunConfig {
  // [model]
  int m = 3;
  int N = 2;
  double beta = 0.2;
  double kappa = 0.3;
  int k = 1;
  int j = 1;
  // [geometry]
  int R = 1;
  int T = 1;
  std::vector<int> n{1, 2, 3};
  // [wilson]
  std::vector<std::pair<int, int>> loops{{1, 1}, {1, 2}, {2, 2}, {1, 3}, {2, 3}, {3, 3}};
  // [sampler]
  SamplerConfig sampler;
  // [enumeration]
  int M = 16;
  long long max_terms_times_budget = 4096;
  long long max_visits = 400'000'000;
  // [integrator]
  int nodes = 16;
  double rel_tol = 1e-8;
  long long mc_samples = 400000;
  int max_quad_edges = 6;
  int max_plaquettes = 3;
  // [phase]
  double beta_min = 0.0;
  double beta_max = 1.0;
  int beta_steps = 11;
  double kappa_min = 0.0;
  double kappa_max = 0.5;
  int kappa_steps = 6;
  int a_m = 0;  // 0 selects the computed plaquette-partition size
  bool holder = true;
  std::vector<double> g1_levels{1.0};
  std::vector<double> a_levels{1.0};
  // [currents]
  std::string complex = "plaquette";  // edge | plaquette | pendant | box
  // [output]
  std::string out = "lhiggs-out";

  /// Parses key = value text with [section] headers; unknown keys and
  /// malformed values raise InvalidInput.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  /// Canonical text with every key; parse(serialize()) round-trips.
  std::string serialize() const;
  void validate() const;
};

/// Worker count from LHIGGS_WORKERS, defaulting to the available cores.
int worker_count();

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::string config;  // canonical config text
  std::vector<std::uint64_t> seeds;
  std::string version;
  std::string started;
  std::string finished;
  std::vector<OutputFile> files;
  std::string csv_schema_version = "1";
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& p);

/// Writes <dir>/<command>.manifest.json and returns its path.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& m);

/// True when every file listed in the manifest exists with a matching digest.
bool verify_manifest(const std::filesystem::path& manifest_path, std::string* problem = nullptr);

/// Collects output files for one command and emits its manifest.
class RunRecorder {
 public:
  RunRecorder(std::string command, const RunConfig& cfg, std::filesystem::path dir);
  /// Writes `contents` to <dir>/<name> and records its digest.
  void write(const std::string& name, const std::string& contents);
  void add_seed(std::uint64_t s) { manifest_.seeds.push_back(s); }
  std::filesystem::path finish();
  const std::filesystem::path& dir() const { return dir_; }

 private:
  RunManifest manifest_;
  std::filesystem::path dir_;
};

struct CommandContext {
  RunConfig cfg;
  bool quick = false;
  std::ostream* log = nullptr;  // progress and summaries; defaults to std::cout
  std::ostream& out() const;
};

// --- reusable pieces of the experiments -------------------------------------

struct WilsonScanPoint {
  int w = 0;
  int h = 0;
  int j = 1;
  LoopPoint point;
  double im = 0.0;
  double im_err = 0.0;
};

struct WilsonScanResult {
  std::vector<WilsonScanPoint> points;  // per j, in loop order
  std::map<int, DecayFit> fits;         // by j
  std::map<int, Estimate> single_edge;  // bulk single-edge estimate by j
  double acceptance = 0.0;
};

/// Translation-averaged rectangle loops for every charge in `js`, measured on
/// one set of chains, followed by a decay fit per charge.
WilsonScanResult wilson_scan(const RunConfig& cfg, const std::vector<int>& js);

std::string phase_scan_csv(const RunConfig& cfg, int* a_m_used = nullptr);

/// Where each configured g1 / a_conf level set meets kappa = kappa_min, found
/// by bisection in beta; columns quantity,level,kappa,beta. "nan" when the
/// level is not reached for beta <= 50.
std::string phase_levels_csv(const RunConfig& cfg);

struct ValidateOptions {
  bool quick = false;
  std::string inject_fault;  // "", or "bessel"
};

struct InvariantResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the validation suite and returns one result per named invariant.
std::vector<InvariantResult> run_validation(const ValidateOptions& opt, std::string* cross_csv = nullptr,
                                            std::ostream* progress = nullptr);

// --- subcommands --------------------------------------------------------------

int cmd_validate(const CommandContext& ctx, const ValidateOptions& opt);
int cmd_mf_ratio(const CommandContext& ctx);
int cmd_wilson_scan(const CommandContext& ctx);
int cmd_phase_scan(const CommandContext& ctx);
int cmd_currents(const CommandContext& ctx);
int cmd_polymers(const CommandContext& ctx);

/// Runs `fn`, mapping InvalidInput / ResourceGuard / NotConverged and other
/// exceptions to exit codes with a message on `err`.
int guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace lhiggs::exp
