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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lhiggs/errors.hpp"
#include "lhiggs/experiments.hpp"

using namespace lhiggs;
using namespace lhiggs::exp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lhiggs-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    rows.push_back(cols);
  }
  return rows;
}

}  // namespace

TEST_SUITE("experiments_cli") {
  TEST_CASE("config round trip and defaults") {
    const RunConfig d;
    CHECK(d.m == 3);
    const RunConfig r = RunConfig::parse(d.serialize());
    CHECK(r.serialize() == d.serialize());

    const RunConfig c = RunConfig::parse(
        "[model]\nm = 4\nbeta = 0.25\nk = 2\nj = 2\n[wilson]\nloops = [\"1x1\", \"2x3\"]\n"
        "[sampler]\nsweeps = 500\nseed = 18446744073709551615\n[geometry]\nn = [1, 4]\n");
    CHECK(c.m == 4);
    CHECK(c.beta == 0.25);
    CHECK(c.loops == std::vector<std::pair<int, int>>{{1, 1}, {2, 3}});
    CHECK(c.sampler.sweeps == 500);
    CHECK(c.sampler.seed == 18446744073709551615ull);
    CHECK(c.n == std::vector<int>{1, 4});
    CHECK(RunConfig::parse(c.serialize()).serialize() == c.serialize());
  }

  TEST_CASE("config rejects unknown, duplicate and invalid entries") {
    CHECK_THROWS_AS(RunConfig::parse("[model]\nbogus = 1\n"), InvalidInput);
    CHECK_THROWS_AS(RunConfig::parse("[nowhere]\nm = 1\n"), InvalidInput);
    CHECK_THROWS_AS(RunConfig::parse("[model]\nm = 3\nm = 4\n"), InvalidInput);
    CHECK_THROWS_AS(RunConfig::parse("[model]\nm = three\n"), InvalidInput);
    RunConfig bad;
    bad.beta = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = RunConfig{};
    bad.sampler.bins = 2;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = RunConfig{};
    bad.complex = "torus";
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/lhiggs.toml"), InvalidInput);
  }

  TEST_CASE("sha256 and manifests") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    const fs::path dir = scratch("manifest");
    RunConfig cfg;
    RunRecorder rec("demo", cfg, dir);
    rec.write("a.csv", "x,y\n1,2\n");
    rec.add_seed(42);
    const fs::path man = rec.finish();
    CHECK(man.filename() == "demo.manifest.json");
    std::string problem;
    CHECK(verify_manifest(man, &problem));
    const std::string json = slurp(man);
    CHECK(json.find("\"csv_schema_version\"") != std::string::npos);
    CHECK(json.find("demo.config.toml") != std::string::npos);
    std::ofstream(dir / "a.csv") << "tampered\n";
    CHECK_FALSE(verify_manifest(man, &problem));
    CHECK(problem.find("a.csv") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("guarded maps exceptions to exit codes") {
    std::ostringstream err;
    CHECK(guarded([] { return 0; }, err) == kOk);
    CHECK(guarded([]() -> int { throw InvalidInput("x"); }, err) == kInvalidInput);
    CHECK(guarded([]() -> int { throw ResourceGuard("x"); }, err) == kResourceGuard);
    CHECK(guarded([]() -> int { throw NotConverged("x"); }, err) == kResourceGuard);
    CHECK(guarded([]() -> int { throw std::runtime_error("x"); }, err) == kInvariantFailure);
  }

  TEST_CASE("phase scan CSV columns") {
    RunConfig cfg;
    cfg.holder = false;
    int a_m = 0;
    const auto rows = csv_rows(phase_scan_csv(cfg, &a_m));
    CHECK(a_m >= 2);
    REQUIRE(rows.size() == 1 + 11 * 6);
    CHECK(rows[0] == std::vector<std::string>{"beta", "kappa", "g1", "a_conf", "holder_factor"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double b = std::stod(rows[i][0]), k = std::stod(rows[i][1]);
      CHECK(std::abs(std::stod(rows[i][2]) - std::expm1(b) * std::exp(4 * k)) <= 1e-12);
    }
  }

  TEST_CASE("currents command reports the divisibility certificate") {
    const fs::path dir = scratch("currents");
    CommandContext ctx;
    ctx.cfg.complex = "edge";
    ctx.cfg.k = 2;
    ctx.cfg.j = 1;
    ctx.cfg.M = 8;
    ctx.cfg.out = dir.string();
    std::ostringstream log;
    ctx.log = &log;
    CHECK(cmd_currents(ctx) == kOk);
    CHECK(log.str().find("empty by divisibility") != std::string::npos);
    CHECK(verify_manifest(dir / "currents.manifest.json"));

    ctx.cfg.complex = "plaquette";
    ctx.cfg.k = 1;
    ctx.cfg.j = 1;
    ctx.cfg.M = 6;
    std::ostringstream log2;
    ctx.log = &log2;
    CHECK(cmd_currents(ctx) == kOk);
    CHECK(log2.str().find("match unpruned brute force") != std::string::npos);
    CHECK(log2.str().find("round-trip ok") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("runs are reproducible byte for byte") {
    const fs::path a = scratch("repro-a"), b = scratch("repro-b");
    CommandContext ctx;
    ctx.cfg.m = 3;
    ctx.cfg.N = 2;
    ctx.cfg.sampler.sweeps = 400;
    ctx.cfg.sampler.burn_in = 100;
    ctx.cfg.n = {1};
    std::ostringstream log;
    ctx.log = &log;
    ctx.cfg.out = a.string();
    CHECK(cmd_mf_ratio(ctx) == kOk);
    ctx.cfg.out = b.string();
    CHECK(cmd_mf_ratio(ctx) == kOk);
    CHECK(slurp(a / "mf_ratio.csv") == slurp(b / "mf_ratio.csv"));
    const auto rows = csv_rows(slurp(a / "mf_ratio.csv"));
    CHECK(rows[0][0] == "n");
    CHECK(rows[0][9] == "status");
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("mf-ratio with k not dividing j flags every row") {
    const fs::path dir = scratch("mf-zero");
    CommandContext ctx;
    ctx.cfg.k = 2;
    ctx.cfg.j = 1;
    ctx.cfg.N = 3;
    ctx.cfg.sampler.sweeps = 300;
    ctx.cfg.sampler.burn_in = 100;
    ctx.cfg.out = dir.string();
    std::ostringstream log;
    ctx.log = &log;
    CHECK(cmd_mf_ratio(ctx) == kOk);
    const auto rows = csv_rows(slurp(dir / "mf_ratio.csv"));
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][9] == "identically-zero-numerator");
    fs::remove_all(dir);
  }
}
